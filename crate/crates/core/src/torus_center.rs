//! The torus side of the Bernstein-center description at depth one:
//! pairs (λ, χ) of a cocharacter and a character of T₀/T₁ ≅ (F_q^×)^rank,
//! the W₀-action on them, orbit sums, the stabilizers W_χ, and the
//! decomposition of each orbit into character blocks.
//!
//! A character is stored as its exponent vector a ∈ (Z/(q−1))^rank against a
//! fixed generator of F_q^×, so χ(y ⊗ u) = g(u)^{⟨a, y⟩}. The uniformizer
//! splitting T/T₁ ≅ X_*(T) × T₀/T₁ is fixed once and for all.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use serde::Serialize;

use crate::root_datum::{box_points, mat_vec, Coweight, IntMatrix, RootDatum, WeylGroup};
use crate::{HeckeError, Result};

/// `(p, k)` with q = p^k, when q is a prime power.
pub fn prime_power(q: u64) -> Option<(u64, u32)> {
    if q < 2 {
        return None;
    }
    let p = (2..).find(|d| q.is_multiple_of(*d) || d * d > q).filter(|d| q.is_multiple_of(*d)).unwrap_or(q);
    let (mut r, mut k) = (q, 0);
    while r % p == 0 {
        r /= p;
        k += 1;
    }
    (r == 1).then_some((p, k))
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct ResidueCharacter {
    /// Exponents reduced mod q − 1.
    pub exponents: Vec<u64>,
}

impl ResidueCharacter {
    pub fn trivial(rank: usize) -> Self {
        ResidueCharacter { exponents: vec![0; rank] }
    }

    pub fn is_trivial(&self) -> bool {
        self.exponents.iter().all(|&e| e == 0)
    }
}

/// f_{λ,χ}, identified with its index pair.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct Pair {
    pub lambda: Vec<i64>,
    pub chi: Vec<u64>,
}

/// All characters of T₀/T_n for depth n = 1, in lexicographic order.
pub fn enumerate_characters(datum: &RootDatum, q: u64, n: u32) -> Result<Vec<ResidueCharacter>> {
    if prime_power(q).is_none() {
        return Err(HeckeError::NotPrimePower(q));
    }
    if n != 1 {
        return Err(HeckeError::UnsupportedDepth(n));
    }
    let mut out = vec![Vec::new()];
    for _ in 0..datum.rank {
        out = out
            .into_iter()
            .flat_map(|p: Vec<u64>| {
                (0..q - 1).map(move |e| {
                    let mut v = p.clone();
                    v.push(e);
                    v
                })
            })
            .collect();
    }
    Ok(out.into_iter().map(|exponents| ResidueCharacter { exponents }).collect())
}

fn transpose(m: &IntMatrix) -> IntMatrix {
    (0..m.len()).map(|i| m.iter().map(|row| row[i]).collect()).collect()
}

/// The W₀-action on pairs, with the character matrices precomputed.
pub struct PairAction {
    pub weyl: WeylGroup,
    /// Transpose of the inverse coweight action, per Weyl element.
    char_action: Vec<IntMatrix>,
    modulus: u64,
}

impl PairAction {
    pub fn new(datum: &RootDatum, q: u64) -> Result<Self> {
        if prime_power(q).is_none() {
            return Err(HeckeError::NotPrimePower(q));
        }
        let weyl = datum.weyl_group()?;
        let char_action = (0..weyl.len()).map(|w| transpose(&weyl.elements[weyl.inverse[w]].action)).collect();
        Ok(PairAction { weyl, char_action, modulus: q - 1 })
    }

    pub fn act_char(&self, w: usize, chi: &[u64]) -> Vec<u64> {
        let m = self.modulus as i64;
        let v: Vec<i64> = chi.iter().map(|&e| e as i64).collect();
        mat_vec(&self.char_action[w], &v).into_iter().map(|e| e.rem_euclid(m) as u64).collect()
    }

    /// w·(λ, χ) = (w(λ), χ ∘ w⁻¹).
    pub fn act(&self, w: usize, p: &Pair) -> Pair {
        Pair { lambda: mat_vec(&self.weyl.elements[w].action, &p.lambda), chi: self.act_char(w, &p.chi) }
    }

    pub fn orbit(&self, p: &Pair) -> BTreeSet<Pair> {
        (0..self.weyl.len()).map(|w| self.act(w, p)).collect()
    }

    /// W_χ as indices into the Weyl group.
    pub fn stabilizer(&self, chi: &[u64]) -> Vec<usize> {
        (0..self.weyl.len()).filter(|&w| self.act_char(w, chi) == chi).collect()
    }
}

/// Public form of [`PairAction::act`] for a single Weyl element.
pub fn weyl_act_pair(datum: &RootDatum, q: u64, w: usize, p: &Pair) -> Result<Pair> {
    Ok(PairAction::new(datum, q)?.act(w, p))
}

/// W_χ, checked to be closed under composition.
pub fn stabilizer_wchi(datum: &RootDatum, q: u64, chi: &ResidueCharacter) -> Result<Vec<usize>> {
    let action = PairAction::new(datum, q)?;
    let stab = action.stabilizer(&chi.exponents);
    let members: BTreeSet<usize> = stab.iter().copied().collect();
    assert!(stab.iter().all(|&a| stab.iter().all(|&b| members.contains(&action.weyl.mul(a, b)))));
    Ok(stab)
}

#[derive(Clone, Debug, Serialize)]
pub struct OrbitSum {
    /// Canonically ordered; the first pair is the representative.
    pub orbit: Vec<Pair>,
}

impl OrbitSum {
    pub fn len(&self) -> usize {
        self.orbit.len()
    }

    pub fn is_empty(&self) -> bool {
        self.orbit.is_empty()
    }
}

/// The truncated pair space: pairs whose λ lies in the sup-norm box of
/// radius R, closed up under W₀ when the box itself is not W₀-stable.
pub struct Truncation {
    pub box_stable: bool,
    pub points: Vec<Pair>,
    pub orbits: Vec<OrbitSum>,
}

pub fn truncate(datum: &RootDatum, action: &PairAction, q: u64, radius: i64) -> Result<Truncation> {
    if radius < 0 {
        return Err(HeckeError::InvalidBounds(format!("radius {radius} is negative")));
    }
    let chars = enumerate_characters(datum, q, 1)?;
    let mut seen: BTreeSet<Pair> = BTreeSet::new();
    let mut orbits = Vec::new();
    for lambda in box_points(datum.rank, radius) {
        for chi in &chars {
            let p = Pair { lambda: lambda.0.clone(), chi: chi.exponents.clone() };
            if seen.contains(&p) {
                continue;
            }
            let orbit = action.orbit(&p);
            seen.extend(orbit.iter().cloned());
            orbits.push(OrbitSum { orbit: orbit.into_iter().collect() });
        }
    }
    orbits.sort_by(|a, b| a.orbit[0].cmp(&b.orbit[0]));
    let box_stable = datum.box_is_weyl_stable(radius);
    if box_stable {
        assert!(seen.iter().all(|p| Coweight(p.lambda.clone()).sup_norm() <= radius), "W₀-stable box clipped an orbit");
    }
    Ok(Truncation { box_stable, points: seen.into_iter().collect(), orbits })
}

/// (1/|W₀|)·Σ_w |Fix(w)| over the truncated space.
pub fn burnside_count(action: &PairAction, points: &[Pair]) -> usize {
    let fixed: usize = (0..action.weyl.len()).map(|w| points.iter().filter(|p| &action.act(w, p) == *p).count()).sum();
    assert_eq!(fixed % action.weyl.len(), 0);
    fixed / action.weyl.len()
}

/// dim ∩_i ker(s_i − 1) on the span of the truncated monomials, by exact
/// sparse elimination.
pub fn kernel_dimension(datum: &RootDatum, action: &PairAction, points: &[Pair]) -> usize {
    let index: HashMap<&Pair, usize> = points.iter().enumerate().map(|(i, p)| (p, i)).collect();
    let simple: Vec<usize> =
        (0..datum.semisimple_rank()).map(|i| action.weyl.left_simple[i][action.weyl.identity()]).collect();
    let mut pivots: HashMap<usize, BTreeMap<usize, BigRational>> = HashMap::new();
    for &s in &simple {
        for (j, p) in points.iter().enumerate() {
            // Row j of the matrix of s − 1 is e_{s⁻¹(j)} − e_j, and s⁻¹ = s.
            let target = index[&action.act(s, p)];
            let mut row: BTreeMap<usize, BigRational> = BTreeMap::new();
            *row.entry(target).or_insert_with(BigRational::zero) += BigRational::from_integer(BigInt::from(1));
            *row.entry(j).or_insert_with(BigRational::zero) -= BigRational::from_integer(BigInt::from(1));
            row.retain(|_, v| !v.is_zero());
            reduce_into(&mut pivots, row);
        }
    }
    points.len() - pivots.len()
}

fn reduce_into(pivots: &mut HashMap<usize, BTreeMap<usize, BigRational>>, mut row: BTreeMap<usize, BigRational>) {
    while let Some((&c, v)) = row.iter().next() {
        let Some(p) = pivots.get(&c) else {
            pivots.insert(c, row);
            return;
        };
        let factor = v / &p[&c];
        for (k, pv) in p {
            let e = row.entry(*k).or_insert_with(BigRational::zero);
            *e -= &factor * pv;
        }
        row.retain(|_, v| !v.is_zero());
        debug_assert!(row.keys().next().is_none_or(|&k| k > c));
    }
}

pub fn orbits(datum: &RootDatum, q: u64, radius: i64) -> Result<Vec<OrbitSum>> {
    let action = PairAction::new(datum, q)?;
    Ok(truncate(datum, &action, q, radius)?.orbits)
}

pub fn invariant_dimension(datum: &RootDatum, q: u64, radius: i64) -> Result<usize> {
    let action = PairAction::new(datum, q)?;
    let t = truncate(datum, &action, q, radius)?;
    let dim = kernel_dimension(datum, &action, &t.points);
    assert_eq!(dim, t.orbits.len(), "orbit count and invariant dimension disagree");
    Ok(dim)
}

#[derive(Clone, Debug, Serialize)]
pub struct CharacterBlock {
    pub chi: Vec<u64>,
    pub size: usize,
    pub stabilizer_order: usize,
    /// The block is the W_χ-orbit of any of its members.
    pub is_stabilizer_orbit: bool,
    /// z_{O_χ} is fixed by W_χ.
    pub invariant: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct RocReport {
    pub representative: Pair,
    pub orbit_size: usize,
    /// z_O is fixed by all of W₀.
    pub orbit_sum_invariant: bool,
    /// The characters of O form one W₀-orbit.
    pub characters_form_orbit: bool,
    /// z_O = Σ z_{O_χ} as formal sums.
    pub sum_identity: bool,
    pub blocks: Vec<CharacterBlock>,
    pub passes: bool,
}

pub fn roc_decomposition_check(action: &PairAction, orbit: &OrbitSum) -> Result<RocReport> {
    let set: BTreeSet<Pair> = orbit.orbit.iter().cloned().collect();
    let first = orbit.orbit.first().ok_or_else(|| HeckeError::NotAnOrbit("empty".into()))?;
    if set.len() != orbit.len() || action.orbit(first) != set {
        return Err(HeckeError::NotAnOrbit(format!("orbit of {first:?} has {} elements", action.orbit(first).len())));
    }
    let orbit_sum_invariant = (0..action.weyl.len()).all(|w| set.iter().all(|p| set.contains(&action.act(w, p))));
    let mut by_chi: BTreeMap<Vec<u64>, BTreeSet<Pair>> = BTreeMap::new();
    for p in &set {
        by_chi.entry(p.chi.clone()).or_default().insert(p.clone());
    }
    let chi_orbit: BTreeSet<Vec<u64>> = (0..action.weyl.len()).map(|w| action.act_char(w, &first.chi)).collect();
    let characters_form_orbit = by_chi.keys().cloned().collect::<BTreeSet<_>>() == chi_orbit;
    let mut total: BTreeMap<Pair, i64> = BTreeMap::new();
    let mut blocks = Vec::new();
    for (chi, block) in &by_chi {
        let stab = action.stabilizer(chi);
        let member = block.iter().next().unwrap();
        let generated: BTreeSet<Pair> = stab.iter().map(|&w| action.act(w, member)).collect();
        let invariant = stab.iter().all(|&w| block.iter().all(|p| block.contains(&action.act(w, p))));
        for p in block {
            *total.entry(p.clone()).or_default() += 1;
        }
        blocks.push(CharacterBlock {
            chi: chi.clone(),
            size: block.len(),
            stabilizer_order: stab.len(),
            is_stabilizer_orbit: &generated == block,
            invariant,
        });
    }
    let sum_identity = total.len() == set.len() && total.values().all(|&c| c == 1);
    let passes = orbit_sum_invariant
        && characters_form_orbit
        && sum_identity
        && blocks.iter().all(|b| b.is_stabilizer_orbit && b.invariant);
    Ok(RocReport {
        representative: first.clone(),
        orbit_size: set.len(),
        orbit_sum_invariant,
        characters_form_orbit,
        sum_identity,
        blocks,
        passes,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct TorusCenterReport {
    pub datum: String,
    pub q: u64,
    pub radius: i64,
    pub characters: usize,
    pub box_stable: bool,
    pub truncated_points: usize,
    pub orbit_count: usize,
    pub burnside_count: usize,
    pub kernel_dimension: usize,
    pub orbits: Vec<OrbitSum>,
    pub stabilizer_orders: BTreeMap<String, usize>,
    pub roc: Vec<RocReport>,
    pub passes: bool,
}

/// Orbits, the three independent counts, stabilizers and the block check.
pub fn torus_center_report(datum: &RootDatum, q: u64, radius: i64) -> Result<TorusCenterReport> {
    let action = PairAction::new(datum, q)?;
    let chars = enumerate_characters(datum, q, 1)?;
    let t = truncate(datum, &action, q, radius)?;
    let burnside = burnside_count(&action, &t.points);
    let kernel = kernel_dimension(datum, &action, &t.points);
    let roc = t.orbits.iter().map(|o| roc_decomposition_check(&action, o)).collect::<Result<Vec<_>>>()?;
    let stabilizer_orders =
        chars.iter().map(|c| (format!("{:?}", c.exponents), action.stabilizer(&c.exponents).len())).collect();
    let passes = burnside == t.orbits.len() && kernel == t.orbits.len() && roc.iter().all(|r| r.passes);
    Ok(TorusCenterReport {
        datum: datum.name.clone(),
        q,
        radius,
        characters: chars.len(),
        box_stable: t.box_stable,
        truncated_points: t.points.len(),
        orbit_count: t.orbits.len(),
        burnside_count: burnside,
        kernel_dimension: kernel,
        orbits: t.orbits,
        stabilizer_orders,
        roc,
        passes,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gl(n: usize) -> RootDatum {
        RootDatum::named(&format!("gl{n}")).unwrap()
    }

    fn pair(l: &[i64], c: &[u64]) -> Pair {
        Pair { lambda: l.to_vec(), chi: c.to_vec() }
    }

    #[test]
    fn prime_powers() {
        assert_eq!(prime_power(9), Some((3, 2)));
        assert_eq!(prime_power(2), Some((2, 1)));
        assert_eq!(prime_power(6), None);
        assert_eq!(prime_power(1), None);
    }

    #[test]
    fn character_counts() {
        assert_eq!(enumerate_characters(&gl(2), 3, 1).unwrap().len(), 4);
        assert_eq!(enumerate_characters(&gl(1), 5, 1).unwrap().len(), 4);
        assert_eq!(enumerate_characters(&gl(3), 2, 1).unwrap(), vec![ResidueCharacter::trivial(3)]);
        assert_eq!(enumerate_characters(&gl(2), 3, 2), Err(HeckeError::UnsupportedDepth(2)));
        assert_eq!(enumerate_characters(&gl(2), 6, 1), Err(HeckeError::NotPrimePower(6)));
    }

    #[test]
    fn swap_action() {
        let a = PairAction::new(&gl(2), 5).unwrap();
        let s = (0..a.weyl.len()).find(|&w| w != a.weyl.identity()).unwrap();
        assert_eq!(a.act(s, &pair(&[1, 0], &[1, 3])), pair(&[0, 1], &[3, 1]));
        assert_eq!(a.act(a.weyl.identity(), &pair(&[1, 0], &[1, 3])), pair(&[1, 0], &[1, 3]));
    }

    #[test]
    fn action_law_on_small_data() {
        for name in ["gl3", "a2", "b2", "g2"] {
            let d = RootDatum::named(name).unwrap();
            let a = PairAction::new(&d, 5).unwrap();
            let p =
                Pair { lambda: (1..=d.rank as i64).collect(), chi: (0..d.rank as u64).map(|i| (i + 1) % 4).collect() };
            for w1 in 0..a.weyl.len() {
                for w2 in 0..a.weyl.len() {
                    assert_eq!(a.act(a.weyl.mul(w1, w2), &p), a.act(w1, &a.act(w2, &p)), "{name}");
                }
            }
        }
    }

    #[test]
    fn stabilizers() {
        let d = gl(2);
        assert_eq!(stabilizer_wchi(&d, 3, &ResidueCharacter::trivial(2)).unwrap().len(), 2);
        assert_eq!(stabilizer_wchi(&d, 5, &ResidueCharacter { exponents: vec![2, 2] }).unwrap().len(), 2);
        assert_eq!(stabilizer_wchi(&d, 5, &ResidueCharacter { exponents: vec![1, 2] }).unwrap().len(), 1);
    }

    #[test]
    fn orbit_examples() {
        let d = gl(2);
        let a = PairAction::new(&d, 3).unwrap();
        assert_eq!(a.orbit(&pair(&[0, 0], &[0, 0])).len(), 1);
        assert_eq!(a.orbit(&pair(&[1, 0], &[1, 0])).len(), 2);
        // 9 cocharacters: 3 fixed by the swap; 4 characters: 2 fixed.
        // Fixed pairs 3·2 = 6 of 36, so (36 + 6)/2 = 21 orbits.
        let t = truncate(&d, &a, 3, 1).unwrap();
        assert_eq!(t.orbits.len(), 21);
        assert_eq!(burnside_count(&a, &t.points), 21);
        assert_eq!(invariant_dimension(&d, 3, 1).unwrap(), 21);
        assert_eq!(invariant_dimension(&d, 2, 0).unwrap(), 1);
        assert_eq!(invariant_dimension(&RootDatum::named("a1").unwrap(), 2, 2).unwrap(), 3);
    }

    #[test]
    fn roc_sweeps() {
        let r = torus_center_report(&gl(2), 3, 2).unwrap();
        assert!(r.passes);
        assert_eq!(r.orbit_count, r.burnside_count);
        let r = torus_center_report(&gl(3), 2, 1).unwrap();
        assert!(r.passes && r.characters == 1);
        let r = torus_center_report(&gl(3), 3, 1).unwrap();
        assert!(r.passes);
        let a = PairAction::new(&gl(2), 3).unwrap();
        let bad = OrbitSum { orbit: vec![pair(&[1, 0], &[0, 0])] };
        assert!(matches!(roc_decomposition_check(&a, &bad), Err(HeckeError::NotAnOrbit(_))));
    }
}
