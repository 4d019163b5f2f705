//! Rational points of a split apartment, Moy–Prasad thresholds of root
//! subgroups, and the Levi-intersection comparison behind condition (1)
//! of the ♥ criterion.
//!
//! Points are stored as `x − x₀` relative to the special base point
//! `x₀ = 0`. For a split group every root has integral echelon set and
//! `e_a = 1`, so the depth-`r` piece of `U_a` at `x` is cut out by the
//! integer threshold `t_a(x, r) = ⌈r − a(x − x₀)⌉`.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::{BigRational, Rational64};
use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::{Serialize, Serializer};

use crate::error::{HeckeError, Result};
use crate::linalg::rank_over_field;
use crate::root_datum::{Coweight, RootDatum, WeylElement};

pub fn rational_to_string(r: &Rational64) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

pub fn parse_rational(s: &str) -> Result<Rational64> {
    Rational64::from_str(s.trim()).map_err(|_| HeckeError::Parse(format!("not an exact rational: `{s}`")))
}

/// A point `x − x₀` of the apartment with exact rational coordinates.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ApartmentPoint {
    pub offset: Vec<Rational64>,
}

impl Serialize for ApartmentPoint {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_seq(self.offset.iter().map(rational_to_string))
    }
}

impl fmt::Display for ApartmentPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.offset.iter().map(rational_to_string).collect();
        write!(f, "{}", parts.join(","))
    }
}

impl FromStr for ApartmentPoint {
    type Err = HeckeError;
    fn from_str(s: &str) -> Result<Self> {
        let offset = s.split(',').map(parse_rational).collect::<Result<Vec<_>>>()?;
        Ok(ApartmentPoint { offset })
    }
}

impl ApartmentPoint {
    pub fn origin(rank: usize) -> Self {
        ApartmentPoint { offset: vec![Rational64::zero(); rank] }
    }

    pub fn new(coords: &[(i64, i64)]) -> Self {
        ApartmentPoint { offset: coords.iter().map(|&(n, d)| Rational64::new(n, d)).collect() }
    }

    /// w · x for the linear Weyl action fixing x₀.
    pub fn act(&self, w: &WeylElement) -> ApartmentPoint {
        let offset = w.action.iter().map(|row| row.iter().zip(&self.offset).map(|(&m, c)| c * m).sum()).collect();
        ApartmentPoint { offset }
    }

    pub fn translate(&self, lambda: &Coweight) -> ApartmentPoint {
        ApartmentPoint {
            offset: self.offset.iter().zip(&lambda.0).map(|(c, &l)| c + Rational64::from_integer(l)).collect(),
        }
    }
}

/// a(x − x₀).
pub fn evaluate_root(datum: &RootDatum, a: usize, x: &ApartmentPoint) -> Rational64 {
    datum.roots[a].weight.iter().zip(&x.offset).map(|(&w, c)| c * w).sum()
}

/// Minimal integer k with a(x − x₀) + k ≥ r.
pub fn threshold(datum: &RootDatum, a: usize, x: &ApartmentPoint, r: Rational64) -> i64 {
    (r - evaluate_root(datum, a, x)).ceil().to_integer()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "SCREAMING_SNAKE_CASE")]
pub enum PointClass {
    Special,
    AlcoveInterior,
    Facet { dim: usize },
}

pub fn classify_point(datum: &RootDatum, x: &ApartmentPoint) -> PointClass {
    let integral: Vec<usize> = (0..datum.num_roots()).filter(|&a| evaluate_root(datum, a, x).is_integer()).collect();
    if integral.len() == datum.num_roots() {
        return PointClass::Special;
    }
    if integral.is_empty() {
        return PointClass::AlcoveInterior;
    }
    let rows: Vec<Vec<BigRational>> = integral
        .iter()
        .map(|&a| datum.roots[a].weight.iter().map(|&w| BigRational::from_integer(BigInt::from(w))).collect())
        .collect();
    PointClass::Facet { dim: datum.semisimple_rank() - rank_over_field(rows) }
}

/// Thresholds of all root subgroups at depth `r`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiltrationProfile {
    pub depth: Rational64,
    pub point: ApartmentPoint,
    /// Indexed like `RootDatum::roots`.
    pub thresholds: Vec<i64>,
}

pub fn filtration_profile(datum: &RootDatum, x: &ApartmentPoint, r: Rational64) -> FiltrationProfile {
    assert!(r > Rational64::zero(), "depth must be positive");
    let thresholds = (0..datum.num_roots()).map(|a| threshold(datum, a, x, r)).collect();
    FiltrationProfile { depth: r, point: x.clone(), thresholds }
}

impl FiltrationProfile {
    /// Off-diagonal bound matrix for GL_n: entry (i, j) is t_{e_i − e_j};
    /// the diagonal carries ⌈r⌉.
    pub fn gl_bounds(&self, datum: &RootDatum) -> Result<Vec<Vec<i64>>> {
        if !datum.is_gl() {
            return Err(HeckeError::NotGl(datum.name.clone()));
        }
        let n = datum.semisimple_rank() + 1;
        let diag = self.depth.ceil().to_integer();
        let mut m = vec![vec![diag; n]; n];
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    let mut w = vec![0; datum.rank];
                    w[i] = 1;
                    w[j] = -1;
                    m[i][j] = self.thresholds[datum.root_index_by_weight(&w).unwrap()];
                }
            }
        }
        Ok(m)
    }
}

/// Roots in the Q-span of θ (θ given as indices into the simple roots).
pub fn levi_roots(datum: &RootDatum, theta: &[usize]) -> Vec<usize> {
    (0..datum.num_roots())
        .filter(|&a| datum.roots[a].simple_coords.iter().enumerate().all(|(i, &c)| c == 0 || theta.contains(&i)))
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum HeartStatus {
    ProvenCondition1,
    Mismatch,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HeartWitness {
    pub theta: Vec<usize>,
    pub w2_word: Vec<usize>,
    /// The root a ∈ Φ_θ, as a character.
    pub root: Vec<i64>,
    pub t_at_x: i64,
    pub t_at_w2x: i64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HeartVerdict {
    pub status: HeartStatus,
    pub theta: Vec<usize>,
    pub witnesses: Vec<HeartWitness>,
}

/// Compares `G_{w₂·x, r} ∩ M_θ` with `G_{x, r} ∩ M_θ` root by root for the
/// minimal coset representative `w₂` of every `w ∈ W₀`.
///
/// A mismatch is not a proof that ♥ fails; see [`escalate_mismatch`].
pub fn heart_condition1_check(
    datum: &RootDatum,
    weyl: &[WeylElement],
    x: &ApartmentPoint,
    r: Rational64,
    theta: &[usize],
) -> HeartVerdict {
    let levi = levi_roots(datum, theta);
    let at_x = filtration_profile(datum, x, r);
    let mut reps: BTreeSet<Vec<Vec<i64>>> = BTreeSet::new();
    let mut witnesses = Vec::new();
    for w in weyl {
        let (_, w2) = datum.coset_decompose(w, theta);
        if !reps.insert(w2.action.clone()) {
            continue;
        }
        let moved = filtration_profile(datum, &x.act(&w2), r);
        for &a in &levi {
            if at_x.thresholds[a] != moved.thresholds[a] {
                witnesses.push(HeartWitness {
                    theta: theta.to_vec(),
                    w2_word: w2.word.clone(),
                    root: datum.roots[a].weight.clone(),
                    t_at_x: at_x.thresholds[a],
                    t_at_w2x: moved.thresholds[a],
                });
            }
        }
    }
    let status = if witnesses.is_empty() { HeartStatus::ProvenCondition1 } else { HeartStatus::Mismatch };
    HeartVerdict { status, theta: theta.to_vec(), witnesses }
}

/// The inequality `0 ≤ (w₂⁻¹a − a)(x − x₀) < e_a` with `e_a = 1`.
pub fn key_inequality_holds(datum: &RootDatum, x: &ApartmentPoint, w2: &WeylElement, a: usize) -> bool {
    let w2_inv = datum.inverse(w2);
    let moved = datum.act_on_root(&w2_inv, a);
    let delta = evaluate_root(datum, moved, x) - evaluate_root(datum, a, x);
    delta >= Rational64::zero() && delta < Rational64::one()
}

pub fn all_subsets(n: usize) -> Vec<Vec<usize>> {
    (0..1u32 << n).map(|mask| (0..n).filter(|&i| mask >> i & 1 == 1).collect()).collect()
}

#[derive(Clone, Debug, Serialize)]
pub struct PointReport {
    pub point: ApartmentPoint,
    pub class: PointClass,
    pub verdicts: Vec<HeartVerdict>,
}

impl PointReport {
    pub fn all_proven(&self) -> bool {
        self.verdicts.iter().all(|v| v.status == HeartStatus::ProvenCondition1)
    }
}

/// Runs the condition-(1) check for every θ ⊆ Δ at each grid point.
/// Grid points are evaluated in parallel; output order follows the grid.
pub fn heart_scan(datum: &RootDatum, weyl: &[WeylElement], r: Rational64, grid: &[ApartmentPoint]) -> Vec<PointReport> {
    let thetas = all_subsets(datum.semisimple_rank());
    grid.par_iter()
        .map(|x| PointReport {
            point: x.clone(),
            class: classify_point(datum, x),
            verdicts: thetas.iter().map(|t| heart_condition1_check(datum, weyl, x, r, t)).collect(),
        })
        .collect()
}

/// Rationals in [lo, hi] with denominator at most `max_den`, sorted.
pub fn farey_values(lo: i64, hi: i64, max_den: i64) -> Vec<Rational64> {
    let mut set = BTreeSet::new();
    for d in 1..=max_den {
        for n in lo * d..=hi * d {
            set.insert(Rational64::new(n, d));
        }
    }
    set.into_iter().collect()
}

/// Points of the closed base alcove `{0 ≤ a(x − x₀) ≤ 1, a > 0}` whose
/// coordinates have denominators at most `max_den`; central coordinates
/// are held at zero. With `interior_only` the inequalities are strict.
pub fn base_alcove_grid(datum: &RootDatum, max_den: i64, interior_only: bool) -> Vec<ApartmentPoint> {
    let values = farey_values(0, 2, max_den);
    let free: Vec<usize> = (0..datum.rank).filter(|i| !datum.central_coords.contains(i)).collect();
    let positive: Vec<usize> = datum.positive_roots().collect();
    let mut out = Vec::new();
    let mut idx = vec![0usize; free.len()];
    loop {
        let mut x = ApartmentPoint::origin(datum.rank);
        for (k, &c) in free.iter().enumerate() {
            x.offset[c] = values[idx[k]];
        }
        let inside = positive.iter().all(|&a| {
            let v = evaluate_root(datum, a, &x);
            if interior_only {
                v > Rational64::zero() && v < Rational64::one()
            } else {
                v >= Rational64::zero() && v <= Rational64::one()
            }
        });
        if inside {
            out.push(x);
        }
        let mut k = 0;
        loop {
            if k == idx.len() {
                return out;
            }
            idx[k] += 1;
            if idx[k] < values.len() {
                break;
            }
            idx[k] = 0;
            k += 1;
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum LeviComparison {
    /// Equal after conjugating by `u ∈ W_θ` and translating by `λ`.
    ConjugateCertified {
        u_word: Vec<usize>,
        translation: Coweight,
    },
    /// Σ_{a∈Φ_θ} t_a differs, so the volumes differ.
    DistinctVolume {
        sum_at_x: i64,
        sum_at_w2x: i64,
    },
    Inconclusive,
}

/// Decides what a condition-(1) mismatch for `(θ, w₂)` means for the pair
/// `G_{x,r} ∩ M_θ`, `G_{w₂x,r} ∩ M_θ`.
///
/// A certificate `(u, λ)` with `t_a(w₂x) = t_a(u·x + λ)` for all `a ∈ Φ_θ`
/// exhibits an element of `N_M(T)` conjugating one group onto the other.
/// Distinct threshold sums mean distinct Haar volumes, which rules out
/// conjugacy in `M`.
pub fn escalate_mismatch(
    datum: &RootDatum,
    x: &ApartmentPoint,
    r: Rational64,
    theta: &[usize],
    w2: &WeylElement,
) -> LeviComparison {
    let levi = levi_roots(datum, theta);
    let target = filtration_profile(datum, &x.act(w2), r);
    if levi.iter().all(|&a| filtration_profile(datum, x, r).thresholds[a] == target.thresholds[a]) {
        return LeviComparison::ConjugateCertified { u_word: vec![], translation: Coweight::zero(datum.rank) };
    }
    let free: Vec<usize> = (0..datum.rank).filter(|i| !datum.central_coords.contains(i)).collect();
    for u in datum.parabolic_subgroup(theta) {
        let base = filtration_profile(datum, &x.act(&u), r);
        let need: Vec<i64> = levi.iter().map(|&a| base.thresholds[a] - target.thresholds[a]).collect();
        let bound = need.iter().map(|d| d.abs()).max().unwrap_or(0) + 1;
        let mut lambda = Coweight::zero(datum.rank);
        let mut idx = vec![-bound; free.len()];
        'search: loop {
            for (k, &c) in free.iter().enumerate() {
                lambda.0[c] = idx[k];
            }
            if levi.iter().zip(&need).all(|(&a, &d)| datum.pair(a, &lambda) == d) {
                return LeviComparison::ConjugateCertified { u_word: u.word.clone(), translation: lambda };
            }
            let mut k = 0;
            loop {
                if k == idx.len() {
                    break 'search;
                }
                idx[k] += 1;
                if idx[k] <= bound {
                    break;
                }
                idx[k] = -bound;
                k += 1;
            }
        }
    }
    let at_x = filtration_profile(datum, x, r);
    let sum_at_x: i64 = levi.iter().map(|&a| at_x.thresholds[a]).sum();
    let sum_at_w2x: i64 = levi.iter().map(|&a| target.thresholds[a]).sum();
    if sum_at_x != sum_at_w2x {
        LeviComparison::DistinctVolume { sum_at_x, sum_at_w2x }
    } else {
        LeviComparison::Inconclusive
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::root_datum::enumerate_weyl;

    fn r(n: i64, d: i64) -> Rational64 {
        Rational64::new(n, d)
    }

    #[test]
    fn threshold_examples() {
        let gl3 = RootDatum::named("gl3").unwrap();
        let x = ApartmentPoint::new(&[(1, 2), (0, 1), (0, 1)]);
        let e21 = gl3.root_index_by_weight(&[-1, 1, 0]).unwrap();
        let e12 = gl3.root_index_by_weight(&[1, -1, 0]).unwrap();
        assert_eq!(threshold(&gl3, e21, &x, r(1, 1)), 2);
        assert_eq!(threshold(&gl3, e12, &x, r(1, 1)), 1);
        assert_eq!(threshold(&gl3, e12, &ApartmentPoint::origin(3), r(1, 1)), 1);
    }

    #[test]
    fn classification() {
        let a2 = RootDatum::named("a2").unwrap();
        assert_eq!(classify_point(&a2, &ApartmentPoint::origin(2)), PointClass::Special);
        let bary = ApartmentPoint::new(&[(1, 3), (1, 3)]);
        assert_eq!(classify_point(&a2, &bary), PointClass::AlcoveInterior);
        let gl3 = RootDatum::named("gl3").unwrap();
        let x = ApartmentPoint::new(&[(1, 2), (0, 1), (0, 1)]);
        assert_eq!(classify_point(&gl3, &x), PointClass::Facet { dim: 1 });
    }

    #[test]
    fn gl3_profiles_match_displayed_matrices() {
        let gl3 = RootDatum::named("gl3").unwrap();
        let x = ApartmentPoint::new(&[(1, 2), (0, 1), (0, 1)]);
        let p = filtration_profile(&gl3, &x, r(1, 1));
        assert_eq!(p.gl_bounds(&gl3).unwrap(), vec![vec![1, 1, 1], vec![2, 1, 1], vec![2, 1, 1]]);
        let w = enumerate_weyl(&gl3).unwrap();
        let s1 = w.iter().find(|e| e.word == vec![0]).unwrap();
        let moved = filtration_profile(&gl3, &x.act(s1), r(1, 1));
        assert_eq!(moved.gl_bounds(&gl3).unwrap(), vec![vec![1, 2, 1], vec![1, 1, 1], vec![1, 2, 1]]);
        let origin = filtration_profile(&gl3, &ApartmentPoint::origin(3), r(1, 1));
        assert!(origin.thresholds.iter().all(|&t| t == 1));
    }

    #[test]
    fn heart_examples() {
        let gl3 = RootDatum::named("gl3").unwrap();
        let w = enumerate_weyl(&gl3).unwrap();
        let x = ApartmentPoint::new(&[(1, 2), (0, 1), (0, 1)]);
        let v = heart_condition1_check(&gl3, &w, &x, r(1, 1), &[1]);
        assert_eq!(v.status, HeartStatus::Mismatch);
        assert!(v.witnesses.contains(&HeartWitness {
            theta: vec![1],
            w2_word: vec![0],
            root: vec![0, -1, 1],
            t_at_x: 1,
            t_at_w2x: 2,
        }));
        let a2 = RootDatum::named("a2").unwrap();
        let wa = enumerate_weyl(&a2).unwrap();
        let bary = ApartmentPoint::new(&[(1, 3), (1, 3)]);
        for theta in all_subsets(2) {
            assert_eq!(heart_condition1_check(&a2, &wa, &bary, r(1, 1), &theta).status, HeartStatus::ProvenCondition1);
            let o = ApartmentPoint::origin(2);
            assert_eq!(heart_condition1_check(&a2, &wa, &o, r(1, 1), &theta).status, HeartStatus::ProvenCondition1);
        }
    }

    #[test]
    fn counterexample_mismatch_escalates_to_distinct_volume() {
        let gl3 = RootDatum::named("gl3").unwrap();
        let w = enumerate_weyl(&gl3).unwrap();
        let s1 = w.iter().find(|e| e.word == vec![0]).unwrap();
        let x = ApartmentPoint::new(&[(1, 2), (0, 1), (0, 1)]);
        assert_eq!(
            escalate_mismatch(&gl3, &x, r(1, 1), &[1], s1),
            LeviComparison::DistinctVolume { sum_at_x: 2, sum_at_w2x: 3 }
        );
    }

    #[test]
    fn translation_certificate_found_for_shifted_levi() {
        // an interior point where the half-integral depth breaks literal
        // equality but a torus translation in M repairs it
        let a2 = RootDatum::named("a2").unwrap();
        let w = enumerate_weyl(&a2).unwrap();
        let s1 = w.iter().find(|e| e.word == vec![0]).unwrap();
        // a_1(x) = 1/2, a_2(x) = 1/5
        let x = ApartmentPoint::new(&[(2, 5), (3, 10)]);
        assert_eq!(classify_point(&a2, &x), PointClass::AlcoveInterior);
        let v = heart_condition1_check(&a2, &w, &x, r(1, 2), &[1]);
        assert_eq!(v.status, HeartStatus::Mismatch);
        assert!(matches!(escalate_mismatch(&a2, &x, r(1, 2), &[1], s1), LeviComparison::ConjugateCertified { .. }));
    }

    #[test]
    fn empty_scan() {
        let gl3 = RootDatum::named("gl3").unwrap();
        let w = enumerate_weyl(&gl3).unwrap();
        assert!(heart_scan(&gl3, &w, r(1, 1), &[]).is_empty());
    }

    #[test]
    fn base_alcove_grids() {
        let gl3 = RootDatum::named("gl3").unwrap();
        let closed = base_alcove_grid(&gl3, 2, false);
        assert_eq!(closed.len(), 6);
        assert!(base_alcove_grid(&gl3, 2, true).is_empty());
        let a2 = RootDatum::named("a2").unwrap();
        assert!(base_alcove_grid(&a2, 3, true).contains(&ApartmentPoint::new(&[(1, 3), (1, 3)])));
    }
}
