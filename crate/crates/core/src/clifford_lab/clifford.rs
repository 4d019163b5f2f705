//! Restriction of an irreducible character to a normal subgroup with abelian
//! quotient: multiplicity, inertia group, twist group, †H and a maximal
//! stabilizer ˢH, each computed independently so the structural identities
//! relating them can be checked rather than assumed.

use std::collections::HashSet;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use serde::Serialize;

use super::character::{constituent_orbits, inner_int, quotient_characters, restrict, trace_form, ClassFunction};
use super::group::{FiniteGroup, Subgroup};
use crate::cyclotomic::Cyclotomic;
use crate::{HeckeError, Result};

/// Res_H σ̃ ≅ m·(σ_1 ⊕ … ⊕ σ_e) with the σ_i pairwise non-isomorphic.
#[derive(Clone, Debug)]
pub struct Decomposition {
    pub m: u64,
    /// Number of distinct constituents, read off the trace form.
    pub constituents: usize,
    pub dim_sigma: u64,
    /// Stabilizer of the isomorphism class of the constituents.
    pub inertia: Subgroup,
    /// Coset representatives of H̃/Int, indexing the conjugates σ^g.
    pub orbit: Vec<usize>,
    /// H̃ permutes the constituents transitively.
    pub transitive: bool,
}

fn exact_sqrt(n: u64) -> Option<u64> {
    let r = (n as f64).sqrt().round() as u64;
    (r.saturating_sub(1)..=r + 1).find(|&s| s * s == n)
}

fn as_u64(r: &BigRational, what: &str) -> Result<u64> {
    if !r.is_integer() {
        return Err(HeckeError::InvalidModel(format!("{what} = {r} is not an integer")));
    }
    r.to_integer().to_u64().ok_or_else(|| HeckeError::InvalidModel(format!("{what} = {r} out of range")))
}

/// Decomposes Res_H χ for an irreducible character χ of H̃.
pub fn restrict_decompose(
    group: &FiniteGroup,
    tilde: &Subgroup,
    h: &Subgroup,
    chi: &[Cyclotomic],
    conductor: usize,
) -> Result<Decomposition> {
    if !group.is_normal_in(h, tilde) {
        return Err(HeckeError::InvalidModel("H is not normal in H̃".into()));
    }
    let norm = inner_int(tilde, chi, chi, conductor)?;
    if norm != 1 {
        let distinct = trace_form(group, tilde, chi, conductor)?.rank;
        return Err(HeckeError::Reducible(format!("{norm}, with {distinct} distinct constituents")));
    }
    let psi = restrict(h, chi, conductor);
    let form = trace_form(group, h, &psi, conductor)?;
    let e = form.rank as u64;
    let res_norm = inner_int(h, &psi, &psi, conductor)?;
    let m = (res_norm % e == 0)
        .then(|| exact_sqrt(res_norm / e))
        .flatten()
        .ok_or_else(|| HeckeError::InvalidModel(format!("<Res, Res> = {res_norm} is not m^2 times {e}")))?;
    // weighted trace = m·e·|H| / dim σ.
    let dim_sigma =
        as_u64(&(BigRational::from_integer(BigInt::from(m * e * h.order() as u64)) / &form.weighted_trace), "dim σ")?;
    // g ∈ Int iff ⟨H, g⟩ fixes every constituent, i.e. still has e orbits on them.
    let mut mask = vec![false; group.order()];
    for g in group.coset_reps(tilde, h) {
        let l = group.join(h, &group.generated(&[g]));
        if constituent_orbits(group, h, &l, &psi, conductor) == form.rank {
            for &x in &h.elements {
                mask[group.mul(g, x)] = true;
            }
        }
    }
    let inertia = Subgroup::from_mask(mask);
    let orbit = group.coset_reps(tilde, &inertia);
    let transitive = constituent_orbits(group, h, tilde, &psi, conductor) == 1;
    Ok(Decomposition { m, constituents: form.rank, dim_sigma, inertia, orbit, transitive })
}

/// X_{H̃}(χ): characters ν of H̃/H with χ⊗ν = χ, and †H = ∩ ker ν.
pub struct TwistGroup {
    pub characters: Vec<Vec<usize>>,
    pub dagger: Subgroup,
}

pub fn twist_group(
    group: &FiniteGroup,
    tilde: &Subgroup,
    h: &Subgroup,
    chi: &[Cyclotomic],
    conductor: usize,
) -> Result<TwistGroup> {
    let all = quotient_characters(group, tilde, h, conductor)?;
    // χ·ν = χ exactly when ν is 1 wherever χ is nonzero.
    let characters: Vec<Vec<usize>> =
        all.into_iter().filter(|a| tilde.elements.iter().all(|&x| chi[x].is_zero() || a[x] == 0)).collect();
    let mask = (0..group.order()).map(|x| tilde.contains(x) && characters.iter().all(|a| a[x] == 0)).collect();
    Ok(TwistGroup { characters, dagger: Subgroup::from_mask(mask) })
}

/// Subgroups L with H ≤ L ≤ `top`, for `top/H` abelian.
fn intermediate_subgroups(group: &FiniteGroup, h: &Subgroup, top: &Subgroup) -> Vec<Subgroup> {
    let reps = group.coset_reps(top, h);
    let mut seen: HashSet<Vec<usize>> = HashSet::from([h.elements.clone()]);
    let mut out = vec![h.clone()];
    let mut i = 0;
    while i < out.len() {
        let l = out[i].clone();
        for &x in &reps {
            if !l.contains(x) {
                let bigger = group.join(&l, &group.generated(&[x]));
                if seen.insert(bigger.elements.clone()) {
                    out.push(bigger);
                }
            }
        }
        i += 1;
    }
    out
}

/// σ extends to L (H ≤ L ≤ Int) iff the L-constituents over σ have degree
/// dim σ, iff Ind_H^L Res_H χ has e·[L:H] distinct constituents.
fn sigma_extends(
    group: &FiniteGroup,
    h: &Subgroup,
    l: &Subgroup,
    psi_h: &ClassFunction,
    e: usize,
    conductor: usize,
) -> Result<bool> {
    Ok(trace_form(group, l, psi_h, conductor)?.rank == e * l.index_of(h))
}

/// Largest stabilizer of an irreducible H-subspace of χ: the largest L with
/// H ≤ L ≤ Int to which σ extends inside χ. Ties go to the lexicographically
/// smallest element list.
pub fn maximal_stabilizer(
    group: &FiniteGroup,
    h: &Subgroup,
    inertia: &Subgroup,
    chi: &[Cyclotomic],
    constituents: usize,
    conductor: usize,
) -> Result<Subgroup> {
    let psi_h = restrict(h, chi, conductor);
    let mut best: Option<Subgroup> = None;
    for l in intermediate_subgroups(group, h, inertia) {
        if !sigma_extends(group, h, &l, &psi_h, constituents, conductor)? {
            continue;
        }
        let better = match &best {
            None => true,
            Some(b) => l.order() > b.order() || (l.order() == b.order() && l.elements < b.elements),
        };
        if better {
            best = Some(l);
        }
    }
    Ok(best.expect("σ always extends to H itself"))
}

#[derive(Clone, Debug, Serialize)]
pub struct CliffordReport {
    pub tilde_order: usize,
    pub h_order: usize,
    pub m: u64,
    pub orbit_size: usize,
    pub dim_tilde: u64,
    pub dim_sigma: u64,
    pub inertia: Vec<usize>,
    #[serde(rename = "sH")]
    pub s_h: Vec<usize>,
    #[serde(rename = "daggerH")]
    pub dagger_h: Vec<usize>,
    pub twist_group_order: usize,
    /// H̃ is transitive on the constituents of Res_H χ and their number is [H̃ : Int].
    pub orbit_is_quotient: bool,
    /// dim σ̃ = orbit_size·m·dim σ.
    pub dimension_identity: bool,
    /// †H ≤ ˢH ≤ Int and [Int : ˢH] = [ˢH : †H] = m.
    pub index_chain: bool,
    /// dim σ̃ = [H̃ : ˢH]·dim σ, the degree of ind ˢσ.
    pub induced_from_sh: bool,
    /// |X_{H̃}(σ̃)| = [H̃ : †H].
    pub twist_index: bool,
}

impl CliffordReport {
    pub fn passes(&self) -> bool {
        self.orbit_is_quotient
            && self.dimension_identity
            && self.index_chain
            && self.induced_from_sh
            && self.twist_index
    }
}

pub fn clifford_report(
    group: &FiniteGroup,
    tilde: &Subgroup,
    h: &Subgroup,
    chi: &[Cyclotomic],
    conductor: usize,
) -> Result<CliffordReport> {
    let dec = restrict_decompose(group, tilde, h, chi, conductor)?;
    let twists = twist_group(group, tilde, h, chi, conductor)?;
    let s_h = maximal_stabilizer(group, h, &dec.inertia, chi, dec.constituents, conductor)?;
    let dim_tilde = as_u64(&chi[0].as_rational().unwrap_or_else(BigRational::zero), "dim σ̃")?;
    let int = &dec.inertia;
    let dagger = &twists.dagger;
    let m = dec.m as usize;
    Ok(CliffordReport {
        tilde_order: tilde.order(),
        h_order: h.order(),
        m: dec.m,
        orbit_size: dec.orbit.len(),
        dim_tilde,
        dim_sigma: dec.dim_sigma,
        orbit_is_quotient: dec.transitive && dec.constituents == dec.orbit.len(),
        dimension_identity: dim_tilde == dec.orbit.len() as u64 * dec.m * dec.dim_sigma,
        index_chain: dagger.is_subgroup_of(&s_h)
            && s_h.is_subgroup_of(int)
            && int.index_of(&s_h) == m
            && s_h.index_of(dagger) == m,
        induced_from_sh: dim_tilde == tilde.index_of(&s_h) as u64 * dec.dim_sigma,
        twist_index: twists.characters.len() == tilde.index_of(dagger),
        twist_group_order: twists.characters.len(),
        inertia: int.elements.clone(),
        s_h: s_h.elements,
        dagger_h: dagger.elements.clone(),
    })
}
