//! A finite model (G, N, J̃, ρ̃) and the finite analogues of the
//! multiplicity-transfer, center and commutativity statements for the
//! representation Ind_J^G ρ with J = J̃ ∩ N.
//!
//! The constituents ρ of Res_J ρ̃ are J̃-conjugate, so everything asked
//! about a single ρ is read off ψ = Res_J ρ̃ = m·(ρ_1 ⊕ … ⊕ ρ_e):
//! Ind_J^G ψ = m·e·Ind_J^G ρ, and I_G(ψ) ⊆ J̃ iff I_G(ρ) ⊆ J̃.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive};
use serde::Serialize;

use super::catalog::{parse_matrix, ElementRef, EntrySpec, GroupSpec};
use super::character::{induce, inner, inner_int, restrict, trace_form, ClassFunction, Representation};
use super::clifford::{clifford_report, restrict_decompose, twist_group, CliffordReport};
use super::group::{FiniteGroup, Subgroup};
use crate::cyclotomic::Cyclotomic;
use crate::report::Verdict;
use crate::{HeckeError, Result};

pub struct FiniteGroupModel {
    pub name: String,
    pub group: FiniteGroup,
    pub conductor: usize,
    pub n: Subgroup,
    pub jtilde: Subgroup,
    pub j: Subgroup,
    pub rho_tilde: Representation,
}

impl FiniteGroupModel {
    pub fn from_spec(spec: &EntrySpec) -> Result<Self> {
        let group = match &spec.group {
            GroupSpec::Permutations { degree, generators } => FiniteGroup::from_permutations(*degree, generators)?,
            GroupSpec::Table { table } => FiniteGroup::from_table(table)?,
        };
        let resolve = |r: &ElementRef| -> Result<usize> {
            match r {
                ElementRef::Index(i) if *i < group.order() => Ok(*i),
                ElementRef::Index(i) => Err(HeckeError::InvalidModel(format!("element index {i} out of range"))),
                ElementRef::Permutation(p) => group
                    .find_permutation(p)
                    .ok_or_else(|| HeckeError::InvalidModel(format!("{p:?} is not an element of the group"))),
            }
        };
        let normal_gens = spec.normal.iter().map(resolve).collect::<Result<Vec<_>>>()?;
        let jt_gens = spec.jtilde.iter().map(resolve).collect::<Result<Vec<_>>>()?;
        let n = group.generated(&normal_gens);
        let whole = group.whole();
        if !group.is_normal_in(&n, &whole) {
            return Err(HeckeError::InvalidModel(format!("{}: N is not normal in G", spec.name)));
        }
        if !group.quotient_is_abelian(&whole, &n) {
            return Err(HeckeError::NonAbelianQuotient(format!("G/N in {}", spec.name)));
        }
        if spec.conductor == 0 {
            return Err(HeckeError::InvalidModel("conductor must be positive".into()));
        }
        let conductor = group.exponent().lcm(&spec.conductor);
        let matrices = spec
            .rep
            .iter()
            .map(|m| parse_matrix(m, spec.conductor).map(|m| lift(&m, conductor)))
            .collect::<Result<Vec<_>>>()?;
        let rho_tilde = Representation::from_generators(&group, &jt_gens, &matrices, conductor)?;
        let jtilde = rho_tilde.support.clone();
        let norm = inner_int(&jtilde, &rho_tilde.character, &rho_tilde.character, conductor)?;
        if norm != 1 {
            return Err(HeckeError::Reducible(format!("{norm} for rho~ in {}", spec.name)));
        }
        let j = jtilde.intersect(&n);
        Ok(FiniteGroupModel { name: spec.name.clone(), group, conductor, n, jtilde, j, rho_tilde })
    }

    /// π = Ind_{J̃}^G ρ̃.
    pub fn pi(&self) -> ClassFunction {
        induce(&self.group, &self.jtilde, &self.rho_tilde.character, self.conductor)
    }

    /// ψ = Res_J ρ̃.
    pub fn psi(&self) -> ClassFunction {
        restrict(&self.j, &self.rho_tilde.character, self.conductor)
    }
}

fn lift(m: &[Vec<Cyclotomic>], conductor: usize) -> Vec<Vec<Cyclotomic>> {
    m.iter().map(|r| r.iter().map(|c| c.lift(conductor)).collect()).collect()
}

#[derive(Clone, Debug, Serialize)]
pub struct IntertwiningCoset {
    pub representative: usize,
    pub size: usize,
    /// ⟨Res_{J∩J^g} f, f^g⟩ as an exact number.
    pub pairing: String,
    pub intertwines: bool,
}

/// Double cosets J g J on which `f` and its conjugate f^g(x) = f(g x g⁻¹)
/// have a nonzero pairing over J ∩ g⁻¹Jg.
pub fn intertwining_set(
    group: &FiniteGroup,
    j: &Subgroup,
    f: &[Cyclotomic],
    conductor: usize,
) -> Vec<IntertwiningCoset> {
    group
        .double_coset_reps(j, j)
        .into_iter()
        .map(|(g, size)| {
            let p = double_coset_pairing(group, j, f, g, conductor);
            IntertwiningCoset { representative: g, size, pairing: p.to_string(), intertwines: !p.is_zero() }
        })
        .collect()
}

fn double_coset_pairing(group: &FiniteGroup, j: &Subgroup, f: &[Cyclotomic], g: usize, conductor: usize) -> Cyclotomic {
    let meet = j.intersect(&group.conjugate_subgroup(j, g));
    let conj: ClassFunction = (0..group.order())
        .map(|x| if meet.contains(x) { f[group.conj(g, x)].clone() } else { Cyclotomic::zero(conductor) })
        .collect();
    inner(&meet, f, &conj, conductor)
}

#[derive(Clone, Debug, Serialize)]
pub struct Hypotheses {
    /// ⟨π, π⟩_G.
    pub pi_norm: u64,
    pub pi_irreducible: bool,
    /// |I_G(ρ)|, the union of the intertwining double cosets.
    pub intertwining_order: usize,
    pub intertwining_in_jtilde: bool,
}

impl Hypotheses {
    pub fn hold(&self) -> bool {
        self.pi_irreducible && self.intertwining_in_jtilde
    }

    fn failure(&self) -> String {
        let mut why = Vec::new();
        if !self.pi_irreducible {
            why.push(format!("Ind of rho~ is reducible (<pi, pi> = {})", self.pi_norm));
        }
        if !self.intertwining_in_jtilde {
            why.push(format!("I_G(rho) has {} elements and is not inside J~", self.intertwining_order));
        }
        why.join("; ")
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct MultiplicityTransfer {
    pub verdict: Verdict,
    pub m_n_pi: Option<u64>,
    pub m_j_rho_tilde: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reason: Option<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct CenterDimension {
    pub verdict: Verdict,
    /// Distinct constituents of Ind_J^G ρ.
    pub center_dimension: usize,
    /// [†J : J].
    pub dagger_index: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reason: Option<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct Commutativity {
    pub verdict: Verdict,
    pub res_n_pi_multiplicity_free: Option<bool>,
    pub res_j_rho_tilde_multiplicity_free: bool,
    pub endomorphisms_commutative: bool,
    /// dim End_G(Ind_J^G ρ) from the double-coset sum.
    pub end_dimension: u64,
    /// The double-coset sum agrees with ⟨Ind ψ, Ind ψ⟩ computed directly.
    pub mackey_consistent: bool,
    pub coincide: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reason: Option<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct EntryReport {
    pub name: String,
    pub group_order: usize,
    pub n_order: usize,
    pub jtilde_order: usize,
    pub j_order: usize,
    pub hypotheses: Hypotheses,
    /// Clifford data of ρ̃ relative to J.
    pub clifford_jtilde: CliffordReport,
    /// Clifford data of π relative to N, when π is irreducible.
    pub clifford_g: Option<CliffordReport>,
    pub intertwining: Vec<IntertwiningCoset>,
    pub multiplicity_transfer: MultiplicityTransfer,
    pub center_dimension: CenterDimension,
    pub commutativity: Commutativity,
    /// ⟨Ind_J^G ψ, π⟩_G = ⟨ψ, Res_J π⟩_J.
    pub frobenius_reciprocity: bool,
    pub verdict: Verdict,
}

pub fn evaluate(model: &FiniteGroupModel) -> Result<EntryReport> {
    let (g, c) = (&model.group, model.conductor);
    let whole = g.whole();
    let pi = model.pi();
    let psi = model.psi();
    let pi_norm = inner_int(&whole, &pi, &pi, c)?;
    let intertwining = intertwining_set(g, &model.j, &psi, c);
    let intertwining_order: usize = intertwining.iter().filter(|d| d.intertwines).map(|d| d.size).sum();
    let in_jtilde = intertwining.iter().filter(|d| d.intertwines).all(|d| model.jtilde.contains(d.representative));
    let hypotheses =
        Hypotheses { pi_norm, pi_irreducible: pi_norm == 1, intertwining_order, intertwining_in_jtilde: in_jtilde };
    let skip_reason = (!hypotheses.hold()).then(|| hypotheses.failure());

    let clifford_jtilde = clifford_report(g, &model.jtilde, &model.j, &model.rho_tilde.character, c)?;
    let clifford_g = if hypotheses.pi_irreducible { Some(clifford_report(g, &whole, &model.n, &pi, c)?) } else { None };

    let dec_j = restrict_decompose(g, &model.jtilde, &model.j, &model.rho_tilde.character, c)?;
    let m_n = if hypotheses.pi_irreducible { Some(restrict_decompose(g, &whole, &model.n, &pi, c)?.m) } else { None };
    let multiplicity_transfer = MultiplicityTransfer {
        verdict: if skip_reason.is_some() { Verdict::Skipped } else { Verdict::of(m_n == Some(dec_j.m)) },
        m_n_pi: m_n,
        m_j_rho_tilde: dec_j.m,
        reason: skip_reason.clone(),
    };

    let ind_psi = induce(g, &model.j, &psi, c);
    let center_dim = trace_form(g, &whole, &ind_psi, c)?.rank;
    let dagger = twist_group(g, &model.jtilde, &model.j, &model.rho_tilde.character, c)?.dagger;
    let dagger_index = dagger.index_of(&model.j);
    let center_dimension = CenterDimension {
        verdict: if skip_reason.is_some() { Verdict::Skipped } else { Verdict::of(center_dim == dagger_index) },
        center_dimension: center_dim,
        dagger_index,
        reason: skip_reason.clone(),
    };

    // ⟨Ind ψ, Ind ψ⟩ = Σ over J\G/J of the double-coset pairings = (m·e)²·dim End(Ind ρ).
    let mackey = intertwining_pairing_sum(g, &model.j, &psi, c)?;
    let direct = inner_int(&whole, &ind_psi, &ind_psi, c)?;
    let me = dec_j.m * dec_j.constituents as u64;
    let end_dimension = mackey / (me * me);
    let commutative = mackey % (me * me) == 0 && end_dimension == center_dim as u64;
    let res_n_free = if hypotheses.pi_irreducible {
        let res = restrict(&model.n, &pi, c);
        Some(inner_int(&model.n, &res, &res, c)? == trace_form(g, &model.n, &res, c)?.rank as u64)
    } else {
        None
    };
    let res_j_free = dec_j.m == 1;
    let coincide = res_n_free.map(|a| a == res_j_free && res_j_free == commutative);
    let commutativity = Commutativity {
        verdict: if skip_reason.is_some() { Verdict::Skipped } else { Verdict::of(coincide == Some(true)) },
        res_n_pi_multiplicity_free: res_n_free,
        res_j_rho_tilde_multiplicity_free: res_j_free,
        endomorphisms_commutative: commutative,
        end_dimension,
        mackey_consistent: mackey == direct,
        coincide,
        reason: skip_reason,
    };

    let lhs = inner(&whole, &ind_psi, &pi, c);
    let rhs = inner(&model.j, &psi, &restrict(&model.j, &pi, c), c);
    let frobenius_reciprocity = lhs == rhs;

    let structural = clifford_jtilde.passes()
        && clifford_g.as_ref().is_none_or(CliffordReport::passes)
        && frobenius_reciprocity
        && commutativity.mackey_consistent;
    let checks = [multiplicity_transfer.verdict, center_dimension.verdict, commutativity.verdict];
    let verdict = Verdict::of(structural && !checks.contains(&Verdict::Fail));
    Ok(EntryReport {
        name: model.name.clone(),
        group_order: g.order(),
        n_order: model.n.order(),
        jtilde_order: model.jtilde.order(),
        j_order: model.j.order(),
        hypotheses,
        clifford_jtilde,
        clifford_g,
        intertwining,
        multiplicity_transfer,
        center_dimension,
        commutativity,
        frobenius_reciprocity,
        verdict,
    })
}

fn intertwining_pairing_sum(group: &FiniteGroup, j: &Subgroup, f: &[Cyclotomic], conductor: usize) -> Result<u64> {
    let mut total = BigRational::from_integer(BigInt::from(0));
    for (g, _) in group.double_coset_reps(j, j) {
        let p = double_coset_pairing(group, j, f, g, conductor);
        total += p
            .as_rational()
            .ok_or_else(|| HeckeError::InvalidModel(format!("double-coset pairing {p} is not rational")))?;
    }
    if !total.denom().is_one() {
        return Err(HeckeError::InvalidModel(format!("double-coset sum {total} is not an integer")));
    }
    total.to_integer().to_u64().ok_or_else(|| HeckeError::InvalidModel("negative double-coset sum".into()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::clifford_lab::builtin_catalog;
    use crate::clifford_lab::character::quotient_characters;

    fn model(name: &str) -> FiniteGroupModel {
        let cat = builtin_catalog();
        FiniteGroupModel::from_spec(cat.entries.iter().find(|e| e.name == name).unwrap()).unwrap()
    }

    #[test]
    fn restriction_examples() {
        let d8 = model("d8-c4-full");
        let dec = restrict_decompose(&d8.group, &d8.jtilde, &d8.j, &d8.rho_tilde.character, d8.conductor).unwrap();
        assert_eq!((dec.m, dec.orbit.len(), dec.dim_sigma), (1, 2, 1));
        let q8 = model("q8-center-full");
        let dec = restrict_decompose(&q8.group, &q8.jtilde, &q8.j, &q8.rho_tilde.character, q8.conductor).unwrap();
        assert_eq!((dec.m, dec.orbit.len(), dec.dim_sigma), (2, 1, 1));
        // H̃ = H.
        let dec = restrict_decompose(&q8.group, &q8.jtilde, &q8.jtilde, &q8.rho_tilde.character, q8.conductor).unwrap();
        assert_eq!((dec.m, dec.orbit.len(), dec.dim_sigma), (1, 1, 2));
        // Ind from C4 to D8 of the trivial character is reducible.
        let triv: ClassFunction = (0..8).map(|_| Cyclotomic::one(4)).collect();
        let ind = induce(&d8.group, &d8.j, &restrict(&d8.j, &triv, 4), 4);
        let err = restrict_decompose(&d8.group, &d8.jtilde, &d8.j, &ind, 4).unwrap_err();
        assert!(matches!(err, HeckeError::Reducible(_)));
    }

    #[test]
    fn twist_examples() {
        let d8 = model("d8-c4-full");
        let g = &d8.group;
        let tw = twist_group(g, &d8.jtilde, &d8.j, &d8.rho_tilde.character, 4).unwrap();
        assert_eq!((tw.characters.len(), tw.dagger.order()), (2, 4));
        let tw = twist_group(g, &d8.jtilde, &d8.jtilde, &d8.rho_tilde.character, 4).unwrap();
        assert_eq!((tw.characters.len(), tw.dagger.order()), (1, 8));
        let lin = model("d8xc3-c4-induced");
        let tw = twist_group(&lin.group, &lin.jtilde, &lin.j, &lin.rho_tilde.character, lin.conductor).unwrap();
        assert_eq!(tw.characters.len(), 1);
        assert_eq!(tw.dagger, lin.jtilde);
        let err = twist_group(g, &g.whole(), &g.trivial(), &d8.rho_tilde.character, 4);
        assert!(matches!(err, Err(HeckeError::NonAbelianQuotient(_))));
    }

    #[test]
    fn intertwining_examples() {
        let m = model("d8-c4-induced");
        let g = &m.group;
        let ones: ClassFunction = (0..8).map(|x| Cyclotomic::from_int(4, m.j.contains(x) as i64)).collect();
        let all = intertwining_set(g, &m.j, &ones, 4);
        assert!(all.iter().all(|d| d.intertwines));
        assert_eq!(all.iter().map(|d| d.size).sum::<usize>(), 8);
        let set = intertwining_set(g, &m.j, &m.psi(), 4);
        assert!(set.iter().find(|d| d.representative == 0).unwrap().intertwines);
        assert_eq!(set.iter().filter(|d| d.intertwines).map(|d| d.size).sum::<usize>(), 4);
        // Q8 over ⟨i⟩: j conjugates the faithful character to its inverse.
        let q = model("q8-c4-induced");
        let set = intertwining_set(&q.group, &q.j, &q.psi(), 4);
        assert_eq!(set.len(), 2);
        assert_eq!(set.iter().filter(|d| d.intertwines).count(), 1);
    }

    #[test]
    fn check_examples() {
        let r = evaluate(&model("s3-trivial")).unwrap();
        assert_eq!((r.multiplicity_transfer.m_n_pi, r.multiplicity_transfer.m_j_rho_tilde), (Some(1), 1));
        assert_eq!((r.center_dimension.center_dimension, r.center_dimension.dagger_index), (1, 1));
        let c = &r.commutativity;
        assert_eq!(
            (c.res_n_pi_multiplicity_free, c.res_j_rho_tilde_multiplicity_free, c.endomorphisms_commutative),
            (Some(true), true, true)
        );
        let r = evaluate(&model("q8-center-full")).unwrap();
        let c = &r.commutativity;
        assert_eq!(
            (c.res_n_pi_multiplicity_free, c.res_j_rho_tilde_multiplicity_free, c.endomorphisms_commutative),
            (Some(false), false, false)
        );
        assert_eq!(c.end_dimension, 4);
        let r = evaluate(&model("heis3-center-induced")).unwrap();
        assert_eq!(r.multiplicity_transfer.verdict, Verdict::Skipped);
        assert!(!r.hypotheses.intertwining_in_jtilde);
        assert_eq!(r.hypotheses.intertwining_order, 27);
    }

    /// For abelian J the constituents are linear characters, found here by
    /// exhaustive homomorphism search and direct inner products.
    #[test]
    fn abelian_oracle_agrees() {
        for spec in builtin_catalog().entries {
            let m = FiniteGroupModel::from_spec(&spec).unwrap();
            let (g, c) = (&m.group, m.conductor);
            if !g.quotient_is_abelian(&m.j, &g.trivial()) {
                continue;
            }
            let psi = m.psi();
            let lambdas: Vec<ClassFunction> = quotient_characters(g, &m.j, &g.trivial(), c)
                .unwrap()
                .into_iter()
                .map(|a| {
                    a.iter()
                        .map(|&e| if e == usize::MAX { Cyclotomic::zero(c) } else { Cyclotomic::zeta_pow(c, e as i64) })
                        .collect()
                })
                .collect();
            let mults: Vec<u64> = lambdas.iter().map(|l| inner_int(&m.j, &psi, l, c).unwrap()).collect();
            let present: Vec<usize> = (0..lambdas.len()).filter(|&i| mults[i] > 0).collect();
            let first = &lambdas[present[0]];
            let stab = m
                .jtilde
                .elements
                .iter()
                .filter(|&&x| m.j.elements.iter().all(|&y| first[g.conj(x, y)] == first[y]))
                .count();
            let dec = restrict_decompose(g, &m.jtilde, &m.j, &m.rho_tilde.character, c).unwrap();
            assert!(present.iter().all(|&i| mults[i] == dec.m), "{}", spec.name);
            assert_eq!(present.len(), dec.constituents, "{}", spec.name);
            assert_eq!(stab, dec.inertia.order(), "{}", spec.name);
            assert_eq!(dec.dim_sigma, 1);
        }
    }

    #[test]
    fn builtin_catalog_passes() {
        let cat = builtin_catalog();
        assert!(cat.entries.len() >= 12);
        let json = serde_json::to_string(&cat).unwrap();
        assert_eq!(crate::clifford_lab::CatalogFile::from_json(&json).unwrap(), cat);
        let mut skipped = 0;
        for spec in &cat.entries {
            let r = evaluate(&FiniteGroupModel::from_spec(spec).unwrap()).unwrap();
            assert!(r.group_order <= 512);
            assert_eq!(r.verdict, Verdict::Pass, "{}", spec.name);
            assert!(r.clifford_jtilde.passes() && r.frobenius_reciprocity);
            skipped += (r.multiplicity_transfer.verdict == Verdict::Skipped) as usize;
        }
        assert_eq!(skipped, 2);
    }

    #[test]
    fn table_catalog_entry() {
        // C4 by Cayley table with N = C2 and a faithful character.
        let text = r#"{"entries": [{"name": "c4", "group": {"table": [[0,1,2,3],[1,2,3,0],[2,3,0,1],[3,0,1,2]]},
            "normal": [2], "jtilde": [1], "conductor": 4, "rep": [[[[0, 1]]]]}]}"#;
        let cat = crate::clifford_lab::CatalogFile::from_json(text).unwrap();
        let r = evaluate(&FiniteGroupModel::from_spec(&cat.entries[0]).unwrap()).unwrap();
        assert_eq!(r.verdict, Verdict::Pass);
        assert!(crate::clifford_lab::CatalogFile::from_json("{\"entries\": [{}]}").is_err());
    }
}
