//! The Iwahori–Hecke algebra of a split root datum in its Bernstein
//! presentation: basis θ_λ T_w for λ a cocharacter and w in the finite Weyl
//! group, with T_s² = (q−1)T_s + q and
//!
//!   T_s θ_λ = θ_{sλ} T_s + (q−1)(θ_λ − θ_{sλ}) / (1 − θ_{−α^∨}).
//!
//! Scalars are generic so the same multiplication runs over Q[v, 1/v] and
//! over Q after specializing v.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Debug;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::laurent::LaurentPoly;
use crate::linalg::{rank_fraction_free, rank_over_field};
use crate::root_datum::{box_points, Coweight, RootDatum, WeylGroup};
use crate::Result;

/// Coefficient ring of the algebra.
pub trait Scalar:
    Clone
    + PartialEq
    + Debug
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
{
}

impl<S> Scalar for S where
    S: Clone + PartialEq + Debug + Zero + One + Add<Output = S> + Sub<Output = S> + Mul<Output = S> + Neg<Output = S>
{
}

/// Basis label (λ, w) standing for θ_λ T_w.
pub type Label = (Coweight, usize);

/// Finite combination of basis elements; zero coefficients are never stored.
#[derive(Clone, PartialEq, Debug)]
pub struct HeckeElement<S> {
    terms: BTreeMap<Label, S>,
}

impl<S: Scalar> HeckeElement<S> {
    pub fn zero() -> Self {
        HeckeElement { terms: BTreeMap::new() }
    }

    pub fn basis(lambda: Coweight, w: usize) -> Self {
        Self::monomial(lambda, w, S::one())
    }

    pub fn monomial(lambda: Coweight, w: usize, c: S) -> Self {
        let mut x = Self::zero();
        x.add_term((lambda, w), c);
        x
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> &BTreeMap<Label, S> {
        &self.terms
    }

    pub fn coeff(&self, label: &Label) -> S {
        self.terms.get(label).cloned().unwrap_or_else(S::zero)
    }

    pub fn add_term(&mut self, label: Label, c: S) {
        if c.is_zero() {
            return;
        }
        let slot = self.terms.entry(label.clone()).or_insert_with(S::zero);
        *slot = slot.clone() + c;
        if slot.is_zero() {
            self.terms.remove(&label);
        }
    }

    pub fn add(&self, o: &Self) -> Self {
        let mut out = self.clone();
        for (l, c) in &o.terms {
            out.add_term(l.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.scale(&-S::one()))
    }

    pub fn scale(&self, c: &S) -> Self {
        let mut out = Self::zero();
        for (l, d) in &self.terms {
            out.add_term(l.clone(), c.clone() * d.clone());
        }
        out
    }

    /// True when only λ = 0 labels occur.
    pub fn is_finite_part(&self) -> bool {
        self.terms.keys().all(|(l, _)| l.0.iter().all(|&x| x == 0))
    }

    /// True when only w = e labels occur.
    pub fn is_theta_supported(&self) -> bool {
        self.terms.keys().all(|&(_, w)| w == 0)
    }

    pub fn map<T: Scalar>(&self, f: impl Fn(&S) -> T) -> HeckeElement<T> {
        let mut out = HeckeElement::zero();
        for (l, c) in &self.terms {
            out.add_term(l.clone(), f(c));
        }
        out
    }
}

/// One term of an element in printable form.
#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct TermView {
    pub lambda: Vec<i64>,
    /// Reduced word of w in the simple reflections.
    pub w: Vec<usize>,
    pub coeff: String,
}

#[derive(Clone, Debug)]
pub struct IwahoriHecke<S> {
    pub datum: RootDatum,
    pub weyl: WeylGroup,
    q: S,
    coroots: Vec<Coweight>,
}

impl IwahoriHecke<LaurentPoly> {
    /// Scalars Q[v, 1/v] with q = v².
    pub fn generic(datum: &RootDatum) -> Result<Self> {
        Self::with_q(datum, LaurentPoly::q())
    }

    /// Length of the translation t_λ in the extended affine Weyl group.
    pub fn translation_length(&self, lambda: &Coweight) -> i64 {
        self.datum.positive_roots().map(|a| self.datum.pair(a, lambda).abs()).sum()
    }

    /// T_{t_λ} for dominant λ, which equals v^{ℓ(t_λ)} θ_λ.
    pub fn dominant_translation(&self, lambda: &Coweight) -> HeckeElement<LaurentPoly> {
        assert!(self.datum.is_dominant(lambda), "translation by a non-dominant coweight");
        HeckeElement::monomial(lambda.clone(), 0, LaurentPoly::v_pow(self.translation_length(lambda)))
    }

    /// v^{−ℓ(t_{λ1})} T_{t_{λ1}} · (v^{−ℓ(t_{λ2})} T_{t_{λ2}})^{−1} for dominant λ1, λ2.
    pub fn theta_from_decomposition(&self, l1: &Coweight, l2: &Coweight) -> HeckeElement<LaurentPoly> {
        let a = self.dominant_translation(l1).scale(&LaurentPoly::v_pow(-self.translation_length(l1)));
        let b = self.dominant_translation(l2).scale(&LaurentPoly::v_pow(-self.translation_length(l2)));
        // b is θ_{λ2}, whose inverse is θ_{−λ2}.
        let b_inv = self.theta(&l2.neg());
        assert_eq!(self.mul(&b, &b_inv), self.one());
        self.mul(&a, &b_inv)
    }
}

impl IwahoriHecke<BigRational> {
    /// Scalars Q with v specialized to `v0`, so q = v0².
    pub fn specialized(datum: &RootDatum, v0: &BigRational) -> Result<Self> {
        Self::with_q(datum, v0 * v0)
    }
}

impl<S: Scalar> IwahoriHecke<S> {
    pub fn with_q(datum: &RootDatum, q: S) -> Result<Self> {
        let weyl = datum.weyl_group()?;
        let coroots = datum.simple.iter().map(|&a| Coweight(datum.roots[a].coroot.clone())).collect();
        Ok(IwahoriHecke { datum: datum.clone(), weyl, q, coroots })
    }

    pub fn q(&self) -> &S {
        &self.q
    }

    pub fn one(&self) -> HeckeElement<S> {
        self.theta(&Coweight::zero(self.datum.rank))
    }

    pub fn t(&self, w: usize) -> HeckeElement<S> {
        HeckeElement::basis(Coweight::zero(self.datum.rank), w)
    }

    pub fn t_simple(&self, i: usize) -> HeckeElement<S> {
        self.t(self.weyl.left_simple[i][0])
    }

    pub fn theta(&self, lambda: &Coweight) -> HeckeElement<S> {
        HeckeElement::basis(lambda.clone(), 0)
    }

    /// Index of the Weyl element with the given word.
    pub fn weyl_word(&self, word: &[usize]) -> usize {
        word.iter().rev().fold(0, |w, &i| self.weyl.left_simple[i][w])
    }

    /// (θ_λ − θ_{sλ}) / (1 − θ_{−α^∨}) as signed cocharacters, with the
    /// division checked in the group ring of the lattice.
    fn divided_difference(&self, i: usize, lambda: &Coweight) -> Vec<(Coweight, i64)> {
        let n = self.datum.pair(self.datum.simple[i], lambda);
        let c = &self.coroots[i];
        let shift = |k: i64| Coweight(lambda.0.iter().zip(&c.0).map(|(x, y)| x + k * y).collect());
        let quotient: Vec<(Coweight, i64)> =
            if n > 0 { (0..n).map(|k| (shift(-k), 1)).collect() } else { (1..=-n).map(|k| (shift(k), -1)).collect() };
        let mut lhs: BTreeMap<Coweight, i64> = BTreeMap::new();
        for (mu, s) in &quotient {
            *lhs.entry(mu.clone()).or_default() += s;
            *lhs.entry(mu.add(&c.neg())).or_default() -= s;
        }
        let mut rhs: BTreeMap<Coweight, i64> = BTreeMap::new();
        *rhs.entry(lambda.clone()).or_default() += 1;
        *rhs.entry(self.datum.reflect(self.datum.simple[i], lambda)).or_default() -= 1;
        lhs.retain(|_, v| *v != 0);
        rhs.retain(|_, v| *v != 0);
        assert_eq!(lhs, rhs, "divided difference is not exact");
        quotient
    }

    /// T_s T_y in the finite Hecke algebra.
    fn simple_times_t(&self, i: usize, y: usize) -> Vec<(usize, S)> {
        let sy = self.weyl.left_simple[i][y];
        if self.weyl.length(sy) > self.weyl.length(y) {
            vec![(sy, S::one())]
        } else {
            vec![(y, self.q.clone() - S::one()), (sy, self.q.clone())]
        }
    }

    /// T_{s_i} · x.
    pub fn left_simple(&self, i: usize, x: &HeckeElement<S>) -> HeckeElement<S> {
        let qm1 = self.q.clone() - S::one();
        let mut out = HeckeElement::zero();
        for ((lambda, y), c) in &x.terms {
            let s_lambda = self.datum.reflect(self.datum.simple[i], lambda);
            for (w, d) in self.simple_times_t(i, *y) {
                out.add_term((s_lambda.clone(), w), c.clone() * d);
            }
            for (mu, sign) in self.divided_difference(i, lambda) {
                let k = if sign > 0 { qm1.clone() } else { -qm1.clone() };
                out.add_term((mu, *y), c.clone() * k);
            }
        }
        out
    }

    /// T_y T_u in the finite Hecke algebra.
    fn finite_product(&self, y: usize, u: usize) -> Vec<(usize, S)> {
        let mut acc: BTreeMap<usize, S> = BTreeMap::from([(u, S::one())]);
        for &i in self.weyl.elements[y].word.iter().rev() {
            let mut next: BTreeMap<usize, S> = BTreeMap::new();
            for (z, c) in acc {
                for (w, d) in self.simple_times_t(i, z) {
                    let slot = next.entry(w).or_insert_with(S::zero);
                    *slot = slot.clone() + c.clone() * d;
                }
            }
            next.retain(|_, c| !c.is_zero());
            acc = next;
        }
        acc.into_iter().collect()
    }

    /// Product in the Bernstein presentation.
    pub fn mul(&self, x: &HeckeElement<S>, y: &HeckeElement<S>) -> HeckeElement<S> {
        let mut out = HeckeElement::zero();
        for ((lambda, w), c) in &x.terms {
            for ((mu, u), d) in &y.terms {
                // T_w θ_μ, peeling simple reflections off the right of w.
                let mut moved = self.theta(mu);
                for &i in self.weyl.elements[*w].word.iter().rev() {
                    moved = self.left_simple(i, &moved);
                }
                let cd = c.clone() * d.clone();
                for ((nu, z), e) in moved.terms {
                    let shifted = lambda.add(&nu);
                    for (v, f) in self.finite_product(z, *u) {
                        out.add_term((shifted.clone(), v), cd.clone() * e.clone() * f);
                    }
                }
            }
        }
        out
    }

    /// Product of two elements of the finite Hecke algebra.
    pub fn finite_hecke_multiply(&self, x: &HeckeElement<S>, y: &HeckeElement<S>) -> HeckeElement<S> {
        assert!(x.is_finite_part() && y.is_finite_part(), "finite Hecke product of non-finite elements");
        self.mul(x, y)
    }

    pub fn commutator(&self, x: &HeckeElement<S>, y: &HeckeElement<S>) -> HeckeElement<S> {
        self.mul(x, y).sub(&self.mul(y, x))
    }

    /// The T_{s_i} and θ_{e_j}; together with the θ_{−e_j} they generate.
    pub fn generators(&self) -> Vec<HeckeElement<S>> {
        let r = self.datum.rank;
        (0..self.datum.semisimple_rank())
            .map(|i| self.t_simple(i))
            .chain((0..r).map(|j| self.theta(&Coweight::unit(r, j))))
            .collect()
    }

    pub fn is_central(&self, z: &HeckeElement<S>) -> bool {
        self.generators().iter().all(|g| self.commutator(g, z).is_zero())
    }

    /// z_μ = Σ θ_λ over the W₀-orbit of μ; a non-dominant μ is first
    /// replaced by its dominant representative.
    pub fn central_element(&self, mu: &Coweight) -> CentralElement<S> {
        let dominant = self.datum.dominant(mu);
        let notice = (dominant != *mu).then(|| format!("{:?} is not dominant; using {:?}", mu.0, dominant.0));
        let orbit = self.datum.weyl_orbit(&dominant);
        let mut element = HeckeElement::zero();
        for lambda in &orbit {
            element.add_term((lambda.clone(), 0), S::one());
        }
        CentralElement { mu: dominant, notice, orbit, element }
    }

    pub fn describe(&self, x: &HeckeElement<S>, show: impl Fn(&S) -> String) -> Vec<TermView> {
        x.terms
            .iter()
            .map(|((l, w), c)| TermView { lambda: l.0.clone(), w: self.weyl.elements[*w].word.clone(), coeff: show(c) })
            .collect()
    }
}

#[derive(Clone, Debug)]
pub struct CentralElement<S> {
    pub mu: Coweight,
    /// Set when the requested coweight was not dominant.
    pub notice: Option<String>,
    pub orbit: BTreeSet<Coweight>,
    pub element: HeckeElement<S>,
}

/// Exhaustive checks of the defining relations on small labels.
#[derive(Clone, Debug, Serialize)]
pub struct RelationChecks {
    pub quadratic: bool,
    pub braid: bool,
    pub theta_additivity: bool,
    pub theta_normalization: bool,
    pub unit: bool,
    pub associativity: bool,
    pub triples_checked: usize,
}

impl RelationChecks {
    pub fn passes(&self) -> bool {
        self.quadratic
            && self.braid
            && self.theta_additivity
            && self.theta_normalization
            && self.unit
            && self.associativity
    }
}

/// Order of s_i s_j, read off the Weyl group.
fn coxeter_order(weyl: &WeylGroup, i: usize, j: usize) -> usize {
    let st = weyl.left_simple[i][weyl.left_simple[j][0]];
    let mut w = st;
    let mut m = 1;
    while w != 0 {
        w = weyl.mul(w, st);
        m += 1;
    }
    m
}

/// Every label with |λ|_∞ ≤ r and any w.
pub fn labels(hecke: &IwahoriHecke<LaurentPoly>, r: i64) -> Vec<Label> {
    box_points(hecke.datum.rank, r)
        .into_iter()
        .flat_map(|l| (0..hecke.weyl.len()).map(move |w| (l.clone(), w)))
        .collect()
}

/// Quadratic and braid relations, θ-additivity and inverses on |λ| ≤ `r`,
/// the unit, and associativity on up to `max_triples` triples of basis
/// elements with |λ| ≤ 1 taken at a fixed stride.
pub fn relation_checks(hecke: &IwahoriHecke<LaurentPoly>, r: i64, max_triples: usize) -> RelationChecks {
    let n = hecke.datum.semisimple_rank();
    let q = LaurentPoly::q();
    let one = hecke.one();
    let quadratic = (0..n).all(|i| {
        let t = hecke.t_simple(i);
        let lhs = hecke.finite_hecke_multiply(&t, &t);
        lhs == t.scale(&(&q - &LaurentPoly::one())).add(&one.scale(&q))
    });
    let braid = (0..n).all(|i| {
        (0..n).filter(|&j| j != i).all(|j| {
            let m = coxeter_order(&hecke.weyl, i, j);
            let word = |a: usize, b: usize| {
                (0..m).fold(hecke.one(), |acc, k| {
                    hecke.finite_hecke_multiply(&acc, &hecke.t_simple(if k % 2 == 0 { a } else { b }))
                })
            };
            let lhs = word(i, j);
            let alternating: Vec<usize> = (0..m).map(|k| if k % 2 == 0 { i } else { j }).collect();
            lhs == word(j, i) && lhs == hecke.t(hecke.weyl_word(&alternating))
        })
    });
    let points = box_points(hecke.datum.rank, r);
    let theta_additivity = points
        .iter()
        .all(|a| points.iter().all(|b| hecke.mul(&hecke.theta(a), &hecke.theta(b)) == hecke.theta(&a.add(b))))
        && points.iter().all(|a| hecke.mul(&hecke.theta(a), &hecke.theta(&a.neg())) == one);
    let dominant: Vec<&Coweight> = points.iter().filter(|l| hecke.datum.is_dominant(l)).collect();
    let theta_normalization = dominant.iter().all(|&l1| {
        dominant.iter().all(|&l2| {
            let diff = l1.add(&l2.neg());
            hecke.theta_from_decomposition(l1, l2) == hecke.theta(&diff)
        })
    });
    let all = labels(hecke, r);
    let unit = all.iter().all(|(l, w)| {
        let x = HeckeElement::basis(l.clone(), *w);
        hecke.mul(&x, &one) == x && hecke.mul(&one, &x) == x
    });
    let small = labels(hecke, 1);
    let total = small.len().pow(3);
    let stride = total.div_ceil(max_triples.max(1)).max(1);
    let mut triples_checked = 0;
    let mut associativity = true;
    for k in (0..total).step_by(stride) {
        let (a, b, c) = (k / (small.len() * small.len()), (k / small.len()) % small.len(), k % small.len());
        let [x, y, z] = [a, b, c].map(|i| HeckeElement::basis(small[i].0.clone(), small[i].1));
        associativity &= hecke.mul(&hecke.mul(&x, &y), &z) == hecke.mul(&x, &hecke.mul(&y, &z));
        triples_checked += 1;
    }
    RelationChecks { quadratic, braid, theta_additivity, theta_normalization, unit, associativity, triples_checked }
}

/// Generic products against products in the algebra specialized at `v0`.
pub fn specialization_coherent(hecke: &IwahoriHecke<LaurentPoly>, v0: &BigRational, max_pairs: usize) -> Result<bool> {
    let special = IwahoriHecke::specialized(&hecke.datum, v0)?;
    let small = labels(hecke, 1);
    let total = small.len() * small.len();
    let stride = total.div_ceil(max_pairs.max(1)).max(1);
    Ok((0..total).step_by(stride).all(|k| {
        let (a, b) = (&small[k / small.len()], &small[k % small.len()]);
        let x = HeckeElement::basis(a.0.clone(), a.1);
        let y = HeckeElement::basis(b.0.clone(), b.1);
        let generic = hecke.mul(&x, &y).map(|c| c.eval(v0));
        generic == special.mul(&x.map(|c| c.eval(v0)), &y.map(|c| c.eval(v0)))
    }))
}

/// Above this many columns the kernel is bounded by specialization rather
/// than computed by fraction-free elimination.
const FRACTION_FREE_COLUMNS: usize = 64;

#[derive(Clone, Debug, Serialize)]
pub struct CentralBasisElement {
    pub mu: Vec<i64>,
    pub terms: Vec<TermView>,
    pub central: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct SatakeReport {
    pub datum: String,
    pub radius: i64,
    pub box_stable: bool,
    /// Number of labels (λ, w) with |λ|_∞ ≤ R.
    pub space_dimension: usize,
    pub basis: Vec<CentralBasisElement>,
    pub all_central: bool,
    pub independent: bool,
    /// Dimension of the centralizer of the generators inside the truncated space.
    pub kernel_dimension: usize,
    /// "fraction-free" or "specialization bound".
    pub kernel_method: String,
    pub kernel_is_span: bool,
    pub relations: RelationChecks,
    pub specialization_coherent: bool,
}

impl SatakeReport {
    pub fn passes(&self) -> bool {
        self.all_central
            && self.independent
            && self.kernel_is_span
            && self.relations.passes()
            && self.specialization_coherent
    }
}

/// Rows of the linear map x ↦ ([g, x])_g on the span of `cols`.
fn commutator_rows(hecke: &IwahoriHecke<LaurentPoly>, cols: &[Label]) -> Vec<Vec<LaurentPoly>> {
    let gens = hecke.generators();
    let mut rows: BTreeMap<(usize, Label), Vec<LaurentPoly>> = BTreeMap::new();
    for (c, (l, w)) in cols.iter().enumerate() {
        let x = HeckeElement::basis(l.clone(), *w);
        for (g, gen) in gens.iter().enumerate() {
            for (label, coeff) in hecke.commutator(gen, &x).terms {
                rows.entry((g, label)).or_insert_with(|| vec![LaurentPoly::zero(); cols.len()])[c] = coeff;
            }
        }
    }
    rows.into_values().collect()
}

/// Truncated check that the center is spanned by the orbit sums z_μ.
///
/// The z_μ whose orbit lies in the box are central and independent, so they
/// bound the kernel from below. Above, the kernel over Q(v) is computed
/// exactly when small, and otherwise bounded by the nullity after
/// specializing v, which can only grow.
pub fn satake_check(datum: &RootDatum, radius: i64) -> Result<SatakeReport> {
    let hecke = IwahoriHecke::generic(datum)?;
    let cols = labels(&hecke, radius);
    let index: BTreeMap<&Label, usize> = cols.iter().enumerate().map(|(i, l)| (l, i)).collect();
    let dominant: Vec<Coweight> = box_points(datum.rank, radius)
        .into_iter()
        .filter(|l| datum.is_dominant(l) && datum.weyl_orbit(l).iter().all(|m| m.sup_norm() <= radius))
        .collect();
    let central: Vec<CentralElement<LaurentPoly>> = dominant.iter().map(|mu| hecke.central_element(mu)).collect();
    let basis: Vec<CentralBasisElement> = central
        .iter()
        .map(|z| CentralBasisElement {
            mu: z.mu.0.clone(),
            terms: hecke.describe(&z.element, |c| c.to_string()),
            central: hecke.is_central(&z.element),
        })
        .collect();
    let vectors: Vec<Vec<LaurentPoly>> = central
        .iter()
        .map(|z| {
            let mut v = vec![LaurentPoly::zero(); cols.len()];
            for (l, c) in z.element.terms() {
                v[index[l]] = c.clone();
            }
            v
        })
        .collect();
    let independent = rank_fraction_free(vectors) == central.len();
    let rows = commutator_rows(&hecke, &cols);
    let (kernel_dimension, kernel_method) = if cols.len() <= FRACTION_FREE_COLUMNS {
        (cols.len() - rank_fraction_free(rows), "fraction-free")
    } else {
        let v0 = BigRational::from_integer(BigInt::from(3));
        let special: Vec<Vec<BigRational>> = rows.iter().map(|r| r.iter().map(|c| c.eval(&v0)).collect()).collect();
        (cols.len() - rank_over_field(special), "specialization bound")
    };
    let all_central = basis.iter().all(|b| b.central);
    Ok(SatakeReport {
        datum: datum.name.clone(),
        radius,
        box_stable: datum.box_is_weyl_stable(radius),
        space_dimension: cols.len(),
        all_central,
        independent,
        kernel_is_span: all_central && independent && kernel_dimension == central.len(),
        kernel_dimension,
        kernel_method: kernel_method.into(),
        basis,
        relations: relation_checks(&hecke, radius.min(2), 512),
        specialization_coherent: specialization_coherent(&hecke, &BigRational::from_integer(BigInt::from(2)), 256)?,
    })
}

/// Supports of the z_μ over all orbits meeting the box |λ|_∞ ≤ R.
pub fn central_supports(datum: &RootDatum, radius: i64) -> BTreeSet<BTreeSet<Coweight>> {
    box_points(datum.rank, radius).iter().map(|l| datum.weyl_orbit(&datum.dominant(l))).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn algebra(name: &str) -> IwahoriHecke<LaurentPoly> {
        IwahoriHecke::generic(&RootDatum::named(name).unwrap()).unwrap()
    }

    fn cw(v: &[i64]) -> Coweight {
        Coweight(v.to_vec())
    }

    #[test]
    fn finite_relations() {
        let h = algebra("a1");
        let t = h.t_simple(0);
        assert_eq!(h.mul(&h.one(), &t), t);
        let q = LaurentPoly::q();
        let expected = t.scale(&(&q - &LaurentPoly::one())).add(&h.one().scale(&q));
        assert_eq!(h.finite_hecke_multiply(&t, &t), expected);

        let h = algebra("a2");
        let (s1, s2) = (h.t_simple(0), h.t_simple(1));
        let a = h.mul(&h.mul(&s1, &s2), &s1);
        let b = h.mul(&h.mul(&s2, &s1), &s2);
        assert_eq!(a, b);
        assert_eq!(a, h.t(h.weyl_word(&[0, 1, 0])));
    }

    #[test]
    fn theta_rules() {
        let h = algebra("gl2");
        assert_eq!(h.theta(&cw(&[0, 0])), h.one());
        for a in box_points(2, 2) {
            assert_eq!(h.mul(&h.theta(&a), &h.theta(&a.neg())), h.one());
            for b in box_points(2, 1) {
                assert_eq!(h.mul(&h.theta(&a), &h.theta(&b)), h.theta(&a.add(&b)));
            }
        }
        assert_eq!(h.translation_length(&cw(&[2, 0])), 2);
        assert_eq!(h.theta_from_decomposition(&cw(&[2, 1]), &cw(&[1, 1])), h.theta(&cw(&[1, 0])));
    }

    #[test]
    fn bernstein_relation_rank_one() {
        // T_s θ_1 = θ_{-1} T_s + (q-1)θ_1 in A_1 with α^∨ = 2·e.
        let h = algebra("a1");
        let t = h.t_simple(0);
        let lhs = h.mul(&t, &h.theta(&cw(&[1])));
        let qm1 = LaurentPoly::q() - LaurentPoly::one();
        let coroot = h.coroots[0].0[0];
        let n = h.datum.pair(h.datum.simple[0], &cw(&[1]));
        let mut rhs = HeckeElement::basis(cw(&[1 - n * coroot]), h.weyl.left_simple[0][0]);
        for k in 0..n {
            rhs.add_term((cw(&[1 - k * coroot]), 0), qm1.clone());
        }
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn relations_hold() {
        for name in ["a1", "gl2", "a2"] {
            let h = algebra(name);
            let checks = relation_checks(&h, 1, 300);
            assert!(checks.passes(), "{name}: {checks:?}");
        }
    }

    #[test]
    fn central_elements() {
        let h = algebra("gl2");
        let z = h.central_element(&cw(&[1, 0]));
        assert_eq!(z.element, h.theta(&cw(&[1, 0])).add(&h.theta(&cw(&[0, 1]))));
        assert!(z.notice.is_none());
        assert!(h.is_central(&z.element));
        assert_eq!(h.central_element(&cw(&[1, 1])).element, h.theta(&cw(&[1, 1])));
        let moved = h.central_element(&cw(&[0, 1]));
        assert_eq!(moved.mu, cw(&[1, 0]));
        assert!(moved.notice.is_some());
        assert_eq!(h.central_element(&cw(&[0, 0])).element, h.one());

        let a1 = algebra("a1");
        assert!(a1.is_central(&a1.one()));
        assert!(!a1.is_central(&a1.t_simple(0)));
        assert!(!a1.is_central(&a1.theta(&cw(&[1]))));
    }

    #[test]
    fn satake_examples() {
        let a1 = RootDatum::named("a1").unwrap();
        let r = satake_check(&a1, 2).unwrap();
        assert!(r.passes(), "{r:?}");
        assert_eq!(r.kernel_dimension, 3);
        assert_eq!(r.kernel_method, "fraction-free");

        let gl2 = RootDatum::named("gl2").unwrap();
        let r = satake_check(&gl2, 1).unwrap();
        assert!(r.passes(), "{r:?}");
        // (0,0), (1,0), (1,1), (0,-1), (-1,-1), (1,-1)
        assert_eq!(r.kernel_dimension, 6);

        let r = satake_check(&a1, 0).unwrap();
        assert!(r.passes());
        assert_eq!(r.basis.len(), 1);
        assert_eq!(r.basis[0].terms, vec![TermView { lambda: vec![0], w: vec![], coeff: "1".into() }]);
    }

    #[test]
    fn gl2_radius_two() {
        let r = satake_check(&RootDatum::named("gl2").unwrap(), 2).unwrap();
        assert!(r.passes(), "{r:?}");
        assert_eq!((r.space_dimension, r.kernel_dimension), (50, 15));
        assert_eq!(r.kernel_method, "fraction-free");
    }

    #[test]
    fn supports_match_trivial_character_orbits() {
        use crate::torus_center::orbits;
        for (name, radius) in [("a1", 2), ("gl2", 2)] {
            let datum = RootDatum::named(name).unwrap();
            let torus: BTreeSet<BTreeSet<Coweight>> = orbits(&datum, 3, radius)
                .unwrap()
                .into_iter()
                .filter(|o| o.orbit.iter().all(|p| p.chi.iter().all(|&c| c == 0)))
                .map(|o| o.orbit.iter().map(|p| Coweight(p.lambda.clone())).collect())
                .collect();
            assert_eq!(torus, central_supports(&datum, radius), "{name}");
        }
    }

    #[test]
    fn specialization() {
        let h = algebra("a2");
        assert!(specialization_coherent(&h, &BigRational::from_integer(BigInt::from(3)), 200).unwrap());
    }
}
