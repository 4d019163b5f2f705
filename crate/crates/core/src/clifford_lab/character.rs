//! Representations by explicit cyclotomic matrices, and the class-function
//! toolkit (inner products, induction, trace forms, linear characters of
//! abelian quotients) that the Clifford checks are built from.

use std::collections::VecDeque;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::group::{FiniteGroup, Subgroup};
use crate::cyclotomic::Cyclotomic;
use crate::linalg::rank_over_field;
use crate::{HeckeError, Result};

pub type Matrix = Vec<Vec<Cyclotomic>>;

/// Class function on the ambient group, zero outside its support.
pub type ClassFunction = Vec<Cyclotomic>;

fn mat_mul(a: &Matrix, b: &Matrix, conductor: usize) -> Matrix {
    let n = a.len();
    let mut out = vec![vec![Cyclotomic::zero(conductor); n]; n];
    for i in 0..n {
        for k in 0..n {
            if a[i][k].is_zero() {
                continue;
            }
            for j in 0..n {
                if !b[k][j].is_zero() {
                    out[i][j] = &out[i][j] + &(&a[i][k] * &b[k][j]);
                }
            }
        }
    }
    out
}

fn identity(n: usize, conductor: usize) -> Matrix {
    (0..n).map(|i| (0..n).map(|j| Cyclotomic::from_int(conductor, (i == j) as i64)).collect()).collect()
}

/// A representation of `support` given on generators; only its character is kept.
#[derive(Clone, Debug)]
pub struct Representation {
    pub conductor: usize,
    pub degree: usize,
    pub support: Subgroup,
    pub character: ClassFunction,
}

impl Representation {
    /// Expands the generator matrices over the subgroup they generate and
    /// verifies ρ(x)ρ(s) = ρ(xs) for every element x and generator s.
    pub fn from_generators(
        group: &FiniteGroup,
        generators: &[usize],
        matrices: &[Matrix],
        conductor: usize,
    ) -> Result<Self> {
        if generators.len() != matrices.len() {
            return Err(HeckeError::InvalidModel("one matrix per generator is required".into()));
        }
        let degree = matrices.first().map_or(1, |m| m.len());
        if matrices.iter().any(|m| m.len() != degree || m.iter().any(|r| r.len() != degree)) {
            return Err(HeckeError::InvalidModel("generator matrices must be square of equal size".into()));
        }
        if matrices.iter().flatten().flatten().any(|c| c.conductor() != conductor) {
            return Err(HeckeError::InvalidModel("matrix entries must share the conductor".into()));
        }
        let mut images: Vec<Option<Matrix>> = vec![None; group.order()];
        images[0] = Some(identity(degree, conductor));
        let mut queue = VecDeque::from([0usize]);
        while let Some(x) = queue.pop_front() {
            for (&s, ms) in generators.iter().zip(matrices) {
                let y = group.mul(x, s);
                if images[y].is_none() {
                    images[y] = Some(mat_mul(images[x].as_ref().unwrap(), ms, conductor));
                    queue.push_back(y);
                }
            }
        }
        for x in 0..group.order() {
            let Some(mx) = &images[x] else { continue };
            for (&s, ms) in generators.iter().zip(matrices) {
                let y = group.mul(x, s);
                if &mat_mul(mx, ms, conductor) != images[y].as_ref().unwrap() {
                    return Err(HeckeError::InvalidModel(format!(
                        "matrices violate a group relation at element {x} times generator {s}"
                    )));
                }
            }
        }
        let support = Subgroup::from_mask(images.iter().map(Option::is_some).collect());
        let character = images
            .iter()
            .map(|m| match m {
                Some(m) => (0..degree).fold(Cyclotomic::zero(conductor), |acc, i| &acc + &m[i][i]),
                None => Cyclotomic::zero(conductor),
            })
            .collect();
        Ok(Representation { conductor, degree, support, character })
    }
}

fn integer_of(c: &Cyclotomic, what: &str) -> Result<BigRational> {
    c.as_rational().ok_or_else(|| HeckeError::InvalidModel(format!("{what} is not rational: {c}")))
}

/// ⟨a, b⟩ over `k`, normalized by |k|.
pub fn inner(k: &Subgroup, a: &[Cyclotomic], b: &[Cyclotomic], conductor: usize) -> Cyclotomic {
    let mut acc = Cyclotomic::zero(conductor);
    for &x in &k.elements {
        if !a[x].is_zero() && !b[x].is_zero() {
            acc = &acc + &(&a[x] * &b[x].conj());
        }
    }
    acc.scale(&BigRational::new(BigInt::one(), BigInt::from(k.order())))
}

/// ⟨a, b⟩ over `k` for characters, where the value must be a non-negative integer.
pub fn inner_int(k: &Subgroup, a: &[Cyclotomic], b: &[Cyclotomic], conductor: usize) -> Result<u64> {
    let r = integer_of(&inner(k, a, b, conductor), "inner product")?;
    if !r.is_integer() || r.is_negative() {
        return Err(HeckeError::InvalidModel(format!("inner product {r} is not a non-negative integer")));
    }
    Ok(r.to_integer().to_u64().expect("small inner product"))
}

/// Ind_k^G f as a class function on the whole group.
pub fn induce(group: &FiniteGroup, k: &Subgroup, f: &[Cyclotomic], conductor: usize) -> ClassFunction {
    let scale = BigRational::new(BigInt::one(), BigInt::from(k.order()));
    (0..group.order())
        .map(|g| {
            let mut acc = Cyclotomic::zero(conductor);
            for x in 0..group.order() {
                let y = group.conj(x, g);
                if k.contains(y) && !f[y].is_zero() {
                    acc = &acc + &f[y];
                }
            }
            acc.scale(&scale)
        })
        .collect()
}

/// Restriction of `f` to `k` (values outside `k` zeroed).
pub fn restrict(k: &Subgroup, f: &[Cyclotomic], conductor: usize) -> ClassFunction {
    (0..f.len()).map(|x| if k.contains(x) { f[x].clone() } else { Cyclotomic::zero(conductor) }).collect()
}

/// The class-sum trace form T(C, D) = Σ_{x∈C, y∈D} f(x y⁻¹) of a character
/// `f` of `k`. It is Σ_i mult_i·dim_i·ω_i(C)·conj ω_i(D) over the constituents,
/// so its rank counts distinct constituents without a character table.
pub struct TraceForm {
    pub rank: usize,
    /// Σ_C T(C, C) / |C|, which equals Σ_i mult_i·|k| / dim_i.
    pub weighted_trace: BigRational,
}

pub fn trace_form(group: &FiniteGroup, k: &Subgroup, f: &[Cyclotomic], conductor: usize) -> Result<TraceForm> {
    let (matrix, sizes) = class_form(group, k, k, f, conductor);
    let mut weighted = BigRational::zero();
    for (c, size) in sizes.iter().enumerate() {
        weighted += integer_of(&matrix[c][c], "trace form diagonal")? / BigRational::from_integer((*size).into());
    }
    Ok(TraceForm { rank: rank_over_field(matrix), weighted_trace: weighted })
}

/// Rank of the same form on sums over orbits of `acting` (normalizing `k`,
/// leaving `f` invariant) on `k`. Such sums act on each isotypic component
/// by a scalar that is constant along `acting`-orbits of constituents and
/// separates those orbits, so the rank is the number of orbits.
pub fn constituent_orbits(
    group: &FiniteGroup,
    k: &Subgroup,
    acting: &Subgroup,
    f: &[Cyclotomic],
    conductor: usize,
) -> usize {
    rank_over_field(class_form(group, k, acting, f, conductor).0)
}

fn class_form(
    group: &FiniteGroup,
    k: &Subgroup,
    acting: &Subgroup,
    f: &[Cyclotomic],
    conductor: usize,
) -> (Vec<Vec<Cyclotomic>>, Vec<usize>) {
    let (class_of, nclasses) = group.classes_under(k, acting);
    let mut reps = vec![usize::MAX; nclasses];
    let mut sizes = vec![0usize; nclasses];
    for &x in &k.elements {
        let c = class_of[x];
        if reps[c] == usize::MAX {
            reps[c] = x;
        }
        sizes[c] += 1;
    }
    // T(C, D) = |C|·Σ_{y∈D} f(x_C y⁻¹), independent of the representative x_C.
    let mut matrix = vec![vec![Cyclotomic::zero(conductor); nclasses]; nclasses];
    for (c, &xc) in reps.iter().enumerate() {
        for &y in &k.elements {
            let v = &f[group.mul(xc, group.inv(y))];
            if !v.is_zero() {
                let d = class_of[y];
                matrix[c][d] = &matrix[c][d] + v;
            }
        }
        let size = BigRational::from_integer(BigInt::from(sizes[c]));
        for entry in matrix[c].iter_mut() {
            *entry = entry.scale(&size);
        }
    }
    (matrix, sizes)
}

/// Linear characters of the abelian quotient `outer / inner`, each given as
/// exponents a(x) with ν(x) = ζ_M^{a(x)} (usize::MAX outside `outer`).
pub fn quotient_characters(
    group: &FiniteGroup,
    outer: &Subgroup,
    inner: &Subgroup,
    conductor: usize,
) -> Result<Vec<Vec<usize>>> {
    if !group.is_normal_in(inner, outer) || !group.quotient_is_abelian(outer, inner) {
        return Err(HeckeError::NonAbelianQuotient(format!(
            "of order {} by a subgroup of order {}",
            outer.order(),
            inner.order()
        )));
    }
    let mut gens = Vec::new();
    let mut current = inner.clone();
    for &x in &outer.elements {
        if !current.contains(x) {
            gens.push(x);
            current = group.join(&current, &group.generated(&[x]));
        }
    }
    let orders: Vec<usize> = gens
        .iter()
        .map(|&g| {
            let (mut k, mut y) = (1, g);
            while !inner.contains(y) {
                y = group.mul(y, g);
                k += 1;
            }
            k
        })
        .collect();
    let index = outer.order() / inner.order();
    let mut out = Vec::new();
    let mut choice = vec![0usize; gens.len()];
    loop {
        let steps: Vec<usize> = choice.iter().zip(&orders).map(|(&e, &o)| e * (conductor / o)).collect();
        if let Some(a) = extend_character(group, inner, &gens, &steps, conductor) {
            out.push(a);
        }
        let mut i = 0;
        while i < choice.len() {
            choice[i] += 1;
            if choice[i] < orders[i] {
                break;
            }
            choice[i] = 0;
            i += 1;
        }
        if i == choice.len() {
            break;
        }
    }
    if out.len() != index {
        return Err(HeckeError::InvalidModel(format!(
            "found {} characters of an abelian quotient of order {index}",
            out.len()
        )));
    }
    Ok(out)
}

fn extend_character(
    group: &FiniteGroup,
    inner: &Subgroup,
    gens: &[usize],
    steps: &[usize],
    conductor: usize,
) -> Option<Vec<usize>> {
    let mut a = vec![usize::MAX; group.order()];
    let mut queue = VecDeque::new();
    for &h in &inner.elements {
        a[h] = 0;
        queue.push_back(h);
    }
    while let Some(x) = queue.pop_front() {
        for (&g, &s) in gens.iter().zip(steps) {
            let y = group.mul(x, g);
            let v = (a[x] + s) % conductor;
            if a[y] == usize::MAX {
                a[y] = v;
                queue.push_back(y);
            } else if a[y] != v {
                return None;
            }
        }
    }
    Some(a)
}

/// Number of distinct irreducible constituents and ⟨f, f⟩ for a character of `k`.
pub fn constituent_summary(
    group: &FiniteGroup,
    k: &Subgroup,
    f: &[Cyclotomic],
    conductor: usize,
) -> Result<(usize, u64)> {
    let t = trace_form(group, k, f, conductor)?;
    Ok((t.rank, inner_int(k, f, f, conductor)?))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(conductor: usize, n: i64) -> Cyclotomic {
        Cyclotomic::from_int(conductor, n)
    }

    #[test]
    fn dihedral_two_dim() {
        let g = FiniteGroup::from_permutations(4, &[vec![1, 2, 3, 0], vec![0, 3, 2, 1]]).unwrap();
        let r = g.find_permutation(&[1, 2, 3, 0]).unwrap();
        let s = g.find_permutation(&[0, 3, 2, 1]).unwrap();
        let mr = vec![vec![c(4, 0), c(4, -1)], vec![c(4, 1), c(4, 0)]];
        let ms = vec![vec![c(4, 1), c(4, 0)], vec![c(4, 0), c(4, -1)]];
        let rep = Representation::from_generators(&g, &[r, s], &[mr.clone(), ms], 4).unwrap();
        assert_eq!(rep.support.order(), 8);
        let whole = g.whole();
        assert_eq!(constituent_summary(&g, &whole, &rep.character, 4).unwrap(), (1, 1));
        let c4 = g.generated(&[r]);
        // Res to C4 is i ⊕ -i.
        assert_eq!(constituent_summary(&g, &c4, &rep.character, 4).unwrap(), (2, 2));
        // Regular character: 5 distinct constituents, norm 8.
        let reg = induce(&g, &g.trivial(), &vec![c(4, 1); 8], 4);
        assert_eq!(constituent_summary(&g, &whole, &reg, 4).unwrap(), (5, 8));
        let bad = vec![vec![c(4, 1), c(4, 1)], vec![c(4, 0), c(4, 1)]];
        assert!(Representation::from_generators(&g, &[r, s], &[mr, bad], 4).is_err());
    }

    #[test]
    fn klein_quotient_characters() {
        let g = FiniteGroup::from_permutations(4, &[vec![1, 2, 3, 0], vec![0, 3, 2, 1]]).unwrap();
        let r = g.find_permutation(&[1, 2, 3, 0]).unwrap();
        let z = g.generated(&[g.mul(r, r)]);
        let chars = quotient_characters(&g, &g.whole(), &z, 4).unwrap();
        assert_eq!(chars.len(), 4);
        assert!(quotient_characters(&g, &g.whole(), &g.trivial(), 4).is_err());
    }
}
