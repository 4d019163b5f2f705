//! Finite groups stored as dense multiplication tables, with subgroups
//! represented by membership masks.

use std::collections::{HashMap, VecDeque};

use num_integer::Integer;

use crate::{HeckeError, Result};

/// Largest group order the lab accepts.
pub const GROUP_CAP: usize = 512;

#[derive(Clone, Debug)]
pub struct FiniteGroup {
    order: usize,
    table: Vec<u32>,
    inverse: Vec<usize>,
    /// Permutation images when the group was built from permutations.
    perms: Option<Vec<Vec<usize>>>,
}

impl FiniteGroup {
    /// Closes the permutations under composition, `(g·h)(x) = g(h(x))`.
    pub fn from_permutations(degree: usize, generators: &[Vec<usize>]) -> Result<Self> {
        for g in generators {
            let mut seen = vec![false; degree];
            if g.len() != degree || g.iter().any(|&x| x >= degree || std::mem::replace(&mut seen[x], true)) {
                return Err(HeckeError::InvalidModel(format!("{g:?} is not a permutation of {degree} points")));
            }
        }
        let identity: Vec<usize> = (0..degree).collect();
        let mut elems = vec![identity.clone()];
        let mut index: HashMap<Vec<usize>, usize> = HashMap::from([(identity, 0)]);
        let mut queue = VecDeque::from([0usize]);
        while let Some(i) = queue.pop_front() {
            for g in generators {
                let p: Vec<usize> = elems[i].iter().map(|&x| g[x]).collect();
                if !index.contains_key(&p) {
                    if elems.len() == GROUP_CAP {
                        return Err(HeckeError::InvalidModel(format!("group order exceeds the cap {GROUP_CAP}")));
                    }
                    index.insert(p.clone(), elems.len());
                    queue.push_back(elems.len());
                    elems.push(p);
                }
            }
        }
        let n = elems.len();
        let mut table = vec![0u32; n * n];
        for a in 0..n {
            for b in 0..n {
                let p: Vec<usize> = elems[b].iter().map(|&x| elems[a][x]).collect();
                table[a * n + b] = index[&p] as u32;
            }
        }
        let mut g = Self::from_raw(n, table)?;
        g.perms = Some(elems);
        Ok(g)
    }

    /// Validates a Cayley table: identity, Latin square, associativity.
    pub fn from_table(rows: &[Vec<usize>]) -> Result<Self> {
        let n = rows.len();
        if n == 0 || n > GROUP_CAP {
            return Err(HeckeError::InvalidModel(format!("table order {n} outside 1..={GROUP_CAP}")));
        }
        let mut table = Vec::with_capacity(n * n);
        for row in rows {
            if row.len() != n || row.iter().any(|&x| x >= n) {
                return Err(HeckeError::InvalidModel("table is not square with entries below the order".into()));
            }
            table.extend(row.iter().map(|&x| x as u32));
        }
        if (0..n).any(|a| table[a] as usize != a || table[a * n] as usize != a) {
            return Err(HeckeError::InvalidModel("element 0 must be the identity".into()));
        }
        for a in 0..n {
            let mut row_seen = vec![false; n];
            let mut col_seen = vec![false; n];
            for b in 0..n {
                row_seen[table[a * n + b] as usize] = true;
                col_seen[table[b * n + a] as usize] = true;
            }
            if row_seen.contains(&false) || col_seen.contains(&false) {
                return Err(HeckeError::InvalidModel("table is not a Latin square".into()));
            }
        }
        Self::from_raw(n, table)
    }

    fn from_raw(n: usize, table: Vec<u32>) -> Result<Self> {
        let mut inverse = vec![0; n];
        for a in 0..n {
            inverse[a] = (0..n).find(|&b| table[a * n + b] == 0).expect("Latin square has inverses");
        }
        let g = FiniteGroup { order: n, table, inverse, perms: None };
        g.check_associativity()?;
        Ok(g)
    }

    /// Exhaustive below 64 elements, otherwise a deterministic stride over triples.
    fn check_associativity(&self) -> Result<()> {
        let n = self.order;
        let sample: Vec<usize> = if n <= 64 { (0..n).collect() } else { (0..n).step_by(n / 40 + 1).collect() };
        for &a in &sample {
            for &b in &sample {
                for &c in &sample {
                    if self.mul(self.mul(a, b), c) != self.mul(a, self.mul(b, c)) {
                        return Err(HeckeError::InvalidModel(format!("associativity fails at ({a}, {b}, {c})")));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn order(&self) -> usize {
        self.order
    }

    #[inline]
    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a * self.order + b] as usize
    }

    #[inline]
    pub fn inv(&self, a: usize) -> usize {
        self.inverse[a]
    }

    /// g x g⁻¹.
    #[inline]
    pub fn conj(&self, g: usize, x: usize) -> usize {
        self.mul(self.mul(g, x), self.inverse[g])
    }

    pub fn element_order(&self, x: usize) -> usize {
        let mut k = 1;
        let mut y = x;
        while y != 0 {
            y = self.mul(y, x);
            k += 1;
        }
        k
    }

    pub fn exponent(&self) -> usize {
        (0..self.order).fold(1, |acc, x| acc.lcm(&self.element_order(x)))
    }

    pub fn find_permutation(&self, p: &[usize]) -> Option<usize> {
        self.perms.as_ref()?.iter().position(|q| q == p)
    }

    pub fn permutation(&self, x: usize) -> Option<&[usize]> {
        self.perms.as_ref().map(|ps| ps[x].as_slice())
    }

    pub fn whole(&self) -> Subgroup {
        Subgroup::from_mask(vec![true; self.order])
    }

    pub fn trivial(&self) -> Subgroup {
        self.generated(&[])
    }

    /// Subgroup generated by the given elements.
    pub fn generated(&self, gens: &[usize]) -> Subgroup {
        let mut mask = vec![false; self.order];
        mask[0] = true;
        let mut queue = VecDeque::from([0usize]);
        while let Some(x) = queue.pop_front() {
            for &g in gens {
                let y = self.mul(x, g);
                if !mask[y] {
                    mask[y] = true;
                    queue.push_back(y);
                }
            }
        }
        Subgroup::from_mask(mask)
    }

    pub fn join(&self, a: &Subgroup, b: &Subgroup) -> Subgroup {
        let gens: Vec<usize> = a.elements.iter().chain(&b.elements).copied().collect();
        self.generated(&gens)
    }

    /// `inner` is normalized by every element of `outer`.
    pub fn is_normal_in(&self, inner: &Subgroup, outer: &Subgroup) -> bool {
        inner.is_subgroup_of(outer)
            && outer.elements.iter().all(|&g| inner.elements.iter().all(|&x| inner.contains(self.conj(g, x))))
    }

    /// `outer / inner` is abelian (all commutators of `outer` lie in `inner`).
    pub fn quotient_is_abelian(&self, outer: &Subgroup, inner: &Subgroup) -> bool {
        outer.elements.iter().all(|&a| {
            outer.elements.iter().all(|&b| {
                let c = self.mul(self.mul(a, b), self.mul(self.inv(a), self.inv(b)));
                inner.contains(c)
            })
        })
    }

    /// g⁻¹ K g.
    pub fn conjugate_subgroup(&self, k: &Subgroup, g: usize) -> Subgroup {
        let gi = self.inv(g);
        let mut mask = vec![false; self.order];
        for &x in &k.elements {
            mask[self.conj(gi, x)] = true;
        }
        Subgroup::from_mask(mask)
    }

    /// Conjugacy classes of `k` under its own action: class id per element
    /// (usize::MAX outside `k`) and the number of classes.
    pub fn classes(&self, k: &Subgroup) -> (Vec<usize>, usize) {
        self.classes_under(k, k)
    }

    /// Orbits of `acting` on `k` by conjugation.
    pub fn classes_under(&self, k: &Subgroup, acting: &Subgroup) -> (Vec<usize>, usize) {
        let mut id = vec![usize::MAX; self.order];
        let mut count = 0;
        for &x in &k.elements {
            if id[x] != usize::MAX {
                continue;
            }
            for &g in &acting.elements {
                id[self.conj(g, x)] = count;
            }
            count += 1;
        }
        (id, count)
    }

    /// Representatives of the double cosets `a g b`, smallest element first.
    pub fn double_coset_reps(&self, a: &Subgroup, b: &Subgroup) -> Vec<(usize, usize)> {
        let mut seen = vec![false; self.order];
        let mut reps = Vec::new();
        for g in 0..self.order {
            if seen[g] {
                continue;
            }
            let mut size = 0;
            for &x in &a.elements {
                let xg = self.mul(x, g);
                for &y in &b.elements {
                    let z = self.mul(xg, y);
                    if !seen[z] {
                        seen[z] = true;
                        size += 1;
                    }
                }
            }
            reps.push((g, size));
        }
        reps
    }

    /// Left coset representatives of `inner` in `outer`, smallest first.
    pub fn coset_reps(&self, outer: &Subgroup, inner: &Subgroup) -> Vec<usize> {
        let mut seen = vec![false; self.order];
        let mut reps = Vec::new();
        for &g in &outer.elements {
            if seen[g] {
                continue;
            }
            for &h in &inner.elements {
                seen[self.mul(g, h)] = true;
            }
            reps.push(g);
        }
        reps
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Subgroup {
    /// Sorted element indices.
    pub elements: Vec<usize>,
    mask: Vec<bool>,
}

impl Subgroup {
    pub fn from_mask(mask: Vec<bool>) -> Self {
        let elements = mask.iter().enumerate().filter(|(_, &b)| b).map(|(i, _)| i).collect();
        Subgroup { elements, mask }
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    #[inline]
    pub fn contains(&self, x: usize) -> bool {
        self.mask[x]
    }

    pub fn is_subgroup_of(&self, other: &Subgroup) -> bool {
        self.elements.iter().all(|&x| other.contains(x))
    }

    pub fn intersect(&self, other: &Subgroup) -> Subgroup {
        Subgroup::from_mask(self.mask.iter().zip(&other.mask).map(|(a, b)| *a && *b).collect())
    }

    /// [self : sub], assuming containment.
    pub fn index_of(&self, sub: &Subgroup) -> usize {
        self.order() / sub.order()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn d8() -> FiniteGroup {
        FiniteGroup::from_permutations(4, &[vec![1, 2, 3, 0], vec![0, 3, 2, 1]]).unwrap()
    }

    #[test]
    fn dihedral_structure() {
        let g = d8();
        assert_eq!(g.order(), 8);
        assert_eq!(g.exponent(), 4);
        let r = g.find_permutation(&[1, 2, 3, 0]).unwrap();
        let c4 = g.generated(&[r]);
        assert_eq!(c4.order(), 4);
        assert!(g.is_normal_in(&c4, &g.whole()));
        assert!(g.quotient_is_abelian(&g.whole(), &c4));
        assert!(!g.quotient_is_abelian(&g.whole(), &g.trivial()));
        assert_eq!(g.classes(&g.whole()).1, 5);
        assert_eq!(g.coset_reps(&g.whole(), &c4).len(), 2);
        let s = g.find_permutation(&[0, 3, 2, 1]).unwrap();
        let ref_sub = g.generated(&[s]);
        assert!(!g.is_normal_in(&ref_sub, &g.whole()));
        // ⟨s⟩\D8/⟨s⟩ has sizes 2, 2, 4.
        let mut sizes: Vec<usize> = g.double_coset_reps(&ref_sub, &ref_sub).iter().map(|r| r.1).collect();
        sizes.sort();
        assert_eq!(sizes, vec![2, 2, 4]);
    }

    #[test]
    fn table_validation() {
        let z3 = vec![vec![0, 1, 2], vec![1, 2, 0], vec![2, 0, 1]];
        assert_eq!(FiniteGroup::from_table(&z3).unwrap().order(), 3);
        let bad = vec![vec![0, 1, 2], vec![1, 1, 0], vec![2, 0, 1]];
        assert!(FiniteGroup::from_table(&bad).is_err());
        assert!(FiniteGroup::from_permutations(3, &[vec![0, 0, 1]]).is_err());
    }
}
