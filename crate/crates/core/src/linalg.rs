//! Exact rank computations.
//!
//! `rank_over_field` runs plain Gaussian elimination for any exact field;
//! `rank_fraction_free` runs Bareiss elimination over Q[v, 1/v], which
//! yields the rank over the fraction field Q(v) without ever forming
//! fractions.

use num_rational::BigRational;
use num_traits::Zero;

use crate::cyclotomic::Cyclotomic;
use crate::laurent::LaurentPoly;

/// Minimal exact-field interface used by elimination.
pub trait ExactField: Clone {
    fn is_zero(&self) -> bool;
    fn mul(&self, o: &Self) -> Self;
    fn sub(&self, o: &Self) -> Self;
    fn inv(&self) -> Self;
}

impl ExactField for BigRational {
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn inv(&self) -> Self {
        self.recip()
    }
}

impl ExactField for Cyclotomic {
    fn is_zero(&self) -> bool {
        Cyclotomic::is_zero(self)
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn inv(&self) -> Self {
        Cyclotomic::inv(self).expect("inverse of zero")
    }
}

/// Rank of a matrix given as rows over an exact field.
pub fn rank_over_field<F: ExactField>(mut rows: Vec<Vec<F>>) -> usize {
    let ncols = rows.first().map_or(0, |r| r.len());
    let mut rank = 0;
    for col in 0..ncols {
        let Some(p) = (rank..rows.len()).find(|&i| !rows[i][col].is_zero()) else {
            continue;
        };
        rows.swap(rank, p);
        let pivot_inv = rows[rank][col].inv();
        let pivot_row = rows[rank].clone();
        for row in rows.iter_mut().skip(rank + 1) {
            if row[col].is_zero() {
                continue;
            }
            let factor = row[col].mul(&pivot_inv);
            for j in col..ncols {
                if !pivot_row[j].is_zero() {
                    row[j] = row[j].sub(&factor.mul(&pivot_row[j]));
                }
            }
        }
        rank += 1;
        if rank == rows.len() {
            break;
        }
    }
    rank
}

/// Rank over Q(v) of a matrix with entries in Q[v, 1/v], by Bareiss
/// fraction-free elimination. Every division is exact; a failed division
/// means the arithmetic is broken and aborts.
pub fn rank_fraction_free(mut rows: Vec<Vec<LaurentPoly>>) -> usize {
    let ncols = rows.first().map_or(0, |r| r.len());
    let mut prev = LaurentPoly::from_int(1);
    let mut rank = 0;
    for col in 0..ncols {
        if rank == rows.len() {
            break;
        }
        let Some(p) = (rank..rows.len()).find(|&i| !rows[i][col].is_zero()) else {
            continue;
        };
        rows.swap(rank, p);
        let (head, tail) = rows.split_at_mut(rank + 1);
        let pivot_row = &head[rank];
        let pivot = pivot_row[col].clone();
        for row in tail.iter_mut() {
            let lead = row[col].clone();
            for j in col + 1..ncols {
                let num = &(&pivot * &row[j]) - &(&lead * &pivot_row[j]);
                row[j] = num.div_exact(&prev).expect("fraction-free elimination produced an inexact division");
            }
            row[col] = LaurentPoly::zero();
        }
        prev = pivot;
        rank += 1;
    }
    rank
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64) -> BigRational {
        BigRational::from_integer(n.into())
    }

    #[test]
    fn rational_rank() {
        let m = vec![vec![q(1), q(2), q(3)], vec![q(2), q(4), q(6)], vec![q(0), q(1), q(1)]];
        assert_eq!(rank_over_field(m), 2);
        assert_eq!(rank_over_field::<BigRational>(vec![]), 0);
    }

    #[test]
    fn laurent_rank_agrees_with_specialisation() {
        let v = |t: &[(i64, i64)]| LaurentPoly::from_terms(t);
        // rows (1, v), (v, v^2) are dependent; (1, v^-1) is not a multiple.
        let m =
            vec![vec![v(&[(1, 0)]), v(&[(1, 1)])], vec![v(&[(1, 1)]), v(&[(1, 2)])], vec![v(&[(1, 0)]), v(&[(1, -1)])]];
        assert_eq!(rank_fraction_free(m), 2);
    }
}
