//! Laurent polynomials in a formal square root `v` of `q`.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::poly::QPoly;

/// `v^low * body(v)` with `body(0) != 0`, or the zero element.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct LaurentPoly {
    low: i64,
    body: QPoly,
}

impl LaurentPoly {
    fn normalized(low: i64, body: QPoly) -> Self {
        match body.low_degree() {
            None => LaurentPoly { low: 0, body },
            Some(0) => LaurentPoly { low, body },
            Some(k) => {
                let shifted = QPoly::new(body.coeffs()[k..].to_vec());
                LaurentPoly { low: low + k as i64, body: shifted }
            }
        }
    }

    pub fn constant(c: BigRational) -> Self {
        Self::normalized(0, QPoly::constant(c))
    }

    pub fn from_int(n: i64) -> Self {
        Self::constant(BigRational::from_integer(n.into()))
    }

    /// `c * v^k`
    pub fn term(c: BigRational, k: i64) -> Self {
        Self::normalized(k, QPoly::constant(c))
    }

    /// `v^k`
    pub fn v_pow(k: i64) -> Self {
        Self::term(BigRational::one(), k)
    }

    /// `q = v^2`
    pub fn q() -> Self {
        Self::v_pow(2)
    }

    pub fn from_terms(terms: &[(i64, i64)]) -> Self {
        terms.iter().fold(Self::zero(), |acc, &(c, k)| &acc + &Self::term(BigRational::from_integer(c.into()), k))
    }

    pub fn is_zero(&self) -> bool {
        self.body.is_zero()
    }

    /// Coefficient of `v^k`.
    pub fn coeff(&self, k: i64) -> BigRational {
        if k < self.low {
            BigRational::zero()
        } else {
            self.body.coeff((k - self.low) as usize)
        }
    }

    /// `(exponent, coefficient)` pairs with nonzero coefficients.
    pub fn terms(&self) -> Vec<(i64, BigRational)> {
        self.body
            .coeffs()
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(k, c)| (self.low + k as i64, c.clone()))
            .collect()
    }

    pub fn eval(&self, v: &BigRational) -> BigRational {
        let base = self.body.eval(v);
        let vp = if self.low >= 0 {
            num_traits::pow(v.clone(), self.low as usize)
        } else {
            num_traits::pow(v.recip(), (-self.low) as usize)
        };
        base * vp
    }

    /// Exact quotient in Q[v, 1/v]; `None` when `d` does not divide `self`.
    pub fn div_exact(&self, d: &LaurentPoly) -> Option<LaurentPoly> {
        assert!(!d.is_zero(), "division by zero Laurent polynomial");
        if self.is_zero() {
            return Some(Self::zero());
        }
        let (q, r) = self.body.div_rem(&d.body);
        r.is_zero().then(|| Self::normalized(self.low - d.low, q))
    }
}

impl Zero for LaurentPoly {
    fn zero() -> Self {
        LaurentPoly { low: 0, body: QPoly::zero() }
    }
    fn is_zero(&self) -> bool {
        self.body.is_zero()
    }
}

impl One for LaurentPoly {
    fn one() -> Self {
        Self::from_int(1)
    }
}

fn align(a: &LaurentPoly, b: &LaurentPoly) -> (i64, QPoly, QPoly) {
    if a.is_zero() {
        return (b.low, QPoly::zero(), b.body.clone());
    }
    if b.is_zero() {
        return (a.low, a.body.clone(), QPoly::zero());
    }
    let low = a.low.min(b.low);
    (low, a.body.shift((a.low - low) as usize), b.body.shift((b.low - low) as usize))
}

impl<'a> Add<&'a LaurentPoly> for &'a LaurentPoly {
    type Output = LaurentPoly;
    fn add(self, o: &LaurentPoly) -> LaurentPoly {
        let (low, a, b) = align(self, o);
        LaurentPoly::normalized(low, &a + &b)
    }
}

impl<'a> Sub<&'a LaurentPoly> for &'a LaurentPoly {
    type Output = LaurentPoly;
    fn sub(self, o: &LaurentPoly) -> LaurentPoly {
        let (low, a, b) = align(self, o);
        LaurentPoly::normalized(low, &a - &b)
    }
}

impl<'a> Mul<&'a LaurentPoly> for &'a LaurentPoly {
    type Output = LaurentPoly;
    fn mul(self, o: &LaurentPoly) -> LaurentPoly {
        LaurentPoly::normalized(self.low + o.low, &self.body * &o.body)
    }
}

impl Add for LaurentPoly {
    type Output = LaurentPoly;
    fn add(self, o: LaurentPoly) -> LaurentPoly {
        &self + &o
    }
}

impl Sub for LaurentPoly {
    type Output = LaurentPoly;
    fn sub(self, o: LaurentPoly) -> LaurentPoly {
        &self - &o
    }
}

impl Mul for LaurentPoly {
    type Output = LaurentPoly;
    fn mul(self, o: LaurentPoly) -> LaurentPoly {
        &self * &o
    }
}

impl Neg for LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        LaurentPoly { low: self.low, body: -self.body }
    }
}

impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        crate::poly::fmt_terms(f, self.body.coeffs(), self.low, "v")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ring_operations() {
        let q = LaurentPoly::q();
        let qm1 = &q - &LaurentPoly::one();
        assert_eq!(qm1, LaurentPoly::from_terms(&[(1, 2), (-1, 0)]));
        let inv = LaurentPoly::v_pow(-3);
        assert_eq!(&inv * &LaurentPoly::v_pow(3), LaurentPoly::one());
        assert_eq!(format!("{qm1}"), "-1 + v^2");
    }

    #[test]
    fn exact_division() {
        let a = LaurentPoly::from_terms(&[(1, 4), (-1, 0)]); // v^4 - 1
        let b = LaurentPoly::from_terms(&[(1, 2), (1, 0)]);
        let c = a.div_exact(&b).unwrap();
        assert_eq!(c, LaurentPoly::from_terms(&[(1, 2), (-1, 0)]));
        assert!(b.div_exact(&LaurentPoly::from_terms(&[(1, 1), (1, 0)])).is_none());
        let shifted = &a * &LaurentPoly::v_pow(-5);
        assert_eq!(shifted.div_exact(&b).unwrap(), &c * &LaurentPoly::v_pow(-5));
    }
}
