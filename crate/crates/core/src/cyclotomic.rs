//! Exact arithmetic in the cyclotomic field Q(ζ_m).
//!
//! Elements are kept reduced modulo the m-th cyclotomic polynomial, so
//! structural equality is field equality.

use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::{Arc, Mutex, OnceLock};

use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::poly::QPoly;

fn cyclotomic_modulus(m: usize) -> Arc<QPoly> {
    static CACHE: OnceLock<Mutex<HashMap<usize, Arc<QPoly>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    let mut guard = cache.lock().unwrap();
    guard.entry(m).or_insert_with(|| Arc::new(QPoly::cyclotomic(m))).clone()
}

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Cyclotomic {
    conductor: usize,
    value: QPoly,
}

impl Cyclotomic {
    fn reduced(conductor: usize, p: QPoly) -> Self {
        let modulus = cyclotomic_modulus(conductor);
        let value = if p.degree().unwrap_or(0) >= modulus.degree().unwrap() { p.div_rem(&modulus).1 } else { p };
        Cyclotomic { conductor, value }
    }

    pub fn zero(conductor: usize) -> Self {
        Cyclotomic { conductor, value: QPoly::zero() }
    }

    pub fn one(conductor: usize) -> Self {
        Self::from_int(conductor, 1)
    }

    pub fn from_int(conductor: usize, n: i64) -> Self {
        Self::from_rational(conductor, BigRational::from_integer(n.into()))
    }

    pub fn from_rational(conductor: usize, c: BigRational) -> Self {
        Cyclotomic { conductor, value: QPoly::constant(c) }
    }

    /// ζ_m^k for any integer k.
    pub fn zeta_pow(conductor: usize, k: i64) -> Self {
        let e = k.rem_euclid(conductor as i64) as usize;
        Self::reduced(conductor, QPoly::monomial(BigRational::one(), e))
    }

    pub fn conductor(&self) -> usize {
        self.conductor
    }

    pub fn is_zero(&self) -> bool {
        self.value.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.value == QPoly::one()
    }

    /// Rational value when the element lies in Q.
    pub fn as_rational(&self) -> Option<BigRational> {
        match self.value.degree() {
            None => Some(BigRational::zero()),
            Some(0) => Some(self.value.coeff(0)),
            _ => None,
        }
    }

    /// Complex conjugation ζ ↦ ζ^{-1}.
    pub fn conj(&self) -> Self {
        let m = self.conductor;
        let mut acc = QPoly::zero();
        for (k, c) in self.value.coeffs().iter().enumerate() {
            if !c.is_zero() {
                acc = &acc + &QPoly::monomial(c.clone(), (m - k % m) % m);
            }
        }
        Self::reduced(m, acc)
    }

    pub fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        let modulus = cyclotomic_modulus(self.conductor);
        let (g, s, _) = QPoly::xgcd(&self.value, &modulus);
        debug_assert_eq!(g, QPoly::one());
        Some(Self::reduced(self.conductor, s))
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        Cyclotomic { conductor: self.conductor, value: self.value.scale(c) }
    }

    /// Re-express in Q(ζ_n) for a multiple `n` of the conductor.
    pub fn lift(&self, n: usize) -> Self {
        assert_eq!(n % self.conductor, 0, "conductor {} does not divide {n}", self.conductor);
        let step = n / self.conductor;
        let mut acc = QPoly::zero();
        for (k, c) in self.value.coeffs().iter().enumerate() {
            if !c.is_zero() {
                acc = &acc + &QPoly::monomial(c.clone(), k * step);
            }
        }
        Self::reduced(n, acc)
    }

    /// Coefficients in the power basis 1, ζ, ζ², ... (length φ(m) or shorter).
    pub fn coefficients(&self) -> &[BigRational] {
        self.value.coeffs()
    }

    pub fn from_coefficients(conductor: usize, coeffs: Vec<BigRational>) -> Self {
        Self::reduced(conductor, QPoly::new(coeffs))
    }
}

impl<'a> Add<&'a Cyclotomic> for &'a Cyclotomic {
    type Output = Cyclotomic;
    fn add(self, o: &Cyclotomic) -> Cyclotomic {
        debug_assert_eq!(self.conductor, o.conductor);
        Cyclotomic { conductor: self.conductor, value: &self.value + &o.value }
    }
}

impl<'a> Sub<&'a Cyclotomic> for &'a Cyclotomic {
    type Output = Cyclotomic;
    fn sub(self, o: &Cyclotomic) -> Cyclotomic {
        debug_assert_eq!(self.conductor, o.conductor);
        Cyclotomic { conductor: self.conductor, value: &self.value - &o.value }
    }
}

impl<'a> Mul<&'a Cyclotomic> for &'a Cyclotomic {
    type Output = Cyclotomic;
    fn mul(self, o: &Cyclotomic) -> Cyclotomic {
        debug_assert_eq!(self.conductor, o.conductor);
        if self.is_zero() || o.is_zero() {
            return Cyclotomic::zero(self.conductor);
        }
        Cyclotomic::reduced(self.conductor, &self.value * &o.value)
    }
}

impl Add for Cyclotomic {
    type Output = Cyclotomic;
    fn add(self, o: Cyclotomic) -> Cyclotomic {
        &self + &o
    }
}

impl Sub for Cyclotomic {
    type Output = Cyclotomic;
    fn sub(self, o: Cyclotomic) -> Cyclotomic {
        &self - &o
    }
}

impl Mul for Cyclotomic {
    type Output = Cyclotomic;
    fn mul(self, o: Cyclotomic) -> Cyclotomic {
        &self * &o
    }
}

impl Neg for Cyclotomic {
    type Output = Cyclotomic;
    fn neg(self) -> Cyclotomic {
        Cyclotomic { conductor: self.conductor, value: -self.value }
    }
}

impl fmt::Display for Cyclotomic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        crate::poly::fmt_terms(f, self.value.coeffs(), 0, &format!("z{}", self.conductor))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn roots_of_unity() {
        let i = Cyclotomic::zeta_pow(4, 1);
        assert_eq!(&i * &i, Cyclotomic::from_int(4, -1));
        let w = Cyclotomic::zeta_pow(3, 1);
        let sum = &(&Cyclotomic::one(3) + &w) + &(&w * &w);
        assert!(sum.is_zero());
        assert_eq!(w.conj(), &w * &w);
    }

    #[test]
    fn inverse_and_lift() {
        let x = &Cyclotomic::from_int(12, 2) + &Cyclotomic::zeta_pow(12, 5);
        let y = x.inv().unwrap();
        assert!((&x * &y).is_one());
        let w3 = Cyclotomic::zeta_pow(3, 1).lift(12);
        assert_eq!(w3, Cyclotomic::zeta_pow(12, 4));
    }
}
