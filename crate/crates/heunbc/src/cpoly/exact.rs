//! Exact polynomials over the field Q(√2).

use crate::error::{Error, Result};
use num_bigint::BigInt;
use num_complex::Complex64 as C64;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::ops::{Add, Mul, Neg, Sub};

/// `a + b√2` with rational `a`, `b`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QSqrt2 {
    pub a: BigRational,
    pub b: BigRational,
}

impl QSqrt2 {
    pub fn new(a: BigRational, b: BigRational) -> Self {
        QSqrt2 { a, b }
    }

    pub fn rational(a: BigRational) -> Self {
        QSqrt2 { a, b: BigRational::zero() }
    }

    pub fn int(n: i64) -> Self {
        Self::rational(BigRational::from_integer(BigInt::from(n)))
    }

    /// `p/q` as a rational element.
    pub fn frac(p: i64, q: i64) -> Self {
        Self::rational(BigRational::new(BigInt::from(p), BigInt::from(q)))
    }

    pub fn sqrt2() -> Self {
        QSqrt2 { a: BigRational::zero(), b: BigRational::one() }
    }

    pub fn zero() -> Self {
        Self::int(0)
    }

    pub fn one() -> Self {
        Self::int(1)
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    /// Multiplicative inverse via the conjugate `a - b√2`.
    pub fn inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let two = BigRational::from_integer(BigInt::from(2));
        let norm = &self.a * &self.a - two * &self.b * &self.b;
        Ok(QSqrt2 { a: &self.a / &norm, b: -(&self.b / &norm) })
    }

    pub fn to_f64(&self) -> f64 {
        self.a.to_f64().unwrap_or(f64::NAN) + self.b.to_f64().unwrap_or(f64::NAN) * 2f64.sqrt()
    }

    pub fn abs_bound(&self) -> f64 {
        self.a.abs().to_f64().unwrap_or(f64::INFINITY)
            + self.b.abs().to_f64().unwrap_or(f64::INFINITY) * 2f64.sqrt()
    }
}

impl Add for &QSqrt2 {
    type Output = QSqrt2;
    fn add(self, o: &QSqrt2) -> QSqrt2 {
        QSqrt2 { a: &self.a + &o.a, b: &self.b + &o.b }
    }
}

impl Sub for &QSqrt2 {
    type Output = QSqrt2;
    fn sub(self, o: &QSqrt2) -> QSqrt2 {
        QSqrt2 { a: &self.a - &o.a, b: &self.b - &o.b }
    }
}

impl Mul for &QSqrt2 {
    type Output = QSqrt2;
    fn mul(self, o: &QSqrt2) -> QSqrt2 {
        let two = BigRational::from_integer(BigInt::from(2));
        QSqrt2 {
            a: &self.a * &o.a + two * &self.b * &o.b,
            b: &self.a * &o.b + &self.b * &o.a,
        }
    }
}

impl Neg for &QSqrt2 {
    type Output = QSqrt2;
    fn neg(self) -> QSqrt2 {
        QSqrt2 { a: -&self.a, b: -&self.b }
    }
}

/// Ascending-coefficient polynomial over Q(√2).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QPoly {
    coeffs: Vec<QSqrt2>,
}

impl QPoly {
    pub fn new(mut coeffs: Vec<QSqrt2>) -> Self {
        while coeffs.len() > 1 && coeffs.last().unwrap().is_zero() {
            coeffs.pop();
        }
        if coeffs.is_empty() {
            coeffs.push(QSqrt2::zero());
        }
        QPoly { coeffs }
    }

    pub fn constant(c: QSqrt2) -> Self {
        Self::new(vec![c])
    }

    pub fn coeffs(&self) -> &[QSqrt2] {
        &self.coeffs
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0].is_zero()
    }

    pub fn add(&self, o: &Self) -> Self {
        let n = self.coeffs.len().max(o.coeffs.len());
        let z = QSqrt2::zero();
        Self::new(
            (0..n)
                .map(|k| self.coeffs.get(k).unwrap_or(&z) + o.coeffs.get(k).unwrap_or(&z))
                .collect(),
        )
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.scale(&QSqrt2::int(-1)))
    }

    pub fn scale(&self, s: &QSqrt2) -> Self {
        Self::new(self.coeffs.iter().map(|c| c * s).collect())
    }

    pub fn mul(&self, o: &Self) -> Self {
        let mut out = vec![QSqrt2::zero(); self.coeffs.len() + o.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in o.coeffs.iter().enumerate() {
                out[i + j] = &out[i + j] + &(a * b);
            }
        }
        Self::new(out)
    }

    pub fn eval(&self, x: &QSqrt2) -> QSqrt2 {
        self.coeffs.iter().rev().fold(QSqrt2::zero(), |acc, c| &(&acc * x) + c)
    }

    /// Exact long division.
    pub fn divide(&self, q: &Self) -> Result<(Self, Self)> {
        if q.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let dq = q.degree();
        if self.degree() < dq {
            return Ok((Self::constant(QSqrt2::zero()), self.clone()));
        }
        let inv_lead = q.coeffs[dq].inv()?;
        let mut rem = self.coeffs.clone();
        let mut quot = vec![QSqrt2::zero(); self.degree() - dq + 1];
        for k in (0..quot.len()).rev() {
            let t = &rem[k + dq] * &inv_lead;
            for (j, qc) in q.coeffs.iter().enumerate() {
                rem[k + j] = &rem[k + j] - &(&t * qc);
            }
            quot[k] = t;
        }
        rem.truncate(dq.max(1));
        Ok((Self::new(quot), Self::new(rem)))
    }

    pub fn to_cpoly(&self) -> super::CPoly {
        super::CPoly::new(self.coeffs.iter().map(|c| C64::new(c.to_f64(), 0.0)).collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sqrt2_squares_to_two() {
        let r = &QSqrt2::sqrt2() * &QSqrt2::sqrt2();
        assert_eq!(r, QSqrt2::int(2));
    }

    #[test]
    fn inverse_roundtrip() {
        let x = QSqrt2::new(
            BigRational::new(3.into(), 7.into()),
            BigRational::new((-5).into(), 2.into()),
        );
        assert_eq!(&x * &x.inv().unwrap(), QSqrt2::one());
    }

    #[test]
    fn exact_division_by_factor() {
        let a = QPoly::new(vec![QSqrt2::sqrt2(), QSqrt2::one()]);
        let b = QPoly::new(vec![QSqrt2::frac(1, 3), QSqrt2::int(-2), QSqrt2::one()]);
        let (q, r) = a.mul(&b).divide(&a).unwrap();
        assert_eq!(q, b);
        assert!(r.is_zero());
    }
}
