//! Dense complex polynomials in ascending-coefficient form.

pub mod exact;

use crate::error::{Error, Result};
use num_complex::Complex64 as C64;
use std::fmt;

const TRIM_REL: f64 = 1e-13;
const ROOT_TOL: f64 = 1e-14;
const ROOT_MAX_ITER: usize = 500;

/// Polynomial `c[0] + c[1] z + ... + c[d] z^d` with complex coefficients.
#[derive(Clone, PartialEq)]
pub struct CPoly {
    coeffs: Vec<C64>,
}

impl fmt::Debug for CPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.coeffs.iter()).finish()
    }
}

impl CPoly {
    /// Builds a polynomial, dropping exactly-zero leading coefficients.
    pub fn new(coeffs: Vec<C64>) -> Self {
        let mut p = CPoly { coeffs };
        if p.coeffs.is_empty() {
            p.coeffs.push(C64::new(0.0, 0.0));
        }
        while p.coeffs.len() > 1 && *p.coeffs.last().unwrap() == C64::new(0.0, 0.0) {
            p.coeffs.pop();
        }
        p
    }

    pub fn from_real(coeffs: &[f64]) -> Self {
        Self::new(coeffs.iter().map(|&c| C64::new(c, 0.0)).collect())
    }

    pub fn zero() -> Self {
        Self::new(vec![])
    }

    pub fn constant(c: C64) -> Self {
        Self::new(vec![c])
    }

    /// The monomial `z`.
    pub fn x() -> Self {
        Self::new(vec![C64::new(0.0, 0.0), C64::new(1.0, 0.0)])
    }

    /// Monic polynomial with the given roots.
    pub fn from_roots(roots: &[C64]) -> Self {
        let mut p = Self::constant(C64::new(1.0, 0.0));
        for &r in roots {
            p = p.mul(&Self::new(vec![-r, C64::new(1.0, 0.0)]));
        }
        p
    }

    pub fn coeffs(&self) -> &[C64] {
        &self.coeffs
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0] == C64::new(0.0, 0.0)
    }

    pub fn leading(&self) -> C64 {
        *self.coeffs.last().unwrap()
    }

    pub fn max_abs_coeff(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }

    /// Drops leading coefficients below `1e-13 * max|c_k|`.
    pub fn trim_relative(&self) -> Self {
        let tol = TRIM_REL * self.max_abs_coeff();
        let mut c = self.coeffs.clone();
        while c.len() > 1 && c.last().unwrap().norm() < tol {
            c.pop();
        }
        if c.len() == 1 && c[0].norm() < tol {
            c[0] = C64::new(0.0, 0.0);
        }
        Self::new(c)
    }

    /// Horner evaluation.
    pub fn eval(&self, z: C64) -> C64 {
        self.coeffs.iter().rev().fold(C64::new(0.0, 0.0), |acc, &c| acc * z + c)
    }

    /// Value, first and second derivative at `z`.
    pub fn eval_d2(&self, z: C64) -> (C64, C64, C64) {
        let zero = C64::new(0.0, 0.0);
        let (mut p, mut d1, mut d2) = (zero, zero, zero);
        for &c in self.coeffs.iter().rev() {
            d2 = d2 * z + d1 * 2.0;
            d1 = d1 * z + p;
            p = p * z + c;
        }
        (p, d1, d2)
    }

    /// `Σ |c_k| |z|^k`, the magnitude scale used by relative residuals.
    pub fn eval_abs(&self, r: f64) -> f64 {
        self.coeffs.iter().rev().fold(0.0, |acc, c| acc * r + c.norm())
    }

    /// Absolute-coefficient counterparts of `eval_d2`.
    pub fn eval_abs_d2(&self, r: f64) -> (f64, f64, f64) {
        let (mut p, mut d1, mut d2) = (0.0, 0.0, 0.0);
        for c in self.coeffs.iter().rev() {
            d2 = d2 * r + d1 * 2.0;
            d1 = d1 * r + p;
            p = p * r + c.norm();
        }
        (p, d1, d2)
    }

    pub fn derivative(&self) -> Self {
        if self.coeffs.len() == 1 {
            return Self::zero();
        }
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, &c)| c * k as f64)
                .collect(),
        )
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        let zero = C64::new(0.0, 0.0);
        Self::new(
            (0..n)
                .map(|k| {
                    self.coeffs.get(k).copied().unwrap_or(zero)
                        + other.coeffs.get(k).copied().unwrap_or(zero)
                })
                .collect(),
        )
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(C64::new(-1.0, 0.0)))
    }

    pub fn scale(&self, s: C64) -> Self {
        Self::new(self.coeffs.iter().map(|&c| c * s).collect())
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = vec![C64::new(0.0, 0.0); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            for (j, &b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Self::new(out)
    }

    /// `x^n p(1/x)`.
    pub fn reverse(&self, n: usize) -> Result<Self> {
        if n < self.degree() {
            return Err(Error::InvalidReversal { n, degree: self.degree() });
        }
        let mut c = self.coeffs.clone();
        c.resize(n + 1, C64::new(0.0, 0.0));
        c.reverse();
        Ok(Self::new(c))
    }

    /// Long division `p = q * quot + rem` with `deg rem < deg q`.
    pub fn divide_exact(&self, q: &Self) -> Result<(Self, Self)> {
        if q.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let dq = q.degree();
        if self.degree() < dq {
            return Ok((Self::zero(), self.clone()));
        }
        let lead = q.leading();
        let mut rem = self.coeffs.clone();
        let mut quot = vec![C64::new(0.0, 0.0); self.degree() - dq + 1];
        for k in (0..quot.len()).rev() {
            let t = rem[k + dq] / lead;
            quot[k] = t;
            for (j, &qc) in q.coeffs.iter().enumerate() {
                rem[k + j] -= t * qc;
            }
            rem[k + dq] = C64::new(0.0, 0.0);
        }
        rem.truncate(dq.max(1));
        Ok((Self::new(quot), Self::new(rem)))
    }

    /// Cauchy upper bound on root moduli.
    pub fn cauchy_bound(&self) -> f64 {
        let lead = self.leading().norm();
        1.0 + self.coeffs[..self.degree()]
            .iter()
            .map(|c| c.norm() / lead)
            .fold(0.0, f64::max)
    }

    /// All roots with multiplicity by Aberth–Ehrlich iteration.
    pub fn roots(&self) -> Result<Vec<C64>> {
        if self.is_zero() {
            return Err(Error::UndefinedRoots);
        }
        let d = self.degree();
        if d == 0 {
            return Ok(vec![]);
        }
        if d == 1 {
            return Ok(vec![-self.coeffs[0] / self.coeffs[1]]);
        }
        let dp = self.derivative();
        let radius = self.cauchy_bound();
        let mut z: Vec<C64> = (0..d)
            .map(|k| {
                // fixed phase offset keeps the start off any symmetry axis
                let t = 2.0 * std::f64::consts::PI * k as f64 / d as f64 + 0.4;
                C64::from_polar(radius, t)
            })
            .collect();
        let floor_hits_needed = 3;
        let mut floor_hits = 0;
        for _ in 0..ROOT_MAX_ITER {
            let mut max_rel = 0.0f64;
            for i in 0..d {
                let zi = z[i];
                let p = self.eval(zi);
                if p == C64::new(0.0, 0.0) {
                    continue;
                }
                let ratio = p / dp.eval(zi);
                let mut s = C64::new(0.0, 0.0);
                for (j, &zj) in z.iter().enumerate() {
                    if j != i {
                        let diff = zi - zj;
                        if diff != C64::new(0.0, 0.0) {
                            s += 1.0 / diff;
                        }
                    }
                }
                let corr = ratio / (1.0 - ratio * s);
                if corr.is_finite() {
                    z[i] = zi - corr;
                    max_rel = max_rel.max(corr.norm() / (1.0 + z[i].norm()));
                }
            }
            if max_rel < ROOT_TOL {
                return Ok(sort_roots(z));
            }
            if self.at_rounding_floor(&z) {
                floor_hits += 1;
                if floor_hits >= floor_hits_needed {
                    return Ok(sort_roots(z));
                }
            }
        }
        Err(Error::RootConvergence { best: sort_roots(z) })
    }

    fn at_rounding_floor(&self, z: &[C64]) -> bool {
        let d = self.degree() as f64;
        z.iter()
            .all(|&r| self.eval(r).norm() <= 8.0 * d * f64::EPSILON * self.eval_abs(r.norm()))
    }
}

/// Sort by real part, breaking near-ties by imaginary part.
pub fn sort_roots(mut z: Vec<C64>) -> Vec<C64> {
    z.sort_by(|a, b| a.re.total_cmp(&b.re));
    let tie = |a: C64, b: C64| (a.re - b.re).abs() <= 1e-9 * (1.0 + a.re.abs().max(b.re.abs()));
    let mut i = 0;
    while i < z.len() {
        let mut j = i + 1;
        while j < z.len() && tie(z[j - 1], z[j]) {
            j += 1;
        }
        z[i..j].sort_by(|a, b| a.im.total_cmp(&b.im));
        i = j;
    }
    z
}

/// Size of the cluster each root belongs to (1 for simple roots).
pub fn multiplicities(roots: &[C64]) -> Vec<usize> {
    roots
        .iter()
        .map(|&r| {
            roots
                .iter()
                .filter(|&&s| (r - s).norm() <= 1e-6 * (1.0 + r.norm()))
                .count()
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> C64 {
        C64::new(re, 0.0)
    }

    #[test]
    fn eval_constant_and_square() {
        assert_eq!(CPoly::from_real(&[1.0]).eval(C64::new(3.0, -2.0)), c(1.0));
        assert_eq!(CPoly::from_real(&[0.0, 0.0, 1.0]).eval(c(2.0)), c(4.0));
    }

    #[test]
    fn reverse_pads_and_rejects_short_degree() {
        let p = CPoly::from_real(&[1.0, 2.0_f64.sqrt()]);
        assert_eq!(p.reverse(1).unwrap(), CPoly::from_real(&[2.0_f64.sqrt(), 1.0]));
        assert_eq!(CPoly::from_real(&[1.0]).reverse(0).unwrap(), CPoly::from_real(&[1.0]));
        assert_eq!(p.reverse(3).unwrap().coeffs().len(), 4);
        assert!(matches!(p.reverse(0), Err(Error::InvalidReversal { .. })));
    }

    #[test]
    fn roots_of_quadratic() {
        let r = CPoly::from_real(&[-4.0, 0.0, 1.0]).roots().unwrap();
        assert!((r[0] - c(-2.0)).norm() < 1e-14);
        assert!((r[1] - c(2.0)).norm() < 1e-14);
    }

    #[test]
    fn double_root_converges() {
        let r = CPoly::from_real(&[0.0, 0.0, 1.0]).roots().unwrap();
        assert!(r.iter().all(|z| z.norm() < 1e-7));
        assert_eq!(multiplicities(&r), vec![2, 2]);
    }

    #[test]
    fn zero_poly_has_no_roots() {
        assert!(matches!(CPoly::zero().roots(), Err(Error::UndefinedRoots)));
    }

    #[test]
    fn division_identity_and_zero_divisor() {
        let p = CPoly::from_real(&[1.0, -3.0, 0.5, 2.0]);
        let (q, r) = p.divide_exact(&p).unwrap();
        assert_eq!(q, CPoly::from_real(&[1.0]));
        assert!(r.is_zero());
        assert!(matches!(p.divide_exact(&CPoly::zero()), Err(Error::DivisionByZero)));
    }

    #[test]
    fn eval_d2_matches_derivative_polys() {
        let p = CPoly::from_real(&[0.3, -1.0, 2.0, 0.5, -0.25]);
        let z = C64::new(0.7, -0.4);
        let (v, d1, d2) = p.eval_d2(z);
        assert!((v - p.eval(z)).norm() < 1e-14);
        assert!((d1 - p.derivative().eval(z)).norm() < 1e-14);
        assert!((d2 - p.derivative().derivative().eval(z)).norm() < 1e-13);
    }

    #[test]
    fn trim_relative_drops_tiny_leading() {
        let p = CPoly::from_real(&[1.0, 2.0, 1e-15]);
        assert_eq!(p.degree(), 2);
        assert_eq!(p.trim_relative().degree(), 1);
    }
}
