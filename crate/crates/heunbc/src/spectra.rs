//! Termination condition, tridiagonal determinant and eigen-solutions of the
//! periodic equation `f'' + (-e^{4z} + K3 e^{3z} + K2 e^{2z} + K1 e^z + K0) f = 0`.

use crate::bhe::{self, HautotSolution, PbheCoeffs, Residual};
use crate::cpoly::{multiplicities, CPoly};
use crate::error::{Error, Result};
use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

fn re(x: f64) -> C64 {
    C64::new(x, 0.0)
}

/// Sign in front of `2√(-K0)` in `K3²/4 + K2 ± 2√(-K0) = 2(n+1)`.
///
/// The matching branch of the solution is `σ = -sign · √(-K0)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn value(self) -> f64 {
        match self {
            Sign::Plus => 1.0,
            Sign::Minus => -1.0,
        }
    }

    pub fn sigma(self, k0: C64) -> C64 {
        -self.value() * (-k0).sqrt()
    }

    /// The sign whose branch reproduces `sigma`.
    pub fn for_sigma(sigma: C64) -> Sign {
        let root = (sigma * sigma).sqrt();
        if (root + sigma).norm() <= (root - sigma).norm() {
            Sign::Plus
        } else {
            Sign::Minus
        }
    }
}

/// Left side `K3²/4 + K2 ± 2√(-K0)` of the termination condition.
pub fn termination_lhs(k3: C64, k2: C64, k0: C64, sign: Sign) -> C64 {
    k3 * k3 / 4.0 + k2 + sign.value() * 2.0 * (-k0).sqrt()
}

/// The degree `n` for which the termination condition holds, if any.
pub fn check_termination(k3: C64, k2: C64, k0: C64, sign: Sign) -> Option<usize> {
    let lhs = termination_lhs(k3, k2, k0, sign);
    let half = lhs / 2.0 - 1.0;
    let n = half.re.round();
    if n >= 0.0 && (half - n).norm() < 1e-9 {
        Some(n as usize)
    } else {
        None
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SpectrumProblem {
    pub n: usize,
    pub k3: C64,
    pub k2: C64,
    pub k0: C64,
    pub sign: Sign,
}

impl SpectrumProblem {
    pub fn new(n: usize, k3: C64, k2: C64, k0: C64, sign: Sign) -> Result<Self> {
        let lhs = termination_lhs(k3, k2, k0, sign);
        let rhs = 2.0 * (n as f64 + 1.0);
        let scale = 1.0 + (k3 * k3 / 4.0).norm() + k2.norm() + 2.0 * k0.norm().sqrt();
        if (lhs - rhs).norm() > 1e-12 * scale {
            return Err(Error::NotTerminating { lhs, rhs });
        }
        Ok(SpectrumProblem { n, k3, k2, k0, sign })
    }

    /// Solves the termination condition for `K2`.
    pub fn with_k2_from_condition(n: usize, k3: C64, k0: C64, sign: Sign) -> Self {
        let k2 = 2.0 * (n as f64 + 1.0) - k3 * k3 / 4.0 - sign.value() * 2.0 * (-k0).sqrt();
        SpectrumProblem { n, k3, k2, k0, sign }
    }

    /// Problem with a prescribed branch `σ` (so `K0 = -σ²`).
    pub fn from_sigma(n: usize, k3: C64, sigma: C64) -> Self {
        let sign = Sign::for_sigma(sigma);
        let k0 = -sigma * sigma;
        let k2 = 2.0 * (n as f64 + 1.0) - k3 * k3 / 4.0 + 2.0 * sigma;
        SpectrumProblem { n, k3, k2, k0, sign }
    }

    pub fn sigma(&self) -> C64 {
        self.sign.sigma(self.k0)
    }

    pub fn k2_shift(&self) -> C64 {
        self.k2 + self.k3 * self.k3 / 4.0 - 2.0 - 2.0 * self.sigma()
    }

    /// `k1 = -K1 - K3(1+2σ)/2` as a polynomial in `K1`.
    pub fn k1_poly(&self) -> CPoly {
        CPoly::new(vec![-self.k3 * (1.0 + 2.0 * self.sigma()) / 2.0, re(-1.0)])
    }

    pub fn coeffs(&self, k1: C64) -> PbheCoeffs {
        PbheCoeffs::normalized(self.k3, self.k2, k1, self.sigma())
    }

    /// Whether K3, K2, K0 are real negative and `1 + 2σ > 0`.
    pub fn reality_hypotheses(&self) -> bool {
        let real = |x: C64| x.im.abs() < 1e-14 && x.re < 0.0;
        let s = self.sigma();
        real(self.k3) && real(self.k2) && real(self.k0) && s.im.abs() < 1e-14 && 1.0 + 2.0 * s.re > 0.0
    }
}

/// `D_{n+1}(K1)` by the three-term recursion of the tridiagonal determinant.
pub fn det_poly(problem: &SpectrumProblem) -> CPoly {
    let sigma = problem.sigma();
    let k2 = problem.k2_shift();
    let k1 = problem.k1_poly();
    let mut prev = CPoly::constant(re(1.0));
    let mut cur = k1.clone();
    for j in 2..=problem.n + 1 {
        let jf = j as f64;
        let diag = k1.add(&CPoly::constant(-(jf - 1.0) * problem.k3));
        let off = (jf - 1.0) * (jf - 1.0 + 2.0 * sigma) * (k2 - 2.0 * (jf - 2.0));
        let next = diag.mul(&cur).sub(&prev.scale(off));
        prev = cur;
        cur = next;
    }
    cur
}

#[derive(Clone, Debug, PartialEq)]
pub struct EigenPair {
    pub n: usize,
    pub nu: usize,
    pub k1: C64,
    pub multiplicity: usize,
    pub lambda: Option<C64>,
}

/// Sorted roots of `D_{n+1}`; asserts reality and simplicity under the
/// hypotheses of [`SpectrumProblem::reality_hypotheses`].
pub fn k1_spectrum(problem: &SpectrumProblem) -> Result<Vec<EigenPair>> {
    let d = det_poly(problem);
    let roots = d.roots()?;
    let mult = multiplicities(&roots);
    if problem.reality_hypotheses() {
        if let Some(r) = roots.iter().find(|r| r.im.abs() >= 1e-9 * (1.0 + r.re.abs())) {
            return Err(Error::InvariantViolation(format!("non-real K1 root {r}")));
        }
        if min_gap(&roots) <= 1e-8 {
            return Err(Error::InvariantViolation("repeated K1 root".into()));
        }
    }
    Ok(roots
        .iter()
        .enumerate()
        .map(|(nu, &k1)| EigenPair { n: problem.n, nu, k1, multiplicity: mult[nu], lambda: None })
        .collect())
}

/// Smallest pairwise distance between roots (infinity for fewer than two).
pub fn min_gap(roots: &[C64]) -> f64 {
    let mut g = f64::INFINITY;
    for i in 0..roots.len() {
        for j in i + 1..roots.len() {
            g = g.min((roots[i] - roots[j]).norm());
        }
    }
    g
}

/// `BH_{n,ν}(z) = Y(e^{-z}) exp[(K3/2)e^z - ½e^{2z} + (n+σ)z]`.
#[derive(Clone, Debug, PartialEq)]
pub struct BhSolution {
    pub pair: EigenPair,
    pub hautot: HautotSolution,
    pub coeffs: PbheCoeffs,
}

impl BhSolution {
    pub fn n(&self) -> usize {
        self.pair.n
    }

    pub fn shift(&self) -> C64 {
        self.n() as f64 + self.coeffs.sigma
    }

    pub fn exponent(&self, z: C64) -> C64 {
        let e = z.exp();
        self.coeffs.k3 / 2.0 * e - 0.5 * e * e + self.shift() * z
    }

    /// Value, first and second derivative.
    pub fn eval(&self, z: C64) -> (C64, C64, C64) {
        let e = z.exp();
        let w = 1.0 / e;
        let (y, y1, y2) = self.hautot.reversed.eval_d2(w);
        let yz = -w * y1;
        let yzz = w * y1 + w * w * y2;
        let h = self.coeffs.k3 / 2.0;
        let g = h * e - 0.5 * e * e + self.shift() * z;
        let g1 = h * e - e * e + self.shift();
        let g2 = h * e - 2.0 * e * e;
        let eg = g.exp();
        (eg * y, eg * (yz + g1 * y), eg * (yzz + 2.0 * g1 * yz + (g2 + g1 * g1) * y))
    }

    pub fn value(&self, z: C64) -> C64 {
        self.eval(z).0
    }

    /// `P(e^z) exp[(K3/2)e^z - ½e^{2z} + σz]`.
    pub fn value_direct(&self, z: C64) -> C64 {
        let e = z.exp();
        let g = self.coeffs.k3 / 2.0 * e - 0.5 * e * e + self.coeffs.sigma * z;
        self.hautot.poly.eval(e) * g.exp()
    }
}

/// Assembles the eigen-solution for a root `pair.k1`.
pub fn bh_solution(pair: &EigenPair, coeffs: &PbheCoeffs) -> Result<BhSolution> {
    let mut c = *coeffs;
    c.k1 = pair.k1;
    let params = bhe::bhe_from_pbhe(&c)?;
    let alpha = params.alpha;
    let a = bhe::series_coeffs(&params, pair.n)?;
    let poly = bhe::poly_from_series(alpha, &a);
    let reversed = poly.reverse(pair.n)?;
    let hautot = HautotSolution {
        m: pair.n,
        nu: pair.nu,
        delta_eig: params.delta,
        multiplicity: pair.multiplicity,
        poly,
        reversed,
        params,
    };
    Ok(BhSolution { pair: pair.clone(), hautot, coeffs: c })
}

/// Spectrum and eigen-solutions of one problem.
pub fn family(problem: &SpectrumProblem) -> Result<Vec<BhSolution>> {
    k1_spectrum(problem)?
        .iter()
        .map(|p| bh_solution(p, &problem.coeffs(p.k1)))
        .collect()
}

pub fn pbhe_residual(coeffs: &PbheCoeffs, sol: &BhSolution, z: C64) -> Residual {
    let (f, _, f2) = sol.eval(z);
    Residual {
        value: f2 + coeffs.potential(z) * f,
        scale: f2.norm() + coeffs.potential_abs(z) * f.norm(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn termination_examples() {
        assert_eq!(check_termination(re(0.0), re(4.0), re(-1.0), Sign::Minus), Some(0));
        assert_eq!(check_termination(re(0.0), re(3.0), re(-0.25), Sign::Plus), Some(1));
        assert_eq!(check_termination(re(0.0), re(2.5), re(-1.0), Sign::Plus), None);
        assert_eq!(check_termination(re(0.0), re(2.5), re(-1.0), Sign::Minus), None);
    }

    #[test]
    fn degree_one_determinant() {
        let p = SpectrumProblem::new(0, re(-2.0), re(2.0), re(-0.25), Sign::Minus).unwrap();
        let d = det_poly(&p);
        let root = -p.k3 * (1.0 + 2.0 * p.sigma()) / 2.0;
        assert!(d.eval(root).norm() < 1e-15);
        assert_eq!(d.degree(), 1);
    }

    #[test]
    fn double_root_when_one_plus_two_sigma_vanishes() {
        let p = SpectrumProblem::new(1, re(0.0), re(3.0), re(-0.25), Sign::Plus).unwrap();
        assert_eq!(p.sigma(), re(-0.5));
        let d = det_poly(&p);
        assert!((d.coeffs()[2] - 1.0).norm() < 1e-15);
        assert!(d.coeffs()[0].norm() < 1e-15 && d.coeffs()[1].norm() < 1e-15);
    }

    #[test]
    fn rejects_non_terminating() {
        assert!(SpectrumProblem::new(1, re(0.0), re(2.5), re(-1.0), Sign::Plus).is_err());
    }

    #[test]
    fn sign_for_sigma_roundtrip() {
        for s in [-1.5, -0.5, 0.5, 2.0] {
            let sig = re(s);
            assert_eq!(Sign::for_sigma(sig).sigma(-sig * sig), sig);
        }
    }
}
