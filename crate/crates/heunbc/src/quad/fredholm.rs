//! Fredholm eigen-relation for the rotated periodic solution `f̃(z) = f(iz)`
//! against the kernel `K(z,s) = exp[a(e^{2iz}+e^{2is}) + c(e^{iz}+e^{is})]`.

use super::{certified_integral, Certified, ContourRule};
use crate::bhe::{PbheCoeffs, Residual};
use crate::cpoly::CPoly;
use crate::error::{Error, Result};
use crate::spectra::{BhSolution, EigenPair, SpectrumProblem};
use num_complex::Complex64 as C64;
use std::f64::consts::PI;

fn re(x: f64) -> C64 {
    C64::new(x, 0.0)
}

fn check_a(a: C64) -> Result<()> {
    if (4.0 * a * a - 1.0).norm() > 1e-12 {
        return Err(Error::KernelConstraint { a });
    }
    Ok(())
}

/// Exponent `φ(z) = a e^{2iz} + c e^{iz}` and its first two derivatives.
fn phi(z: C64, a: C64, c: C64) -> (C64, C64, C64) {
    let e = (C64::i() * z).exp();
    (a * e * e + c * e, C64::i() * (2.0 * a * e * e + c * e), -(4.0 * a * e * e + c * e))
}

pub fn fredholm_kernel(z: C64, s: C64, a: C64, c: C64) -> Result<C64> {
    check_a(a)?;
    Ok((phi(z, a, c).0 + phi(s, a, c).0).exp())
}

/// `(L_z - L_s) K` with `L = ∂² + Σ K̃_j e^{ijz}`, `K̃_j = -K_j`.
pub fn kernel_pde_residual(coeffs: &PbheCoeffs, z: C64, s: C64, a: C64, c: C64) -> Result<Residual> {
    let k = fredholm_kernel(z, s, a, c)?;
    let rot = |x: C64| {
        let (_, p1, p2) = phi(x, a, c);
        let pot = -coeffs.potential(C64::i() * x);
        let pot_abs = coeffs.potential_abs(C64::i() * x);
        ((p2 + p1 * p1) * k, pot * k, (p2.norm() + p1.norm_sqr() + pot_abs) * k.norm())
    };
    let (dz, pz, az) = rot(z);
    let (ds, ps, as_) = rot(s);
    Ok(Residual { value: dz + pz - ds - ps, scale: az + as_ })
}

/// Periodic coefficients compatible with the kernel: `K3 = 4aK1`,
/// `K2 = -K1² - 4a`, `K0 = -σ²` with `σ = -2a - n - 1`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FredholmSetup {
    pub n: usize,
    pub a: C64,
    pub k1: C64,
    pub sigma: C64,
}

impl FredholmSetup {
    pub fn new(n: usize, a: f64, k1: C64) -> Result<Self> {
        let a = re(a);
        check_a(a)?;
        Ok(FredholmSetup { n, a, k1, sigma: -2.0 * a - (n as f64 + 1.0) })
    }

    pub fn kernel_c(&self) -> C64 {
        -self.k1
    }

    pub fn problem(&self) -> SpectrumProblem {
        SpectrumProblem::from_sigma(self.n, 4.0 * self.a * self.k1, self.sigma)
    }

    pub fn coeffs(&self) -> PbheCoeffs {
        self.problem().coeffs(self.k1)
    }

    /// `D_{n+1}` with `K3 = 4aK1` substituted, as a polynomial in `K1`.
    pub fn consistent_det(n: usize, a: f64) -> CPoly {
        let a = re(a);
        let sigma = -2.0 * a - (n as f64 + 1.0);
        let k3 = CPoly::new(vec![re(0.0), 4.0 * a]);
        let k1 = CPoly::new(vec![re(0.0), -1.0 - 2.0 * a * (1.0 + 2.0 * sigma)]);
        let k2 = re(2.0 * n as f64);
        let mut prev = CPoly::constant(re(1.0));
        let mut cur = k1.clone();
        for j in 2..=n + 1 {
            let jf = j as f64;
            let diag = k1.sub(&k3.scale(re(jf - 1.0)));
            let off = (jf - 1.0) * (jf - 1.0 + 2.0 * sigma) * (k2 - 2.0 * (jf - 2.0));
            let next = diag.mul(&cur).sub(&prev.scale(off));
            prev = cur;
            cur = next;
        }
        cur
    }

    /// Self-consistent `K1` values; `None` when every `K1` is admissible.
    pub fn consistent_k1(n: usize, a: f64) -> Result<Option<Vec<C64>>> {
        let d = Self::consistent_det(n, a).trim_relative();
        if d.is_zero() {
            return Ok(None);
        }
        Ok(Some(d.roots()?))
    }

    /// The eigen-solution `BH_{n,ν}` of this setup.
    pub fn solution(&self) -> Result<BhSolution> {
        let pair = EigenPair { n: self.n, nu: 0, k1: self.k1, multiplicity: 1, lambda: None };
        crate::spectra::bh_solution(&pair, &self.coeffs())
    }
}

/// `f̃(z) = f(iz)` with derivatives.
pub fn rotated(sol: &BhSolution, z: C64) -> (C64, C64, C64) {
    let (f, f1, f2) = sol.eval(C64::i() * z);
    (f, C64::i() * f1, -f2)
}

#[derive(Clone, Debug, PartialEq)]
pub struct FredholmReport {
    pub lambda: C64,
    pub variation: f64,
    pub samples: Vec<f64>,
    pub lambdas: Vec<C64>,
    /// Worst N → 2N defect over the sample integrals.
    pub certificate: f64,
}

fn sample_points(m: usize, offset: f64) -> Vec<f64> {
    (0..m).map(|j| 2.0 * PI * (j as f64 + offset) / m as f64).collect()
}

/// `λ_j = f̃(z_j) / ∫_0^{2π} K(z_j, s) f̃(s) ds` at `m` samples.
pub fn fredholm_lambda(sol: &BhSolution, a: C64, c: C64, m: usize, n_nodes: usize) -> Result<FredholmReport> {
    check_a(a)?;
    let s = sol.coeffs.sigma;
    let t = s + sol.n() as f64 + 1.0;
    if (t * t - 1.0).norm() > 1e-12 {
        return Err(Error::Hypothesis("(n + σ + 1)² = 1 is required".into()));
    }
    if (sol.coeffs.k3 - 4.0 * a * sol.coeffs.k1).norm() > 1e-12 * (1.0 + sol.coeffs.k3.norm()) {
        return Err(Error::Configuration("K3 = 4 a K1 is required".into()));
    }
    let rule = ContourRule::horizontal(re(0.0), n_nodes)?;
    let fmax = sample_points(256, 0.0)
        .iter()
        .map(|&x| rotated(sol, re(x)).0.norm())
        .fold(0.0, f64::max);
    let mut offset = 0.0;
    let mut pts = sample_points(m, offset);
    while pts.iter().any(|&x| rotated(sol, re(x)).0.norm() < 1e-8 * fmax) && offset < 1.0 {
        offset += 0.125;
        pts = sample_points(m, offset);
    }
    let mut ints: Vec<Certified> = Vec::with_capacity(m);
    for &x in &pts {
        ints.push(certified_integral(
            |s| {
                let k = (phi(re(x), a, c).0 + phi(s, a, c).0).exp();
                k * rotated(sol, s).0
            },
            &rule,
        )?);
    }
    if ints.iter().all(|i| i.value.norm() <= 1e-12 * i.scale) {
        return Err(Error::DegenerateIntegral);
    }
    let lambdas: Vec<C64> = pts.iter().zip(&ints).map(|(&x, i)| rotated(sol, re(x)).0 / i.value).collect();
    let lambda = lambdas.iter().sum::<C64>() / m as f64;
    let variation = lambdas.iter().map(|l| (l - lambda).norm() / lambda.norm()).fold(0.0, f64::max);
    let certificate = ints.iter().map(|i| i.defect).fold(0.0, f64::max);
    Ok(FredholmReport { lambda, variation, samples: pts, lambdas, certificate })
}

/// Largest normalized defect `|C(x, 2π) - C(x, 0)|` of the bilinear
/// concomitant `C = K ∂_s f̃ - f̃ ∂_s K` over the x-grid.
pub fn concomitant_check(sol: &BhSolution, a: C64, c: C64, xs: &[f64]) -> Result<f64> {
    check_a(a)?;
    let conc = |x: f64, s: f64| {
        let k = (phi(re(x), a, c).0 + phi(re(s), a, c).0).exp();
        let (_, dphi, _) = phi(re(s), a, c);
        let (f, f1, _) = rotated(sol, re(s));
        (k * f1 - f * dphi * k, (k * f1).norm() + (f * dphi * k).norm())
    };
    Ok(xs
        .iter()
        .map(|&x| {
            let (c0, s0) = conc(x, 0.0);
            let (c1, s1) = conc(x, 2.0 * PI);
            (c1 - c0).norm() / s0.max(s1)
        })
        .fold(0.0, f64::max))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kernel_symmetry_and_period() {
        let (a, c) = (re(-0.5), C64::new(0.3, -0.2));
        let (z, s) = (C64::new(0.4, 0.1), C64::new(-1.3, 0.2));
        let k = fredholm_kernel(z, s, a, c).unwrap();
        assert!((k - fredholm_kernel(s, z, a, c).unwrap()).norm() < 1e-15 * k.norm());
        assert!((k - fredholm_kernel(z + 2.0 * PI, s, a, c).unwrap()).norm() < 1e-13 * k.norm());
    }

    #[test]
    fn kernel_constraint() {
        assert!(matches!(fredholm_kernel(re(0.0), re(0.0), re(0.3), re(1.0)), Err(Error::KernelConstraint { .. })));
    }

    #[test]
    fn ground_setup_has_free_k1() {
        assert_eq!(FredholmSetup::consistent_k1(0, -0.5).unwrap(), None);
        let r = FredholmSetup::consistent_k1(0, 0.5).unwrap().unwrap();
        assert_eq!(r.len(), 1);
        assert!(r[0].norm() < 1e-15);
    }
}
