//! Biconfluent Heun parameters, the series recursion and terminating solutions.
//!
//! The equation is `z u'' + (1 + α - βz - 2z²) u' + ((γ - α - 2) z - θ) u = 0`
//! with `θ = ½[δ + β(1 + α)]`.

use crate::cpoly::{multiplicities, CPoly};
use crate::error::{Error, Result};
use num_complex::Complex64 as C64;

fn re(x: f64) -> C64 {
    C64::new(x, 0.0)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BheParams {
    pub alpha: C64,
    pub beta: C64,
    pub gamma: C64,
    pub delta: C64,
}

impl BheParams {
    pub fn new(alpha: C64, beta: C64, gamma: C64, delta: C64) -> Self {
        BheParams { alpha, beta, gamma, delta }
    }

    pub fn real(alpha: f64, beta: f64, gamma: f64, delta: f64) -> Self {
        Self::new(re(alpha), re(beta), re(gamma), re(delta))
    }

    pub fn theta(&self) -> C64 {
        0.5 * (self.delta + self.beta * (1.0 + self.alpha))
    }

    /// `½(|δ| + |β(1+α)|)`, the size of the terms that cancel in `θ`.
    pub fn theta_abs(&self) -> f64 {
        0.5 * (self.delta.norm() + (self.beta * (1.0 + self.alpha)).norm())
    }
}

/// Coefficients of `f'' + (K4 e^{4z} + K3 e^{3z} + K2 e^{2z} + K1 e^z + K0) f = 0`
/// together with the branch `sigma` of `√(-K0)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PbheCoeffs {
    pub k0: C64,
    pub k1: C64,
    pub k2: C64,
    pub k3: C64,
    pub k4: C64,
    pub sigma: C64,
}

impl PbheCoeffs {
    /// Normalized coefficients (`K4 = -1`, `K0 = -σ²`).
    pub fn normalized(k3: C64, k2: C64, k1: C64, sigma: C64) -> Self {
        PbheCoeffs { k0: -sigma * sigma, k1, k2, k3, k4: re(-1.0), sigma }
    }

    pub fn potential(&self, z: C64) -> C64 {
        let e = z.exp();
        (((self.k4 * e + self.k3) * e + self.k2) * e + self.k1) * e + self.k0
    }

    /// `Σ |K_j| |e^{jz}|`.
    pub fn potential_abs(&self, z: C64) -> f64 {
        let e = z.exp().norm();
        (((self.k4.norm() * e + self.k3.norm()) * e + self.k2.norm()) * e + self.k1.norm()) * e
            + self.k0.norm()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct HautotSolution {
    pub m: usize,
    pub nu: usize,
    pub delta_eig: C64,
    /// Number of computed roots within the clustering radius (1 when simple).
    pub multiplicity: usize,
    pub poly: CPoly,
    pub reversed: CPoly,
    pub params: BheParams,
}

fn check_pochhammer(alpha: C64, kmax: usize) -> Result<()> {
    for k in 0..kmax {
        if (1.0 + alpha + k as f64).norm() < 1e-13 {
            return Err(Error::DegenerateParameter { k: k + 1 });
        }
    }
    Ok(())
}

/// `A_0 … A_kmax` of the power series `Σ A_k z^k / ((1+α)_k k!)`.
pub fn series_coeffs(params: &BheParams, kmax: usize) -> Result<Vec<C64>> {
    check_pochhammer(params.alpha, kmax)?;
    let BheParams { alpha, beta, gamma, .. } = *params;
    let theta = params.theta();
    let mut a = vec![re(1.0), theta];
    for k in 0..kmax.saturating_sub(1) {
        let kf = k as f64;
        let next = ((kf + 1.0) * beta + theta) * a[k + 1]
            - (kf + 1.0) * (kf + 1.0 + alpha) * (gamma - alpha - 2.0 - 2.0 * kf) * a[k];
        a.push(next);
    }
    a.truncate(kmax + 1);
    Ok(a)
}

/// `A_0(δ) … A_kmax(δ)` as polynomials in δ.
pub fn series_delta_polys(alpha: C64, beta: C64, gamma: C64, kmax: usize) -> Vec<CPoly> {
    let theta = CPoly::new(vec![0.5 * beta * (1.0 + alpha), re(0.5)]);
    let mut a = vec![CPoly::constant(re(1.0)), theta.clone()];
    for k in 0..kmax.saturating_sub(1) {
        let kf = k as f64;
        let lin = theta.add(&CPoly::constant((kf + 1.0) * beta));
        let c = (kf + 1.0) * (kf + 1.0 + alpha) * (gamma - alpha - 2.0 - 2.0 * kf);
        let next = lin.mul(&a[k + 1]).sub(&a[k].scale(c));
        a.push(next);
    }
    a.truncate(kmax + 1);
    a
}

/// The termination polynomial `A_{m+1}(δ)` at `γ = α + 2(m+1)`.
pub fn termination_poly(m: usize, alpha: C64, beta: C64) -> CPoly {
    let gamma = alpha + 2.0 * (m as f64 + 1.0);
    series_delta_polys(alpha, beta, gamma, m + 1).pop().unwrap()
}

/// Polynomial coefficients `A_k / ((1+α)_k k!)` for `k ≤ m`.
pub fn poly_from_series(alpha: C64, a: &[C64]) -> CPoly {
    let mut denom = re(1.0);
    let mut c = Vec::with_capacity(a.len());
    for (k, &ak) in a.iter().enumerate() {
        if k > 0 {
            denom *= (alpha + k as f64) * k as f64;
        }
        c.push(ak / denom);
    }
    CPoly::new(c)
}

/// All terminating solutions of degree `m`.
pub fn hautot(m: usize, alpha: C64, beta: C64) -> Result<Vec<HautotSolution>> {
    check_pochhammer(alpha, m + 1)?;
    let gamma = alpha + 2.0 * (m as f64 + 1.0);
    let roots = termination_poly(m, alpha, beta).roots()?;
    let mult = multiplicities(&roots);
    roots
        .iter()
        .enumerate()
        .map(|(nu, &delta)| {
            let params = BheParams::new(alpha, beta, gamma, delta);
            let a = series_coeffs(&params, m)?;
            let poly = poly_from_series(alpha, &a);
            let reversed = poly.reverse(m)?;
            Ok(HautotSolution { m, nu, delta_eig: delta, multiplicity: mult[nu], poly, reversed, params })
        })
        .collect()
}

pub fn pbhe_from_bhe(p: &BheParams) -> PbheCoeffs {
    PbheCoeffs {
        k4: re(-1.0),
        k3: -p.beta,
        k2: p.gamma - p.beta * p.beta / 4.0,
        k1: -p.delta / 2.0,
        k0: -p.alpha * p.alpha / 4.0,
        sigma: p.alpha / 2.0,
    }
}

pub fn bhe_from_pbhe(k: &PbheCoeffs) -> Result<BheParams> {
    if (k.k4 + 1.0).norm() > 1e-14 {
        return Err(Error::NonNormalized { k4: k.k4 });
    }
    let beta = -k.k3;
    Ok(BheParams {
        alpha: 2.0 * k.sigma,
        beta,
        gamma: k.k2 + beta * beta / 4.0,
        delta: -2.0 * k.k1,
    })
}

/// A residual value with the magnitude of the terms that produced it.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Residual {
    pub value: C64,
    pub scale: f64,
}

impl Residual {
    pub fn relative(&self) -> f64 {
        if self.scale == 0.0 {
            self.value.norm()
        } else {
            self.value.norm() / self.scale
        }
    }
}

/// BHE left side for an arbitrary polynomial `u`.
pub fn bhe_residual_poly(params: &BheParams, u: &CPoly, z: C64) -> Residual {
    let (v, d1, d2) = u.eval_d2(z);
    let (va, d1a, d2a) = u.eval_abs_d2(z.norm());
    let c1 = 1.0 + params.alpha - params.beta * z - 2.0 * z * z;
    let c0 = (params.gamma - params.alpha - 2.0) * z - params.theta();
    let r = z.norm();
    let c1a = (1.0 + params.alpha).norm() + params.beta.norm() * r + 2.0 * r * r;
    let c0a = (params.gamma - params.alpha - 2.0).norm() * r + params.theta_abs();
    Residual {
        value: z * d2 + c1 * d1 + c0 * v,
        scale: r * d2a + c1a * d1a + c0a * va,
    }
}

pub fn bhe_residual(params: &BheParams, sol: &HautotSolution, z: C64) -> C64 {
    bhe_residual_poly(params, &sol.poly, z).value
}

/// Reversed-polynomial equation
/// `x³Y'' + [(1-2n-α)x² + βx + 2]Y' + [(α+n)n x - βn - θ]Y` for an arbitrary `Y`.
pub fn reversed_residual_poly(params: &BheParams, n: usize, y: &CPoly, x: C64) -> Result<Residual> {
    if x.norm() == 0.0 {
        return Err(Error::SingularPoint);
    }
    let nf = n as f64;
    let BheParams { alpha, beta, .. } = *params;
    let theta = params.theta();
    let (v, d1, d2) = y.eval_d2(x);
    let (va, d1a, d2a) = y.eval_abs_d2(x.norm());
    let r = x.norm();
    let c1 = (1.0 - 2.0 * nf - alpha) * x * x + beta * x + 2.0;
    let c0 = (alpha + nf) * nf * x - beta * nf - theta;
    let c1a = (1.0 - 2.0 * nf - alpha).norm() * r * r + beta.norm() * r + 2.0;
    let c0a = ((alpha + nf) * nf).norm() * r + (beta * nf).norm() + params.theta_abs();
    Ok(Residual {
        value: x * x * x * d2 + c1 * d1 + c0 * v,
        scale: r * r * r * d2a + c1a * d1a + c0a * va,
    })
}

pub fn reversed_residual(sol: &HautotSolution, z: C64) -> Result<C64> {
    Ok(reversed_residual_poly(&sol.params, sol.m, &sol.reversed, z)?.value)
}

/// `Ψ(x) = x^{α/2} e^{-βx/2 - x²/2} ψ(x)` with its first two derivatives.
pub fn gen_bessel_psi(sol: &HautotSolution, x: C64) -> (C64, C64, C64) {
    let BheParams { alpha, beta, .. } = sol.params;
    let g = alpha / 2.0 * x.ln() - beta * x / 2.0 - x * x / 2.0;
    let g1 = alpha / (2.0 * x) - beta / 2.0 - x;
    let g2 = -alpha / (2.0 * x * x) - 1.0;
    let e = g.exp();
    let (p, p1, p2) = sol.poly.eval_d2(x);
    (e * p, e * (g1 * p + p1), e * ((g2 + g1 * g1) * p + 2.0 * g1 * p1 + p2))
}

/// `x²Ψ'' + xΨ' + (K4x⁴ + K3x³ + K2x² + K1x + K0)Ψ`.
pub fn gen_bessel_residual<F>(coeffs: &PbheCoeffs, psi: F, x: C64) -> Result<Residual>
where
    F: Fn(C64) -> (C64, C64, C64),
{
    if x.norm() == 0.0 {
        return Err(Error::SingularPoint);
    }
    let (v, d1, d2) = psi(x);
    let q = (((coeffs.k4 * x + coeffs.k3) * x + coeffs.k2) * x + coeffs.k1) * x + coeffs.k0;
    let r = x.norm();
    let qa = (((coeffs.k4.norm() * r + coeffs.k3.norm()) * r + coeffs.k2.norm()) * r
        + coeffs.k1.norm())
        * r
        + coeffs.k0.norm();
    Ok(Residual {
        value: x * x * d2 + x * d1 + q * v,
        scale: (x * x * d2).norm() + (x * d1).norm() + qa * v.norm(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn first_two_coefficients() {
        let p = BheParams::real(0.3, -1.2, 2.0, 0.7);
        let a = series_coeffs(&p, 5).unwrap();
        assert_eq!(a[0], re(1.0));
        assert!((a[1] - 0.5 * (0.7 - 1.2 * 1.3)).norm() < 1e-15);
    }

    #[test]
    fn delta_choice_kills_first_coefficient() {
        let (alpha, beta) = (0.4, 1.5);
        let p = BheParams::real(alpha, beta, 3.0, -beta * (1.0 + alpha));
        assert!(series_coeffs(&p, 3).unwrap()[1].norm() < 1e-15);
    }

    #[test]
    fn pochhammer_pole_is_reported() {
        let p = BheParams::real(-3.0, 0.0, 1.0, 0.0);
        assert_eq!(series_coeffs(&p, 5), Err(Error::DegenerateParameter { k: 3 }));
    }

    #[test]
    fn degree_zero_solution() {
        let s = hautot(0, re(0.5), re(2.0)).unwrap();
        assert_eq!(s.len(), 1);
        assert!((s[0].delta_eig + 2.0 * 1.5).norm() < 1e-14);
        assert_eq!(s[0].poly, CPoly::from_real(&[1.0]));
        assert_eq!(bhe_residual(&s[0].params, &s[0], C64::new(0.3, -0.8)), re(0.0));
    }

    #[test]
    fn round_trip_zero_params() {
        let k = pbhe_from_bhe(&BheParams::real(0.0, 0.0, 0.0, 0.0));
        assert_eq!((k.k4, k.k3, k.k2, k.k1, k.k0, k.sigma), (re(-1.0), -re(0.0), re(0.0), -re(0.0), -re(0.0), re(0.0)));
        assert_eq!(bhe_from_pbhe(&k).unwrap(), BheParams::real(0.0, 0.0, 0.0, 0.0));
    }

    #[test]
    fn non_normalized_is_rejected() {
        let mut k = PbheCoeffs::normalized(re(1.0), re(2.0), re(3.0), re(0.5));
        k.k4 = re(-2.0);
        assert!(matches!(bhe_from_pbhe(&k), Err(Error::NonNormalized { .. })));
    }

    #[test]
    fn reversed_residual_rejects_origin() {
        let s = hautot(1, re(0.0), re(0.0)).unwrap();
        assert_eq!(reversed_residual(&s[0], re(0.0)), Err(Error::SingularPoint));
    }
}
