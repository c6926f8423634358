//! Turbiner / Bender–Dunne specialization: `H_c ψ = E ψ` with
//! `H_c = -d²/dx² + (4s-1)(4s-3)/(4x²) - (4s+4J-2)x² - cx⁴ + x⁶`.

use crate::bhe::{self, BheParams, PbheCoeffs, Residual};
use crate::cpoly::exact::{QPoly, QSqrt2};
use crate::cpoly::{sort_roots, CPoly};
use crate::error::{Error, Result};
use crate::spectra::{det_poly, SpectrumProblem};
use num_complex::Complex64 as C64;
use num_rational::BigRational;
use std::f64::consts::SQRT_2;

fn re(x: f64) -> C64 {
    C64::new(x, 0.0)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TurbinerParams {
    pub s: f64,
    pub j: usize,
    pub c: f64,
    pub e: C64,
}

impl TurbinerParams {
    pub fn new(s: f64, j: usize, c: f64, e: C64) -> Self {
        TurbinerParams { s, j, c, e }
    }
}

/// `α = 2s-1`, `β = √2c/2`, `γ = 2J+2s-1`, `δ = -√2E/2 - c²/4`.
pub fn bhe_from_turbiner(p: &TurbinerParams) -> BheParams {
    BheParams {
        alpha: re(2.0 * p.s - 1.0),
        beta: re(SQRT_2 * p.c / 2.0),
        gamma: re(2.0 * p.j as f64 + 2.0 * p.s - 1.0),
        delta: -SQRT_2 * p.e / 2.0 - p.c * p.c / 4.0,
    }
}

/// Linear shift in `P_k = [E - shift_k] P_{k-1} - …`.
fn shift(k: usize, s: f64, c: f64) -> f64 {
    2.0 * c * (k as f64 - 1.0) + 2.0 * c * s - c * c / (2.0 * SQRT_2)
}

/// `P_0^c … P_kmax^c` as polynomials in `E`.
pub fn bender_dunne_polys(s: f64, j: usize, c: f64, kmax: usize) -> Vec<CPoly> {
    let mut p = vec![CPoly::constant(re(1.0))];
    if kmax >= 1 {
        p.push(CPoly::from_real(&[-shift(1, s, c), 1.0]));
    }
    for k in 2..=kmax {
        let kf = k as f64;
        let lin = CPoly::from_real(&[-shift(k, s, c), 1.0]);
        let off = 16.0 * (kf - 1.0) * (kf - 2.0 + 2.0 * s) * (j as f64 + 1.0 - kf);
        let next = lin.mul(&p[k - 1]).sub(&p[k - 2].scale(re(off)));
        p.push(next);
    }
    p
}

/// Exact counterpart of [`bender_dunne_polys`] for rational `s` and `c`.
pub fn bender_dunne_polys_exact(s: &BigRational, j: usize, c: &BigRational, kmax: usize) -> Vec<QPoly> {
    let sq = QSqrt2::rational(s.clone());
    let cq = QSqrt2::rational(c.clone());
    let c2 = &cq * &cq;
    // c²/(2√2) = c²√2/4
    let quad = &c2 * &(&QSqrt2::sqrt2() * &QSqrt2::frac(1, 4));
    let shift = |k: usize| {
        let lin = &(&QSqrt2::int(2) * &cq) * &QSqrt2::int(k as i64 - 1);
        let cs = &(&QSqrt2::int(2) * &cq) * &sq;
        &(&lin + &cs) - &quad
    };
    let lin = |k: usize| QPoly::new(vec![-&shift(k), QSqrt2::one()]);
    let mut p = vec![QPoly::constant(QSqrt2::one())];
    if kmax >= 1 {
        p.push(lin(1));
    }
    for k in 2..=kmax {
        let kq = QSqrt2::int(k as i64);
        let a = &kq - &QSqrt2::one();
        let b = &(&kq - &QSqrt2::int(2)) + &(&QSqrt2::int(2) * &sq);
        let d = QSqrt2::int(j as i64 + 1 - k as i64);
        let off = &(&(&QSqrt2::int(16) * &a) * &b) * &d;
        let next = lin(k).mul(&p[k - 1]).sub(&p[k - 2].scale(&off));
        p.push(next);
    }
    p
}

/// Quotients `Q_n = P_{J+n} / P_J` for `n = 1..=nmax` with remainder norms.
pub fn factorization_check(s: f64, j: usize, c: f64, nmax: usize) -> Vec<(CPoly, f64)> {
    let p = bender_dunne_polys(s, j, c, j + nmax);
    (1..=nmax)
        .map(|n| {
            let (q, r) = p[j + n].divide_exact(&p[j]).expect("P_J is never zero");
            let scale = p[j + n].max_abs_coeff().max(1.0);
            (q, r.max_abs_coeff() / scale)
        })
        .collect()
}

/// Exact quotients and whether each remainder is identically zero.
pub fn factorization_check_exact(s: &BigRational, j: usize, c: &BigRational, nmax: usize) -> Vec<(QPoly, bool)> {
    let p = bender_dunne_polys_exact(s, j, c, j + nmax);
    (1..=nmax)
        .map(|n| {
            let (q, r) = p[j + n].divide(&p[j]).expect("P_J is never zero");
            (q, r.is_zero())
        })
        .collect()
}

/// The spectrum computed three ways.
#[derive(Clone, Debug, PartialEq)]
pub struct QesSpectrum {
    pub from_determinant: Vec<C64>,
    pub from_delta_roots: Vec<C64>,
    pub from_bender_dunne: Vec<C64>,
    pub max_deviation: f64,
}

fn max_dev(a: &[C64], b: &[C64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}

pub fn qes_spectrum_paths(s: f64, j: usize, c: f64) -> Result<QesSpectrum> {
    if j == 0 {
        return Err(Error::EmptySpectrum);
    }
    let n = j - 1;
    let coeffs = periodic_turbiner_coeffs(&TurbinerParams::new(s, j, c, re(0.0)));
    let problem = SpectrumProblem::from_sigma(n, coeffs.k3, coeffs.sigma);
    let det: Vec<C64> = det_poly(&problem)
        .roots()?
        .into_iter()
        .map(|k1| 2.0 * SQRT_2 * (k1 - c * c / 8.0))
        .collect();
    let alpha = re(2.0 * s - 1.0);
    let delta: Vec<C64> = bhe::termination_poly(n, alpha, re(SQRT_2 * c / 2.0))
        .roots()?
        .into_iter()
        .map(|d| -SQRT_2 * (d + c * c / 4.0))
        .collect();
    let bd = bender_dunne_polys(s, j, c, j).pop().unwrap().roots()?;
    let (det, delta, bd) = (sort_roots(det), sort_roots(delta), sort_roots(bd));
    let max_deviation = max_dev(&det, &delta).max(max_dev(&det, &bd));
    Ok(QesSpectrum { from_determinant: det, from_delta_roots: delta, from_bender_dunne: bd, max_deviation })
}

/// Spectrum of `E` values; the three computations must agree to 1e-9.
pub fn qes_spectrum(s: f64, j: usize, c: f64) -> Result<Vec<C64>> {
    let q = qes_spectrum_paths(s, j, c)?;
    let scale = 1.0 + q.from_determinant.iter().map(|e| e.norm()).fold(0.0, f64::max);
    if q.max_deviation > 1e-9 * scale {
        return Err(Error::InvariantViolation(format!(
            "spectrum paths disagree by {:e}",
            q.max_deviation
        )));
    }
    Ok(q.from_determinant)
}

/// Both readings of the spectral condition on `(c, s, J)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ConditionII {
    /// `4c² + 2(2s+2J+1) + (2s-1)`.
    pub displayed_plus: f64,
    /// `4c² + 2(2s+2J+1) - (2s-1)`.
    pub displayed_minus: f64,
    /// `4(J+1)`.
    pub displayed_rhs: f64,
    /// `K3²/4 + K2 - 2σ` from the composed coefficients.
    pub derived_lhs: f64,
    /// `2(m+1)` with `m = J-1`.
    pub derived_rhs: f64,
}

pub fn condition_ii(s: f64, j: usize, c: f64) -> ConditionII {
    let jf = j as f64;
    let k = periodic_turbiner_coeffs(&TurbinerParams::new(s, j, c, re(0.0)));
    ConditionII {
        displayed_plus: 4.0 * c * c + 2.0 * (2.0 * s + 2.0 * jf + 1.0) + (2.0 * s - 1.0),
        displayed_minus: 4.0 * c * c + 2.0 * (2.0 * s + 2.0 * jf + 1.0) - (2.0 * s - 1.0),
        displayed_rhs: 4.0 * (jf + 1.0),
        derived_lhs: (k.k3 * k.k3 / 4.0 + k.k2 - 2.0 * k.sigma).re,
        derived_rhs: 2.0 * jf,
    }
}

/// Periodic coefficients of the Turbiner equation, obtained by composing
/// [`bhe_from_turbiner`] with [`bhe::pbhe_from_bhe`].
pub fn periodic_turbiner_coeffs(p: &TurbinerParams) -> PbheCoeffs {
    bhe::pbhe_from_bhe(&bhe_from_turbiner(p))
}

/// The coefficient set `(-1, -√2c/2, 2s+2J+1, √2E/4, -(2s-1)²/4)` in its
/// printed form, kept for comparison with [`periodic_turbiner_coeffs`].
pub fn periodic_turbiner_coeffs_displayed(p: &TurbinerParams) -> PbheCoeffs {
    let sigma = re((2.0 * p.s - 1.0) / 2.0);
    PbheCoeffs {
        k4: re(-1.0),
        k3: re(-SQRT_2 * p.c / 2.0),
        k2: re(2.0 * p.s + 2.0 * p.j as f64 + 1.0),
        k1: SQRT_2 * p.e / 4.0,
        k0: -sigma * sigma,
        sigma,
    }
}

/// Even polynomial `Σ_{k<J} (-1/4)^k P_k(E) / (k! Γ(k+2s)) x^{2k}`.
fn wave_poly(p: &TurbinerParams) -> Result<CPoly> {
    let polys = bender_dunne_polys(p.s, p.j, p.c, p.j);
    let pj = polys[p.j].eval(p.e);
    let scale = polys[p.j].eval_abs(p.e.norm()).max(1.0);
    if p.j == 0 || pj.norm() > 1e-9 * scale {
        return Err(Error::NonTerminatingSeries { e: p.e, residual: pj.norm() });
    }
    let g0 = statrs::function::gamma::gamma(2.0 * p.s);
    let mut c = vec![re(0.0); 2 * p.j - 1];
    let mut denom = g0;
    for k in 0..p.j {
        if k > 0 {
            denom *= k as f64 * (k as f64 - 1.0 + 2.0 * p.s);
        }
        c[2 * k] = polys[k].eval(p.e) * (-0.25f64).powi(k as i32) / denom;
    }
    Ok(CPoly::new(c))
}

/// `ψ(x) = e^{-x⁴/4 - cx²/4} x^{2s-1/2} Σ_k …` and its first two derivatives.
pub fn wavefunction_d2(p: &TurbinerParams, x: C64) -> Result<(C64, C64, C64)> {
    let mu = 2.0 * p.s - 0.5;
    if x.norm() == 0.0 && mu < 2.0 {
        return Err(Error::SingularPoint);
    }
    let t = wave_poly(p)?;
    let l = -x.powi(4) / 4.0 - p.c * x * x / 4.0 + mu * x.ln();
    let l1 = -x.powi(3) - p.c * x / 2.0 + mu / x;
    let l2 = -3.0 * x * x - p.c / 2.0 - mu / (x * x);
    let (v, v1, v2) = t.eval_d2(x);
    let e = l.exp();
    Ok((e * v, e * (l1 * v + v1), e * ((l2 + l1 * l1) * v + 2.0 * l1 * v1 + v2)))
}

pub fn wavefunction(p: &TurbinerParams, x: C64) -> Result<C64> {
    Ok(wavefunction_d2(p, x)?.0)
}

/// `H_c ψ - E ψ` at `x`.
pub fn hamiltonian_residual(p: &TurbinerParams, x: C64) -> Result<Residual> {
    let (v, _, v2) = wavefunction_d2(p, x)?;
    let s = p.s;
    let x2 = x * x;
    let terms = [
        -v2,
        (4.0 * s - 1.0) * (4.0 * s - 3.0) / (4.0 * x2) * v,
        -(4.0 * s + 4.0 * p.j as f64 - 2.0) * x2 * v,
        -p.c * x2 * x2 * v,
        x2 * x2 * x2 * v,
        -p.e * v,
    ];
    Ok(Residual { value: terms.iter().sum(), scale: terms.iter().map(|t| t.norm()).sum() })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identification_example() {
        let b = bhe_from_turbiner(&TurbinerParams::new(0.5, 1, 0.0, re(0.0)));
        assert_eq!(b, BheParams::real(0.0, 0.0, 2.0, 0.0));
        let b = bhe_from_turbiner(&TurbinerParams::new(0.3, 4, 1.2, re(0.7)));
        assert!((b.gamma - b.alpha - 2.0 - 2.0 * 3.0).norm() < 1e-14);
    }

    #[test]
    fn p2_at_c_zero() {
        let p = bender_dunne_polys(0.25, 3, 0.0, 2);
        let want = CPoly::from_real(&[-64.0 * 0.25, 0.0, 1.0]);
        assert!(p[2].sub(&want).max_abs_coeff() < 1e-13);
        assert!(p[2].eval(re(4.0)).norm() < 1e-13);
    }

    #[test]
    fn j_zero_has_no_spectrum() {
        assert_eq!(qes_spectrum(0.5, 0, 0.0), Err(Error::EmptySpectrum));
    }

    #[test]
    fn half_s_gives_zero_k0() {
        let k = periodic_turbiner_coeffs(&TurbinerParams::new(0.5, 2, 0.7, re(1.0)));
        assert_eq!(k.k0, -re(0.0) * re(0.0));
        assert_eq!(k.sigma, re(0.0));
    }
}
