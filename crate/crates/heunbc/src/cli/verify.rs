//! The acceptance criteria as one runnable suite, shared by `verify-all`
//! and the `acceptance` test target.

use crate::bhe::{self, BheParams, HautotSolution};
use crate::cpoly::exact::QPoly;
use crate::qes::{self, TurbinerParams};
use crate::quad::{self, ContourRule, FredholmSetup, CERT_TOL};
use crate::spectra::{self, Sign, SpectrumProblem};
use crate::weight;
use num_bigint::BigInt;
use num_complex::Complex64 as C64;
use num_rational::BigRational;
use serde::Serialize;
use std::f64::consts::{PI, SQRT_2};

pub const TOL_SPECTRUM: f64 = 1e-9;
pub const TOL_GAP: f64 = 1e-8;
pub const TOL_RESIDUAL: f64 = 1e-9;
pub const TOL_CIRCLE: f64 = 1e-8;
pub const TOL_RADIUS: f64 = 1e-10;
pub const TOL_HALFLINE: f64 = 1e-8;
pub const TOL_MOMENT: f64 = 1e-10;
pub const TOL_WEIGHT_BAND: f64 = 0.05;
pub const TOL_SELF_ADJOINT: f64 = 1e-10;
pub const TOL_SEGMENT: f64 = 1e-8;
pub const TOL_DIAG: f64 = 1e-6;
pub const TOL_DOUBLE: f64 = 1e-7;
pub const TOL_LAMBDA: f64 = 1e-7;
pub const TOL_PERTURBED: f64 = 1e-2;
pub const TOL_PDE: f64 = 1e-9;
pub const TOL_CONCOMITANT: f64 = 1e-9;
pub const TOL_BENDER_DUNNE: f64 = 1e-11;
pub const TOL_CROSS_SERIES: f64 = 1e-11;
pub const TOL_CROSS_MAP: f64 = 1e-12;
pub const TOL_CERTIFICATE: f64 = CERT_TOL;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Size {
    Full,
    Quick,
}

impl Size {
    fn pick<T>(self, full: T, quick: T) -> T {
        match self {
            Size::Full => full,
            Size::Quick => quick,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Outcome {
    pub id: u8,
    pub name: &'static str,
    pub pass: bool,
    /// Worst measured value of the headline statistic.
    pub measured: f64,
    pub tolerance: f64,
    pub details: Vec<String>,
}

impl Outcome {
    pub fn line(&self) -> String {
        format!(
            "{} criterion {:>2} {}: measured {:.3e}, tolerance {:.0e}",
            if self.pass { "PASS" } else { "FAIL" },
            self.id,
            self.name,
            self.measured,
            self.tolerance
        )
    }
}

/// Certificates of every integral reported by the suite.
#[derive(Clone, Debug, Default, Serialize)]
pub struct Certificates {
    pub entries: Vec<(String, f64)>,
}

impl Certificates {
    fn push(&mut self, label: String, c: f64) {
        self.entries.push((label, c));
    }
}

fn re(x: f64) -> C64 {
    C64::new(x, 0.0)
}

/// Deterministic low-discrepancy sample in `[0, 1)`.
pub fn quasi(i: usize, axis: usize) -> f64 {
    const G: [f64; 4] = [0.618_033_988_749_894_9, 0.414_213_562_373_095_1, 0.732_050_807_568_877_2, 0.236_067_977_499_789_7];
    ((i + 1) as f64 * G[axis % 4] + 0.5 * (axis / 4) as f64).fract()
}

/// Hausdorff distance between two root sets of equal size.
pub fn root_set_distance(a: &[C64], b: &[C64]) -> f64 {
    if a.len() != b.len() {
        return f64::INFINITY;
    }
    let one = |x: &[C64], y: &[C64]| {
        x.iter()
            .map(|p| y.iter().map(|q| (p - q).norm()).fold(f64::INFINITY, f64::min))
            .fold(0.0, f64::max)
    };
    one(a, b).max(one(b, a))
}

fn nan_max(a: f64, b: f64) -> f64 {
    if a.is_nan() || b.is_nan() {
        f64::NAN
    } else {
        a.max(b)
    }
}

fn spectrum_oracle(size: Size) -> Outcome {
    let (sets, nmax) = size.pick((20, 8), (5, 4));
    let mut worst = 0.0f64;
    let mut details = vec![];
    for i in 0..sets {
        let k3 = -4.0 + 8.0 * quasi(i, 0);
        let k0 = -0.01 - 0.99 * quasi(i, 1);
        let sign = if i % 2 == 0 { Sign::Plus } else { Sign::Minus };
        for n in 0..=nmax {
            let p = SpectrumProblem::with_k2_from_condition(n, re(k3), re(k0), sign);
            let det: Vec<C64> = match spectra::k1_spectrum(&p) {
                Ok(v) => v.iter().map(|e| e.k1).collect(),
                Err(e) => {
                    details.push(format!("K3={k3:.4} K0={k0:.4} n={n}: {e}"));
                    worst = f64::INFINITY;
                    continue;
                }
            };
            let oracle = bhe::bhe_from_pbhe(&p.coeffs(re(0.0)))
                .map_err(|e| e.to_string())
                .and_then(|b| bhe::termination_poly(n, b.alpha, b.beta).roots().map_err(|e| e.to_string()));
            match oracle {
                Ok(d) => {
                    let k1: Vec<C64> = d.iter().map(|d| -d / 2.0).collect();
                    worst = nan_max(worst, root_set_distance(&det, &k1));
                }
                Err(e) => {
                    details.push(format!("oracle failed at n={n}: {e}"));
                    worst = f64::INFINITY;
                }
            }
        }
    }
    details.push(format!("{} parameter sets, n = 0..={nmax}", sets));
    Outcome { id: 1, name: "spectrum oracle equivalence", pass: worst < TOL_SPECTRUM, measured: worst, tolerance: TOL_SPECTRUM, details }
}

fn reality(size: Size) -> Outcome {
    let nmax = size.pick(6, 3);
    let mut smallest_gap = f64::INFINITY;
    let mut worst_im = 0.0f64;
    let mut details = vec![];
    let mut ok = true;
    for k3 in [-8.0, -10.0, -12.0] {
        for k0 in [-0.01, -0.04, -0.09] {
            for sign in [Sign::Plus, Sign::Minus] {
                for n in 0..=nmax {
                    let p = SpectrumProblem::with_k2_from_condition(n, re(k3), re(k0), sign);
                    match spectra::k1_spectrum(&p) {
                        Ok(v) => {
                            let r: Vec<C64> = v.iter().map(|e| e.k1).collect();
                            for z in &r {
                                worst_im = worst_im.max(z.im.abs() / (1.0 + z.re.abs()));
                            }
                            smallest_gap = smallest_gap.min(spectra::min_gap(&r));
                        }
                        Err(e) => {
                            ok = false;
                            details.push(format!("K3={k3} K0={k0} {sign:?} n={n}: {e}"));
                        }
                    }
                }
            }
        }
    }
    details.push(format!("largest relative imaginary part {worst_im:.3e}"));
    let pass = ok && worst_im < 1e-9 && smallest_gap > TOL_GAP;
    Outcome { id: 2, name: "reality and distinctness", pass, measured: smallest_gap, tolerance: TOL_GAP, details }
}

/// Sample points in the annulus `0.4 ≤ |z| ≤ 1.6`.
fn annulus_points() -> Vec<C64> {
    (0..20).map(|j| C64::from_polar(0.4 + 1.2 * quasi(j, 2), 2.0 * PI * quasi(j, 3))).collect()
}

/// Sample points in the strip `-1 ≤ Re z ≤ 1`, `0 ≤ Im z < 2π`.
fn strip_points() -> Vec<C64> {
    (0..20).map(|j| C64::new(-1.0 + 2.0 * quasi(j, 0), 2.0 * PI * quasi(j, 1))).collect()
}

fn hautot_residuals(sol: &HautotSolution, pts: &[C64]) -> Result<f64, String> {
    let coeffs = bhe::pbhe_from_bhe(&sol.params);
    let mut worst = 0.0f64;
    for &z in pts {
        let a = bhe::bhe_residual_poly(&sol.params, &sol.poly, z).relative();
        let b = bhe::reversed_residual_poly(&sol.params, sol.m, &sol.reversed, z).map_err(|e| e.to_string())?.relative();
        let c = bhe::gen_bessel_residual(&coeffs, |x| bhe::gen_bessel_psi(sol, x), z).map_err(|e| e.to_string())?.relative();
        worst = nan_max(worst, nan_max(a, nan_max(b, c)));
    }
    Ok(worst)
}

fn residuals(size: Size) -> Outcome {
    let nmax = size.pick(6, 3);
    let pts = annulus_points();
    let strip = strip_points();
    let mut worst = 0.0f64;
    let mut count = 0;
    let mut details = vec![];
    let bhe_sets = [(re(0.3), re(0.7)), (re(1.5), re(-1.0)), (re(0.0), re(0.0)), (C64::new(0.4, 0.2), C64::new(-0.5, 0.3))];
    for &(alpha, beta) in &bhe_sets {
        for m in 0..=nmax {
            match bhe::hautot(m, alpha, beta) {
                Ok(sols) => {
                    for s in &sols {
                        count += 1;
                        match hautot_residuals(s, &pts) {
                            Ok(r) => worst = nan_max(worst, r),
                            Err(e) => {
                                worst = f64::INFINITY;
                                details.push(e);
                            }
                        }
                    }
                }
                Err(e) => {
                    worst = f64::INFINITY;
                    details.push(format!("hautot({m}, {alpha}, {beta}): {e}"));
                }
            }
        }
    }
    let problems = [
        (re(-8.0), re(-0.04), Sign::Plus),
        (re(-3.0), re(-0.25), Sign::Minus),
        (C64::new(1.0, 0.5), C64::new(-0.3, 0.1), Sign::Minus),
    ];
    for &(k3, k0, sign) in &problems {
        for n in 0..=nmax {
            let p = SpectrumProblem::with_k2_from_condition(n, k3, k0, sign);
            match spectra::family(&p) {
                Ok(fam) => {
                    for s in &fam {
                        count += 1;
                        for &z in &strip {
                            worst = nan_max(worst, spectra::pbhe_residual(&s.coeffs, s, z).relative());
                        }
                        match hautot_residuals(&s.hautot, &pts) {
                            Ok(r) => worst = nan_max(worst, r),
                            Err(e) => {
                                worst = f64::INFINITY;
                                details.push(e);
                            }
                        }
                    }
                }
                Err(e) => {
                    worst = f64::INFINITY;
                    details.push(format!("family n={n}: {e}"));
                }
            }
        }
    }
    details.push(format!("{count} eigen-solutions, 20 points each"));
    Outcome { id: 3, name: "ODE residuals", pass: worst < TOL_RESIDUAL, measured: worst, tolerance: TOL_RESIDUAL, details }
}

fn circle(size: Size, certs: &mut Certificates) -> Outcome {
    let nmax = size.pick(5, 3);
    let alpha = re(0.3);
    let mut worst_off = 0.0f64;
    let mut worst_dev = 0.0f64;
    let mut details = vec![];
    let mut ok = true;
    for beta in [0.0, 0.7] {
        for n in 0..=nmax {
            let runs = [1.0, 2.0].map(|r| {
                ContourRule::circle(r, quad::DEFAULT_N).and_then(|rule| quad::circle_orthogonality(n, alpha, re(beta), &rule))
            });
            match runs {
                [Ok(a), Ok(b)] => {
                    worst_off = nan_max(worst_off, nan_max(a.normalized_offdiag, b.normalized_offdiag));
                    let mass = a.diag_scale.iter().cloned().fold(0.0, f64::max);
                    let dev = a
                        .gram
                        .iter()
                        .flatten()
                        .zip(b.gram.iter().flatten())
                        .map(|(x, y)| (x - y).norm() / mass)
                        .fold(0.0, f64::max);
                    worst_dev = nan_max(worst_dev, dev);
                    if !(a.diag_nonzero && b.diag_nonzero) {
                        details.push(format!(
                            "n={n} beta={beta}: a diagonal entry vanishes (|G_vv| <= 1e-6 mass); normalized off-diagonals {:.3e} / {:.3e}",
                            a.normalized_offdiag, b.normalized_offdiag
                        ));
                    }
                    certs.push(format!("circle n={n} beta={beta} r=1"), a.certificate);
                    certs.push(format!("circle n={n} beta={beta} r=2"), b.certificate);
                }
                [a, b] => {
                    ok = false;
                    for e in [a.err(), b.err()].into_iter().flatten() {
                        details.push(format!("n={n} beta={beta}: {e}"));
                    }
                }
            }
        }
    }
    details.push(format!("largest radius-1 vs radius-2 deviation per unit radius-1 mass {worst_dev:.3e} (tolerance {TOL_RADIUS:.0e})"));
    let pass = ok && worst_off < TOL_CIRCLE && worst_dev < TOL_RADIUS;
    Outcome { id: 4, name: "circle orthogonality", pass, measured: worst_off, tolerance: TOL_CIRCLE, details }
}

fn halfline(size: Size, certs: &mut Certificates) -> Outcome {
    let mmax = size.pick(5, 3);
    let mut worst = 0.0f64;
    let mut details = vec![];
    let mut ok = true;
    for alpha in [0.0, 1.0] {
        for beta in [0.0, 1.0] {
            for m in 0..=mmax {
                match quad::halfline_orthogonality(m, alpha, beta) {
                    Ok(r) => {
                        worst = nan_max(worst, r.normalized_offdiag);
                        ok &= r.diag_nonzero;
                        certs.push(format!("halfline m={m} alpha={alpha} beta={beta}"), r.certificate);
                    }
                    Err(e) => {
                        ok = false;
                        details.push(format!("m={m} alpha={alpha} beta={beta}: {e}"));
                    }
                }
            }
        }
    }
    let moment = gaussian_moment_deviation();
    details.push(format!("m=1 Gram vs Gaussian moments: {moment:.3e} (tolerance {TOL_MOMENT:.0e})"));
    let pass = ok && worst < TOL_HALFLINE && moment < TOL_MOMENT;
    Outcome { id: 5, name: "half-line orthogonality", pass, measured: worst, tolerance: TOL_HALFLINE, details }
}

/// `∫_0^∞ (1 + a t)(1 + b t) e^{-t²} dt` from the moments `√π/2, 1/2, √π/4`.
fn gaussian_moment_deviation() -> f64 {
    let sols = match bhe::hautot(1, re(0.0), re(0.0)) {
        Ok(s) => s,
        Err(_) => return f64::INFINITY,
    };
    let rep = match quad::halfline_orthogonality(1, 0.0, 0.0) {
        Ok(r) => r,
        Err(_) => return f64::INFINITY,
    };
    let slopes: Vec<f64> = sols.iter().map(|s| s.poly.coeffs()[1].re.signum() * SQRT_2).collect();
    let slope_err = sols.iter().zip(&slopes).map(|(s, a)| (s.poly.coeffs()[1] - a).norm()).fold(0.0, f64::max);
    let sp = PI.sqrt();
    let mut dev = slope_err;
    for (i, a) in slopes.iter().enumerate() {
        for (j, b) in slopes.iter().enumerate() {
            let want = sp / 2.0 + (a + b) / 2.0 + a * b * sp / 4.0;
            dev = dev.max((rep.gram[i][j] - want).norm());
        }
    }
    dev
}

fn weight_convergence(size: Size) -> Outcome {
    let mut worst = 0.0f64;
    let mut details = vec![];
    let mut far = vec![];
    for n in 0..=3 {
        for alpha in [0.1, 0.7] {
            for beta in [0.0, 1.0, 2.0] {
                match weight::convergence_diagnostic(n, re(alpha), re(beta), 200) {
                    Ok(d) => {
                        let dev = (d / SQRT_2 - 1.0).abs();
                        worst = nan_max(worst, dev);
                        if dev >= TOL_WEIGHT_BAND {
                            details.push(format!("n={n} alpha={alpha} beta={beta}: diagnostic {d:.5} ({:.1}% off)", 100.0 * dev));
                        }
                    }
                    Err(e) => {
                        worst = f64::INFINITY;
                        details.push(format!("n={n} alpha={alpha} beta={beta}: {e}"));
                    }
                }
                if size == Size::Full {
                    if let Ok(d) = weight::convergence_diagnostic(n, re(alpha), re(beta), 2000) {
                        far.push((d / SQRT_2 - 1.0).abs());
                    }
                }
            }
        }
    }
    if !far.is_empty() {
        details.push(format!("largest deviation at k=2000: {:.3}%", 100.0 * far.iter().cloned().fold(0.0, f64::max)));
    }
    let mut sa = 0.0f64;
    for n in 0..=3 {
        for alpha in [0.1, 0.7] {
            match weight::weight_coeffs(n, re(alpha), re(0.0), 80) {
                Ok(w) => {
                    for j in 0..32 {
                        let z = C64::from_polar(1.0, 2.0 * PI * j as f64 / 32.0);
                        sa = nan_max(sa, weight::self_adjoint_residual(&w, z).norm());
                    }
                }
                Err(e) => {
                    sa = f64::INFINITY;
                    details.push(format!("weight n={n} alpha={alpha}: {e}"));
                }
            }
        }
    }
    details.push(format!("self-adjoint residual on |z|=1 at kmax=80: {sa:.3e} (tolerance {TOL_SELF_ADJOINT:.0e})"));
    let pass = worst < TOL_WEIGHT_BAND && sa < TOL_SELF_ADJOINT;
    Outcome { id: 6, name: "weight convergence", pass, measured: worst, tolerance: TOL_WEIGHT_BAND, details }
}

/// `(n, K3, σ)` with `2σ ∈ ℤ` and nonvanishing diagonals.
pub const SEGMENT_CONFIGS: [(usize, f64, f64); 4] = [(1, -6.0, -1.0), (2, -8.0, -1.5), (3, -8.0, -2.0), (4, -10.0, -2.5)];

fn segments(size: Size, certs: &mut Certificates) -> Outcome {
    let configs = &SEGMENT_CONFIGS[..size.pick(4, 2)];
    let mut worst = 0.0f64;
    let mut ok = true;
    let mut details = vec![];
    for &(n, k3, sigma) in configs {
        let p = quad::segment_problem(n, k3, sigma);
        let single = ContourRule::vertical(re(0.0), quad::DEFAULT_N).and_then(|r| quad::single_orthogonality(&p, &r));
        match single {
            Ok(r) => {
                worst = nan_max(worst, r.normalized_offdiag);
                ok &= r.diag_nonzero;
                if !r.diag_nonzero {
                    details.push(format!("single n={n}: vanishing diagonal"));
                }
                certs.push(format!("single n={n} sigma={sigma}"), r.certificate);
            }
            Err(e) => {
                ok = false;
                details.push(format!("single n={n}: {e}"));
            }
        }
        let sizes: &[usize] = match size {
            Size::Full => &[quad::DEFAULT_N, 4096],
            Size::Quick => &[quad::DEFAULT_N],
        };
        for &nn in sizes {
            let shifted = ContourRule::vertical(re(PI), nn).and_then(|r| quad::shifted_orthogonality(&p, &r, None));
            match shifted {
                Ok(r) => {
                    if nn == quad::DEFAULT_N {
                        worst = nan_max(worst, r.normalized_offdiag);
                        ok &= r.diag_nonzero;
                        certs.push(format!("shifted n={n} sigma={sigma} N={nn}"), r.certificate);
                    }
                    details.push(format!(
                        "shifted n={n} N={nn}: offdiag {:.3e}, diagonals nonzero {}, certificate {:.3e}",
                        r.normalized_offdiag, r.diag_nonzero, r.certificate
                    ));
                }
                Err(e) => {
                    ok &= nn != quad::DEFAULT_N;
                    details.push(format!("shifted n={n} N={nn}: {e}"));
                }
            }
        }
    }
    Outcome { id: 7, name: "single and shifted orthogonality", pass: ok && worst < TOL_SEGMENT, measured: worst, tolerance: TOL_SEGMENT, details }
}

/// `(n, σ_n, m, σ_m)` with `K3 = -8` shared.
pub const DOUBLE_CONFIGS: [(usize, f64, usize, f64); 3] = [(1, -1.0, 2, -2.0), (2, -1.5, 3, -2.5), (3, -2.0, 3, -2.0)];

fn double(size: Size, certs: &mut Certificates) -> Outcome {
    let configs = &DOUBLE_CONFIGS[..size.pick(3, 1)];
    let mut worst = 0.0f64;
    let mut details = vec![];
    let mut ok = true;
    for &(n, sn, m, sm) in configs {
        let pn = quad::segment_problem(n, -8.0, sn);
        let pm = quad::segment_problem(m, -8.0, sm);
        match quad::double_orthogonality(&pn, &pm, 128, None) {
            Ok(r) => {
                worst = nan_max(worst, r.max_normalized_offdiag);
                let diag_max = (0..r.entries.len()).map(|a| r.entries[a][a].norm()).fold(0.0, f64::max);
                details.push(format!(
                    "(n,m)=({n},{m}): offdiag {:.3e}, largest |T_diag| {:.3e}, diagonals nonzero {}, {} bits",
                    r.max_normalized_offdiag, diag_max, r.diag_nonzero, r.precision_bits
                ));
                certs.push(format!("double ({n},{m})"), r.certificate);
            }
            Err(e) => {
                ok = false;
                details.push(format!("(n,m)=({n},{m}): {e}"));
                continue;
            }
        }
        if size == Size::Full {
            if let Ok(r) = quad::double_orthogonality(&pn, &pm, 4096, None) {
                let rel = (0..r.entries.len()).map(|a| r.entries[a][a].norm() / r.diag_scale[a]).fold(0.0, f64::max);
                details.push(format!(
                    "(n,m)=({n},{m}) at N=4096: largest |T_diag| per unit mass {rel:.3e}, offdiag {:.3e}, certificate {:.3e}",
                    r.max_normalized_offdiag, r.certificate
                ));
            }
        }
    }
    Outcome { id: 8, name: "double orthogonality", pass: ok && worst < TOL_DOUBLE, measured: worst, tolerance: TOL_DOUBLE, details }
}

fn fredholm(size: Size, certs: &mut Certificates) -> Outcome {
    let nmax = size.pick(2, 1);
    let mut worst = 0.0f64;
    let mut perturbed_min = f64::INFINITY;
    let mut pde = 0.0f64;
    let mut conc = 0.0f64;
    let mut details = vec![];
    let mut ok = true;
    let grid: Vec<f64> = (0..8).map(|j| 2.0 * PI * j as f64 / 8.0).collect();
    for n in 0..=nmax {
        for a in [-0.5, 0.5] {
            let k1s = match FredholmSetup::consistent_k1(n, a) {
                Ok(None) => vec![re(0.7)],
                Ok(Some(v)) if v.is_empty() => {
                    ok = false;
                    details.push(format!("n={n} a={a}: no self-consistent K1 (the determinant is a nonzero constant)"));
                    continue;
                }
                Ok(Some(v)) => v,
                Err(e) => {
                    ok = false;
                    details.push(format!("n={n} a={a}: {e}"));
                    continue;
                }
            };
            for k1 in k1s {
                let run = FredholmSetup::new(n, a, k1).and_then(|s| Ok((s, s.solution()?)));
                let (setup, sol) = match run {
                    Ok(v) => v,
                    Err(e) => {
                        ok = false;
                        details.push(format!("n={n} a={a} K1={k1:.4}: {e}"));
                        continue;
                    }
                };
                let label = format!("n={n} sigma={} K1={k1:.4}", setup.sigma.re);
                let (ac, c) = (re(a), setup.kernel_c());
                for &x in &grid {
                    for &s in &grid {
                        let r = quad::kernel_pde_residual(&setup.coeffs(), re(x + 0.1), C64::new(s, 0.05), ac, c);
                        pde = nan_max(pde, r.map(|r| r.relative()).unwrap_or(f64::INFINITY));
                    }
                }
                conc = nan_max(conc, quad::concomitant_check(&sol, ac, c, &grid).unwrap_or(f64::INFINITY));
                match quad::fredholm_lambda(&sol, ac, c, 16, quad::DEFAULT_N) {
                    Ok(r) => {
                        worst = nan_max(worst, r.variation);
                        certs.push(format!("fredholm {label}"), r.certificate);
                        let bumped = quad::fredholm_lambda(&sol, ac, c - 1e-2, 16, quad::DEFAULT_N);
                        let pv = bumped.as_ref().map(|b| b.variation).unwrap_or(f64::INFINITY);
                        perturbed_min = perturbed_min.min(pv);
                        details.push(format!(
                            "{label}: lambda {:.12} {:+.3e}i, variation {:.3e}, perturbed variation {:.3e}",
                            r.lambda.re, r.lambda.im, r.variation, pv
                        ));
                    }
                    Err(e) => {
                        ok = false;
                        details.push(format!("{label}: {e}"));
                    }
                }
            }
        }
    }
    details.push(format!("kernel PDE residual {pde:.3e}, concomitant defect {conc:.3e}"));
    let pass = ok && worst < TOL_LAMBDA && perturbed_min > TOL_PERTURBED && pde < TOL_PDE && conc < TOL_CONCOMITANT;
    // a configuration without a usable eigen-pair has no finite variation
    let measured = if ok { worst } else { f64::INFINITY };
    Outcome { id: 9, name: "Fredholm eigen-relation", pass, measured, tolerance: TOL_LAMBDA, details }
}

/// Displayed `P_0 … P_5` at `J = 3`.
pub fn displayed_bender_dunne(k: usize, e: f64, s: f64, c: f64) -> f64 {
    let r = SQRT_2;
    let p3 = || {
        e.powi(3)
            + (3.0 * r / 4.0 * c * c - 6.0 * c - 6.0 * c * s) * e * e
            + (8.0 * c * c + 3.0 / 8.0 * c.powi(4) - 128.0 * s - 3.0 * r * c.powi(3) * s - 32.0 + 24.0 * c * c * s
                + 12.0 * c * c * s * s
                - 3.0 * r * c.powi(3))
                * e
            - 8.0 * c.powi(3) * s.powi(3)
            + (256.0 * c - 24.0 * c.powi(3) + 3.0 * r * c.powi(4)) * s * s
            + (320.0 * c - 32.0 * r * c * c - 16.0 * c.powi(3) + 6.0 * r * c.powi(4) - 0.75 * c.powi(5)) * s
            - 8.0 * r * c * c
            + 2.0 * r * c.powi(4)
            - 0.75 * c.powi(5)
            + r / 32.0 * c.powi(6)
    };
    match k {
        0 => 1.0,
        1 => e - 2.0 * c * s + r / 4.0 * c * c,
        2 => {
            e * e + (r / 2.0 * c * c - 2.0 * c - 4.0 * c * s) * e + 4.0 * c * c * s * s + (-r * c.powi(3) + 4.0 * c * c - 64.0) * s
                + c.powi(4) / 8.0
                - r / 2.0 * c.powi(3)
        }
        3 => p3(),
        4 => (e - 6.0 * c - 2.0 * c * s + r / 4.0 * c * c) * p3(),
        5 => {
            let q2 = e * e + (-4.0 * c * s + r / 2.0 * c * c - 14.0 * c) * e + 4.0 * c * c * s * s
                + (28.0 * c * c + 128.0 - r * c.powi(3)) * s
                + c.powi(4) / 8.0
                - 7.0 * r / 2.0 * c.powi(3)
                + 48.0 * c * c
                + 192.0;
            q2 * p3()
        }
        _ => f64::NAN,
    }
}

fn ratio(p: i64, q: i64) -> BigRational {
    BigRational::new(BigInt::from(p), BigInt::from(q))
}

fn parity_ok(p: &QPoly, k: usize) -> bool {
    p.coeffs().iter().enumerate().all(|(j, c)| (k - j) % 2 == 0 || c.is_zero())
}

fn bender_dunne(size: Size) -> Outcome {
    let mut worst = 0.0f64;
    let mut details = vec![];
    for i in 0..5 {
        let e = -6.0 + 12.0 * quasi(i, 0);
        let s = 0.3 + 1.7 * quasi(i, 1);
        let c = -2.0 + 4.0 * quasi(i, 2);
        let ps = qes::bender_dunne_polys(s, 3, c, 5);
        for (k, p) in ps.iter().enumerate() {
            let want = displayed_bender_dunne(k, e, s, c);
            worst = nan_max(worst, (p.eval(re(e)).re - want).abs() / want.abs());
        }
    }
    let mut factor_ok = true;
    let jmax = size.pick(4, 3);
    for j in 1..=jmax {
        for c in [0, 1, 2] {
            for s in [ratio(1, 2), ratio(3, 4)] {
                for (n, (_, exact)) in qes::factorization_check_exact(&s, j, &BigRational::from_integer(c.into()), 4).iter().enumerate() {
                    if !exact {
                        factor_ok = false;
                        details.push(format!("P_{} / P_{j} has a remainder at c={c}, s={s}", j + n + 1));
                    }
                }
            }
        }
    }
    let mut parity = true;
    for j in 1..=4 {
        for s in [ratio(1, 2), ratio(3, 4)] {
            for (k, p) in qes::bender_dunne_polys_exact(&s, j, &BigRational::from_integer(0.into()), 8).iter().enumerate() {
                parity &= parity_ok(p, k);
            }
        }
    }
    details.push(format!("exact factorization for J<=4, n<=4, c in {{0,1,2}}: {factor_ok}; c=0 parity: {parity}"));
    Outcome {
        id: 10,
        name: "Bender-Dunne reproduction",
        pass: worst < TOL_BENDER_DUNNE && factor_ok && parity,
        measured: worst,
        tolerance: TOL_BENDER_DUNNE,
        details,
    }
}

fn max_param_dev(a: &BheParams, b: &BheParams) -> f64 {
    [(a.alpha, b.alpha), (a.beta, b.beta), (a.gamma, b.gamma), (a.delta, b.delta)]
        .iter()
        .map(|(x, y)| (x - y).norm() / x.norm().max(1.0))
        .fold(0.0, f64::max)
}

fn cross_map() -> Outcome {
    let mut worst = 0.0f64;
    let mut map = 0.0f64;
    let mut details = vec![];
    for i in 0..8 {
        let p = TurbinerParams::new(0.3 + 1.7 * quasi(i, 1), 1 + i % 5, -2.0 + 4.0 * quasi(i, 2), re(-6.0 + 12.0 * quasi(i, 0)));
        let b = qes::bhe_from_turbiner(&p);
        match bhe::series_coeffs(&b, 12) {
            Ok(a) => {
                let ps = qes::bender_dunne_polys(p.s, p.j, p.c, 12);
                for (k, (ak, pk)) in a.iter().zip(&ps).enumerate() {
                    let v = (-SQRT_2 / 4.0).powi(k as i32) * pk.eval(p.e);
                    worst = nan_max(worst, (ak - v).norm() / ak.norm().max(v.norm()));
                }
            }
            Err(e) => {
                worst = f64::INFINITY;
                details.push(e.to_string());
            }
        }
        match bhe::bhe_from_pbhe(&qes::periodic_turbiner_coeffs(&p)) {
            Ok(back) => map = nan_max(map, max_param_dev(&back, &b)),
            Err(e) => {
                map = f64::INFINITY;
                details.push(e.to_string());
            }
        }
    }
    details.push(format!("composed periodic map vs direct identification: {map:.3e} (tolerance {TOL_CROSS_MAP:.0e})"));
    Outcome {
        id: 11,
        name: "cross-map consistency",
        pass: worst < TOL_CROSS_SERIES && map < TOL_CROSS_MAP,
        measured: worst,
        tolerance: TOL_CROSS_SERIES,
        details,
    }
}

fn certificates(certs: &Certificates) -> Outcome {
    let worst = certs.entries.iter().map(|e| e.1).fold(0.0, nan_max);
    let details = certs
        .entries
        .iter()
        .filter(|e| !(e.1 < TOL_CERTIFICATE))
        .map(|(l, c)| format!("{l}: {c:.3e}"))
        .chain(std::iter::once(format!("{} integrals checked", certs.entries.len())))
        .collect();
    Outcome { id: 12, name: "quadrature certificate", pass: worst < TOL_CERTIFICATE, measured: worst, tolerance: TOL_CERTIFICATE, details }
}

/// Runs one criterion by number; quadrature criteria add to `certs`.
pub fn run_one(id: u8, size: Size, certs: &mut Certificates) -> Option<Outcome> {
    Some(match id {
        1 => spectrum_oracle(size),
        2 => reality(size),
        3 => residuals(size),
        4 => circle(size, certs),
        5 => halfline(size, certs),
        6 => weight_convergence(size),
        7 => segments(size, certs),
        8 => double(size, certs),
        9 => fredholm(size, certs),
        10 => bender_dunne(size),
        11 => cross_map(),
        12 => certificates(certs),
        _ => return None,
    })
}

/// All twelve criteria in order, calling `each` as soon as one finishes.
pub fn run_all<F: FnMut(&Outcome)>(size: Size, mut each: F) -> Vec<Outcome> {
    let mut certs = Certificates::default();
    (1..=12)
        .filter_map(|id| {
            let o = run_one(id, size, &mut certs)?;
            each(&o);
            Some(o)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quasi_in_unit_interval() {
        for i in 0..100 {
            for a in 0..6 {
                let q = quasi(i, a);
                assert!((0.0..1.0).contains(&q));
            }
        }
    }

    #[test]
    fn displayed_p2_at_c_zero() {
        assert_eq!(displayed_bender_dunne(2, 3.0, 0.25, 0.0), 9.0 - 16.0);
    }

    #[test]
    fn root_set_distance_is_symmetric() {
        let a = [re(1.0), re(2.0)];
        let b = [re(2.0), re(1.0 + 1e-3)];
        assert!((root_set_distance(&a, &b) - 1e-3).abs() < 1e-12);
        assert_eq!(root_set_distance(&a, &b[..1]), f64::INFINITY);
    }
}
