use super::mp::{self, MpC};
use super::{adaptive_vec, build_report, gram_from_values, normalized_offdiag, ContourRule, OrthReport, CERT_TOL};
use crate::bhe::{hautot, HautotSolution};
use crate::error::{Error, Result};
use crate::spectra::{family, BhSolution, Sign, SpectrumProblem};
use crate::weight::{degenerate_index, weight_coeffs, WeightSeries};
use num_complex::Complex64 as C64;
use rayon::prelude::*;
use rug::Float;
use std::f64::consts::{LN_2, PI};

fn simple_indices(sols: &[HautotSolution]) -> (Vec<usize>, Vec<usize>) {
    let keep = (0..sols.len()).filter(|&i| sols[i].multiplicity == 1).collect();
    let skip = (0..sols.len()).filter(|&i| sols[i].multiplicity > 1).collect();
    (keep, skip)
}

/// Gram matrix on the rule and on its doubling, sharing node values
/// (the N-point nodes are the even nodes of the 2N rule).
fn gram_pair<F, H>(fs: &[F], h: H, rule: &ContourRule) -> Result<(Vec<Vec<C64>>, Vec<Vec<C64>>, Vec<Vec<f64>>)>
where
    F: Fn(C64) -> C64 + Sync,
    H: Fn(C64) -> C64 + Sync,
{
    let r2 = rule.doubled();
    let nodes = r2.nodes();
    let vals: Vec<Vec<C64>> = fs
        .iter()
        .map(|f| nodes.par_iter().map(|&(z, _)| f(z)).collect())
        .collect();
    let w2: Vec<C64> = nodes.iter().map(|&(z, w)| w * h(z)).collect();
    for (j, w) in w2.iter().enumerate() {
        if !w.is_finite() || vals.iter().any(|v| !v[j].is_finite()) {
            return Err(Error::NonFiniteNode { index: j });
        }
    }
    let (g2, m2) = gram_from_values(&vals, &w2);
    let vals1: Vec<Vec<C64>> = vals.iter().map(|v| v.iter().step_by(2).cloned().collect()).collect();
    let w1: Vec<C64> = w2.iter().step_by(2).map(|w| w * 2.0).collect();
    let (g1, _) = gram_from_values(&vals1, &w1);
    Ok((g1, g2, m2))
}

/// Weight truncation used by [`circle_orthogonality`]: large enough that the
/// tail is negligible on the contour, and below any vanishing divisor.
pub fn circle_weight(n: usize, alpha: C64, beta: C64, radius: f64, nodes: usize) -> Result<(WeightSeries, bool)> {
    let need = 2 * n + 1;
    let cap = nodes.min(400);
    let mut kmax = need.max(16).min(cap);
    let mut truncated = false;
    if let Some(k) = degenerate_index(n, alpha, cap) {
        if k <= need {
            return Err(Error::DegenerateWeight { k });
        }
        kmax = kmax.min(k - 1);
        truncated = true;
    }
    let mut w = weight_coeffs(n, alpha, beta, kmax)?;
    while !truncated && w.tail_bound(radius) > 1e-14 && kmax < cap {
        kmax = (kmax * 2).min(cap);
        w = weight_coeffs(n, alpha, beta, kmax)?;
    }
    Ok((w, truncated))
}

/// `G_μν = ∮ Y_μ(t) Y_ν(t) ρ_n(t) dt` for an explicit weight series.
pub fn circle_orthogonality_with(sols: &[HautotSolution], w: &WeightSeries, rule: &ContourRule) -> Result<OrthReport> {
    let (keep, skipped) = simple_indices(sols);
    let ys: Vec<_> = keep.iter().map(|&i| sols[i].reversed.clone()).collect();
    let fs: Vec<_> = ys.iter().map(|y| move |t: C64| y.eval(t)).collect();
    let (g1, g2, m2) = gram_pair(&fs, |t| w.partial_sum(t), rule)?;
    let mut notes = vec![];
    if !skipped.is_empty() {
        notes.push(format!("skipped repeated eigenvalue indices {skipped:?}"));
    }
    Ok(build_report(g1, &g2, &m2, Some(*rule), skipped, notes))
}

pub fn circle_orthogonality(n: usize, alpha: C64, beta: C64, rule: &ContourRule) -> Result<OrthReport> {
    let sols = hautot(n, alpha, beta)?;
    let radius = match rule.kind {
        super::ContourKind::Circle { radius } => radius,
        _ => 1.0,
    };
    let (w, truncated) = circle_weight(n, alpha, beta, radius, rule.n)?;
    let mut rep = circle_orthogonality_with(&sols, &w, rule)?;
    if truncated {
        rep.notes.push(format!(
            "weight truncated at k = {} below a vanishing recursion divisor; the pairing only uses a_1..a_{}",
            w.kmax,
            2 * n + 1
        ));
    }
    rep.notes.push(format!("weight kmax = {}, tail bound on contour = {:e}", w.kmax, w.tail_bound(radius)));
    Ok(rep)
}

/// `G_μν = ∫_0^∞ t^α e^{-βt-t²} P_μ(t) P_ν(t) dt`.
pub fn halfline_orthogonality(m: usize, alpha: f64, beta: f64) -> Result<OrthReport> {
    if alpha <= -1.0 {
        return Err(Error::NonIntegrable { alpha });
    }
    let sols = hautot(m, C64::new(alpha, 0.0), C64::new(beta, 0.0))?;
    let (keep, skipped) = simple_indices(&sols);
    let ps: Vec<_> = keep.iter().map(|&i| sols[i].poly.clone()).collect();
    let cmax = ps.iter().map(|p| p.max_abs_coeff()).fold(1.0, f64::max);
    let ln_w = |t: f64| alpha * t.ln() - beta * t - t * t;
    let mut upper = 1.0;
    while ln_w(upper) + 2.0 * (m as f64) * (1.0 + upper).ln() + 2.0 * cmax.ln() > (1e-18f64).ln() {
        upper += 0.5;
    }
    let k = ps.len();
    let pairs: Vec<(usize, usize)> = (0..k).flat_map(|a| (a..k).map(move |b| (a, b))).collect();
    let f = |t: f64| {
        let w = ln_w(t).exp();
        let v: Vec<C64> = ps.iter().map(|p| p.eval(C64::new(t, 0.0))).collect();
        pairs.iter().map(|&(a, b)| v[a] * v[b] * w).collect::<Vec<_>>()
    };
    let r = adaptive_vec(f, 0.0, upper, pairs.len(), 1e-15);
    let mut g = vec![vec![C64::new(0.0, 0.0); k]; k];
    let mut s = vec![vec![0.0; k]; k];
    let mut cert = 0.0f64;
    for (idx, &(a, b)) in pairs.iter().enumerate() {
        g[a][b] = r.value[idx];
        g[b][a] = r.value[idx];
        s[a][b] = r.scale[idx];
        s[b][a] = r.scale[idx];
        if r.scale[idx] > 0.0 {
            cert = cert.max(r.error[idx] / r.scale[idx]);
        }
    }
    let diag_scale: Vec<f64> = (0..k).map(|a| s[a][a]).collect();
    Ok(OrthReport {
        normalized_offdiag: normalized_offdiag(&g),
        diag_nonzero: (0..k).all(|a| g[a][a].norm() > 1e-6 * diag_scale[a]),
        gram: g,
        rule: None,
        diag_scale,
        certificate: cert,
        skipped,
        asymmetry: 0.0,
        notes: vec![format!("integrated on [0, {upper}] with adaptive 20/40-point Gauss-Legendre panels")],
    })
}

fn is_half_integer_multiple(sigma: C64) -> bool {
    let t = 2.0 * sigma;
    t.im.abs() < 1e-12 && (t.re - t.re.round()).abs() < 1e-12
}

/// Hypotheses for the segment orthogonality: K3, K2, K0 real negative,
/// `1 ± 2√(-K0) > 0` with the problem's sign, and `2σ ∈ ℤ`.
pub fn check_segment_hypotheses(problem: &SpectrumProblem) -> Result<()> {
    let real_neg = |x: C64| x.im.abs() < 1e-14 && x.re < 0.0;
    if !(real_neg(problem.k3) && real_neg(problem.k2) && real_neg(problem.k0)) {
        return Err(Error::Hypothesis("K3, K2, K0 must be real and negative".into()));
    }
    let root = (-problem.k0).sqrt().re;
    if 1.0 + problem.sign.value() * 2.0 * root <= 0.0 {
        return Err(Error::Hypothesis("1 ± 2√(-K0) must be positive".into()));
    }
    let sigma = problem.sigma();
    if !is_half_integer_multiple(sigma) {
        return Err(Error::NonPeriodic { two_sigma: 2.0 * sigma });
    }
    Ok(())
}

fn simple_family(problem: &SpectrumProblem) -> Result<(Vec<BhSolution>, Vec<usize>)> {
    let fam = family(problem)?;
    let skipped: Vec<usize> = fam.iter().filter(|s| s.pair.multiplicity > 1).map(|s| s.pair.nu).collect();
    Ok((fam.into_iter().filter(|s| s.pair.multiplicity == 1).collect(), skipped))
}

/// `G_μν = ∫_0^{2πi} BH_μ BH_ν e^z dz` in double precision.
pub fn single_orthogonality(problem: &SpectrumProblem, rule: &ContourRule) -> Result<OrthReport> {
    check_segment_hypotheses(problem)?;
    let (fam, skipped) = simple_family(problem)?;
    let fs: Vec<_> = fam.iter().map(|s| move |z: C64| s.value(z)).collect();
    let (g1, g2, m2) = gram_pair(&fs, |z| z.exp(), rule)?;
    Ok(build_report(g1, &g2, &m2, Some(*rule), skipped, vec![]))
}

/// Working precision for products of two solutions on `Re z = base`.
pub fn segment_precision(fam: &[BhSolution], base: f64) -> u32 {
    let e = fam.iter().map(|s| mp::max_exponent(s, base, 2048)).fold(0.0, f64::max);
    (53.0 + 96.0 + (2.0 * e.max(0.0) + base.abs() + 8.0) / LN_2).ceil() as u32
}

struct MpNodes {
    z: Vec<MpC>,
    ez: Vec<MpC>,
    w: MpC,
}

fn mp_nodes(prec: u32, base_is_pi: bool, n2: usize) -> MpNodes {
    let z: Vec<MpC> = (0..n2).map(|j| mp::vertical_node(prec, base_is_pi, 0.0, j, n2)).collect();
    let ez = z.par_iter().map(|z| z.exp()).collect();
    let two_pi = Float::with_val(prec, rug::float::Constant::Pi) * 2u32 / n2 as u32;
    MpNodes { z, ez, w: MpC { re: Float::new(prec), im: two_pi } }
}

fn mp_values(fam: &[BhSolution], nodes: &MpNodes) -> Vec<Vec<MpC>> {
    fam.iter().map(|s| nodes.z.par_iter().map(|z| mp::bh_value(s, z)).collect()).collect()
}

fn ln_ratio(num: &MpC, den_ln: f64) -> f64 {
    (num.ln_abs() - den_ln).exp()
}

/// Per-pair sums `Σ_j w h_j f_a f_b` on the N- and 2N-point rules plus the
/// log of the absolute mass at 2N.
fn mp_pair_sums(vals: &[Vec<MpC>], h: &[MpC], w: &MpC, a: usize, b: usize) -> (MpC, MpC, f64) {
    let p = w.prec();
    let mut s1 = MpC::zero(p);
    let mut s2 = MpC::zero(p);
    let mut mass = Float::new(p);
    for j in 0..h.len() {
        let t = vals[a][j].mul(&vals[b][j]).mul(&h[j]);
        let m = Float::with_val(p, t.re.clone().square() + t.im.clone().square()).sqrt();
        mass += m;
        if j % 2 == 0 {
            s1 = s1.add(&t);
        }
        s2 = s2.add(&t);
    }
    let two = MpC::from_c64(p, C64::new(2.0, 0.0));
    (s1.mul(w).mul(&two), s2.mul(w), Float::with_val(p, mass * &w.im).ln().to_f64())
}

/// `G_μν = ∫_π^{π+2πi} BH_μ BH_ν e^z dz`, evaluated in multiprecision.
///
/// `diag_scale` reports the absolute mass rescaled to double-precision units
/// (`mass · 2^{53-prec}`); `diag_nonzero` and the certificate use it.
pub fn shifted_orthogonality(problem: &SpectrumProblem, rule: &ContourRule, prec: Option<u32>) -> Result<OrthReport> {
    check_segment_hypotheses(problem)?;
    let (fam, skipped) = simple_family(problem)?;
    let prec = prec.unwrap_or_else(|| segment_precision(&fam, PI));
    let nodes = mp_nodes(prec, true, 2 * rule.n);
    let vals = mp_values(&fam, &nodes);
    let k = fam.len();
    let mut g = vec![vec![C64::new(0.0, 0.0); k]; k];
    let mut cert = 0.0f64;
    let mut diag_scale = vec![0.0; k];
    let shift = (prec as f64 - 53.0) * LN_2;
    for a in 0..k {
        for b in a..k {
            let (s1, s2, ln_mass) = mp_pair_sums(&vals, &nodes.ez, &nodes.w, a, b);
            let v = s1.to_c64();
            g[a][b] = v;
            g[b][a] = v;
            let ln_eff = ln_mass - shift;
            cert = cert.max(ln_ratio(&s1.sub(&s2), ln_eff));
            if a == b {
                diag_scale[a] = ln_eff.exp();
            }
        }
    }
    let rule = ContourRule::vertical(C64::new(PI, 0.0), rule.n)?;
    Ok(OrthReport {
        normalized_offdiag: normalized_offdiag(&g),
        diag_nonzero: (0..k).all(|a| g[a][a].norm() > 1e-6 * diag_scale[a]),
        gram: g,
        rule: Some(rule),
        diag_scale,
        certificate: cert,
        skipped,
        asymmetry: 0.0,
        notes: vec![format!("{prec}-bit arithmetic")],
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct DoubleReport {
    /// `(n, ν)` label of each row and column.
    pub labels: Vec<(usize, usize)>,
    pub entries: Vec<Vec<C64>>,
    /// `|T_ab| / √(|T_aa| |T_bb|)` for `a ≠ b`.
    pub normalized: Vec<Vec<f64>>,
    pub max_normalized_offdiag: f64,
    pub diag_nonzero: bool,
    /// Absolute mass of each diagonal entry in double-precision units.
    pub diag_scale: Vec<f64>,
    pub certificate: f64,
    pub precision_bits: u32,
    pub nodes_per_axis: usize,
}

impl DoubleReport {
    pub fn certified(&self) -> bool {
        self.certificate < CERT_TOL
    }
}

/// `T = ∬ BH_a(z) BH_a(s) BH_b(z) BH_b(s) (e^z - e^s) dz ds` over
/// `[0, 2πi] × [π, π+2πi]` by the tensor trapezoid rule.
///
/// The integrand is `g(z) g(s) (e^z - e^s)` with `g = BH_a BH_b`, so the
/// tensor sum is evaluated exactly as `(Σ w g e^z)(Σ w g) - (Σ w g)(Σ w g e^s)`.
pub fn double_orthogonality(
    pn: &SpectrumProblem,
    pm: &SpectrumProblem,
    rule_n: usize,
    prec: Option<u32>,
) -> Result<DoubleReport> {
    super::check_node_count(rule_n)?;
    let close = |a: C64, b: C64| (a - b).norm() <= 1e-12 * (1.0 + a.norm());
    if !close(pn.k3, pm.k3) || !close(pn.k2, pm.k2) {
        return Err(Error::Configuration("the two problems must share K3 and K2".into()));
    }
    for p in [pn, pm] {
        if !is_half_integer_multiple(p.sigma()) {
            return Err(Error::NonPeriodic { two_sigma: 2.0 * p.sigma() });
        }
    }
    let (mut fam, _) = simple_family(pn)?;
    if pn != pm {
        fam.extend(simple_family(pm)?.0);
    }
    let labels: Vec<(usize, usize)> = fam.iter().map(|s| (s.pair.n, s.pair.nu)).collect();
    let prec = prec.unwrap_or_else(|| segment_precision(&fam, PI) + segment_precision(&fam, 0.0) - 53);
    let n2 = 2 * rule_n;
    let ax0 = mp_nodes(prec, false, n2);
    let axp = mp_nodes(prec, true, n2);
    let v0 = mp_values(&fam, &ax0);
    let vp = mp_values(&fam, &axp);
    let one: Vec<MpC> = (0..n2).map(|_| MpC::from_c64(prec, C64::new(1.0, 0.0))).collect();
    let k = fam.len();
    let shift = (prec as f64 - 53.0) * LN_2;
    let mut t = vec![vec![C64::new(0.0, 0.0); k]; k];
    let mut cert = 0.0f64;
    let mut diag_eff = vec![0.0; k];
    for a in 0..k {
        for b in a..k {
            let (a1, a1d, la1) = mp_pair_sums(&v0, &ax0.ez, &ax0.w, a, b);
            let (a0, a0d, la0) = mp_pair_sums(&v0, &one, &ax0.w, a, b);
            let (b1, b1d, lb1) = mp_pair_sums(&vp, &axp.ez, &axp.w, a, b);
            let (b0, b0d, lb0) = mp_pair_sums(&vp, &one, &axp.w, a, b);
            let tn = a1.mul(&b0).sub(&a0.mul(&b1));
            let t2n = a1d.mul(&b0d).sub(&a0d.mul(&b1d));
            let ln_mass = (la1 + lb0).max(la0 + lb1) + LN_2;
            cert = cert.max(ln_ratio(&tn.sub(&t2n), ln_mass - shift));
            if a == b {
                diag_eff[a] = (ln_mass - shift).exp();
            }
            let v = tn.to_c64();
            t[a][b] = v;
            t[b][a] = v;
        }
    }
    let mut normalized = vec![vec![0.0; k]; k];
    let mut worst = 0.0f64;
    for a in 0..k {
        for b in 0..k {
            if a != b {
                let r = t[a][b].norm() / (t[a][a].norm().sqrt() * t[b][b].norm().sqrt());
                let r = if r.is_nan() { f64::INFINITY } else { r };
                normalized[a][b] = r;
                worst = worst.max(r);
            }
        }
    }
    let diag_nonzero = (0..k).all(|a| t[a][a].norm() > 1e-6 * diag_eff[a]);
    Ok(DoubleReport {
        labels,
        entries: t,
        normalized,
        max_normalized_offdiag: worst,
        diag_nonzero,
        diag_scale: diag_eff,
        certificate: cert,
        precision_bits: prec,
        nodes_per_axis: rule_n,
    })
}

/// Problem for the segment relations with prescribed `σ` (sign chosen to
/// reproduce it) and `K2` from the termination condition.
pub fn segment_problem(n: usize, k3: f64, sigma: f64) -> SpectrumProblem {
    let p = SpectrumProblem::from_sigma(n, C64::new(k3, 0.0), C64::new(sigma, 0.0));
    debug_assert_eq!(p.sign, Sign::for_sigma(C64::new(sigma, 0.0)));
    p
}
