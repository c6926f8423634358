//! Quadrature-backed verification of orthogonality and integral identities.

mod fredholm;
mod gauss;
pub mod mp;
mod orth;

pub use fredholm::*;
pub use gauss::{adaptive_vec, gauss_legendre};
pub use orth::*;

use crate::error::{Error, Result};
use num_complex::Complex64 as C64;
use serde::Serialize;
use std::f64::consts::PI;

/// Default node count.
pub const DEFAULT_N: usize = 512;
/// Self-convergence bar for the N → 2N certificate.
pub const CERT_TOL: f64 = 1e-11;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ContourKind {
    /// `|z| = radius`.
    Circle { radius: f64 },
    /// `base + i t`, `t ∈ [0, 2π]`.
    VerticalSegment { base_re: f64, base_im: f64 },
    /// `base + t`, `t ∈ [0, 2π]`.
    HorizontalSegment { base_re: f64, base_im: f64 },
}

/// Uniform trapezoid rule on a closed or periodic contour.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ContourRule {
    pub kind: ContourKind,
    pub n: usize,
}

pub fn check_node_count(n: usize) -> Result<()> {
    if n >= 16 && n.is_power_of_two() {
        Ok(())
    } else {
        Err(Error::BadNodeCount(n))
    }
}

impl ContourRule {
    pub fn circle(radius: f64, n: usize) -> Result<Self> {
        check_node_count(n)?;
        Ok(ContourRule { kind: ContourKind::Circle { radius }, n })
    }

    pub fn vertical(base: C64, n: usize) -> Result<Self> {
        check_node_count(n)?;
        Ok(ContourRule { kind: ContourKind::VerticalSegment { base_re: base.re, base_im: base.im }, n })
    }

    pub fn horizontal(base: C64, n: usize) -> Result<Self> {
        check_node_count(n)?;
        Ok(ContourRule { kind: ContourKind::HorizontalSegment { base_re: base.re, base_im: base.im }, n })
    }

    pub fn doubled(&self) -> Self {
        ContourRule { kind: self.kind, n: 2 * self.n }
    }

    /// Node `j` and its weight `dz`.
    pub fn node(&self, j: usize) -> (C64, C64) {
        let h = 2.0 * PI / self.n as f64;
        let t = h * j as f64;
        match self.kind {
            ContourKind::Circle { radius } => {
                let z = C64::from_polar(radius, t);
                (z, C64::i() * z * h)
            }
            ContourKind::VerticalSegment { base_re, base_im } => {
                (C64::new(base_re, base_im + t), C64::new(0.0, h))
            }
            ContourKind::HorizontalSegment { base_re, base_im } => {
                (C64::new(base_re + t, base_im), C64::new(h, 0.0))
            }
        }
    }

    pub fn nodes(&self) -> Vec<(C64, C64)> {
        (0..self.n).map(|j| self.node(j)).collect()
    }
}

/// Trapezoid sum of `f` over the rule.
pub fn contour_integral<F: Fn(C64) -> C64>(f: F, rule: &ContourRule) -> Result<C64> {
    let mut s = C64::new(0.0, 0.0);
    for (j, (z, w)) in rule.nodes().into_iter().enumerate() {
        let v = f(z);
        if !v.is_finite() {
            return Err(Error::NonFiniteNode { index: j });
        }
        s += v * w;
    }
    Ok(s)
}

/// An integral at N together with its value at 2N.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Certified {
    pub value: C64,
    pub value_2n: C64,
    /// `Σ |f| |dz|` at 2N.
    pub scale: f64,
    /// `|I_N - I_2N| / scale`.
    pub defect: f64,
}

impl Certified {
    pub fn passes(&self) -> bool {
        self.defect < CERT_TOL
    }
}

pub fn certified_integral<F: Fn(C64) -> C64>(f: F, rule: &ContourRule) -> Result<Certified> {
    let value = contour_integral(&f, rule)?;
    let r2 = rule.doubled();
    let mut value_2n = C64::new(0.0, 0.0);
    let mut scale = 0.0;
    for (j, (z, w)) in r2.nodes().into_iter().enumerate() {
        let v = f(z);
        if !v.is_finite() {
            return Err(Error::NonFiniteNode { index: j });
        }
        value_2n += v * w;
        scale += v.norm() * w.norm();
    }
    let defect = if scale > 0.0 { (value - value_2n).norm() / scale } else { 0.0 };
    Ok(Certified { value, value_2n, scale, defect })
}

/// Gram-type matrix of a bilinear pairing with its diagnostics.
#[derive(Clone, Debug, PartialEq)]
pub struct OrthReport {
    pub gram: Vec<Vec<C64>>,
    /// `max_{μ≠ν} |G_μν| / √(|G_μμ| |G_νν|)`.
    pub normalized_offdiag: f64,
    pub rule: Option<ContourRule>,
    pub diag_nonzero: bool,
    /// Absolute mass `Σ |integrand| |dz|` of each diagonal entry.
    pub diag_scale: Vec<f64>,
    /// Largest `|G_N - G_2N| / mass` over all entries.
    pub certificate: f64,
    /// Indices left out because their eigenvalue is repeated.
    pub skipped: Vec<usize>,
    /// Largest `|G_μν - G_νμ|`.
    pub asymmetry: f64,
    pub notes: Vec<String>,
}

impl OrthReport {
    pub fn size(&self) -> usize {
        self.gram.len()
    }

    pub fn certified(&self) -> bool {
        self.certificate < CERT_TOL
    }
}

pub(crate) fn normalized_offdiag(g: &[Vec<C64>]) -> f64 {
    let mut m = 0.0f64;
    for i in 0..g.len() {
        for j in 0..g.len() {
            if i != j {
                let r = g[i][j].norm() / (g[i][i].norm().sqrt() * g[j][j].norm().sqrt());
                m = m.max(if r.is_nan() { f64::INFINITY } else { r });
            }
        }
    }
    m
}

/// Gram matrix from node values: `G_μν = Σ_j w_j h_j f_μ(z_j) f_ν(z_j)`;
/// returns the matrix and the absolute masses.
pub(crate) fn gram_from_values(
    vals: &[Vec<C64>],
    weights: &[C64],
) -> (Vec<Vec<C64>>, Vec<Vec<f64>>) {
    let m = vals.len();
    let mut g = vec![vec![C64::new(0.0, 0.0); m]; m];
    let mut s = vec![vec![0.0; m]; m];
    for a in 0..m {
        for b in a..m {
            let mut acc = C64::new(0.0, 0.0);
            let mut mass = 0.0;
            for (j, w) in weights.iter().enumerate() {
                let t = *w * vals[a][j] * vals[b][j];
                acc += t;
                mass += t.norm();
            }
            g[a][b] = acc;
            g[b][a] = acc;
            s[a][b] = mass;
            s[b][a] = mass;
        }
    }
    (g, s)
}

pub(crate) fn build_report(
    g: Vec<Vec<C64>>,
    g2: &[Vec<C64>],
    mass2: &[Vec<f64>],
    rule: Option<ContourRule>,
    skipped: Vec<usize>,
    notes: Vec<String>,
) -> OrthReport {
    let m = g.len();
    let mut cert = 0.0f64;
    let mut asym = 0.0f64;
    for a in 0..m {
        for b in 0..m {
            if mass2[a][b] > 0.0 {
                cert = cert.max((g[a][b] - g2[a][b]).norm() / mass2[a][b]);
            }
            asym = asym.max((g[a][b] - g[b][a]).norm());
        }
    }
    let diag_scale: Vec<f64> = (0..m).map(|a| mass2[a][a]).collect();
    let diag_nonzero = (0..m).all(|a| g[a][a].norm() > 1e-6 * diag_scale[a]);
    OrthReport {
        normalized_offdiag: normalized_offdiag(&g),
        gram: g,
        rule,
        diag_nonzero,
        diag_scale,
        certificate: cert,
        skipped,
        asymmetry: asym,
        notes,
    }
}
