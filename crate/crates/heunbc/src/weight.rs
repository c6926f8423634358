//! Laurent-series weight `ρ_n(z) = Σ a_k z^{-k}` for the reversed polynomials.

use crate::error::{Error, Result};
use num_complex::Complex64 as C64;

/// Growth margin ε in the bound `|a_k| ≲ (√2 + ε)^k / √k!`.
pub const TAIL_EPS: f64 = 0.5;
pub const TAIL_TOL: f64 = 1e-12;

fn re(x: f64) -> C64 {
    C64::new(x, 0.0)
}

#[derive(Clone, Debug, PartialEq)]
pub struct WeightSeries {
    pub n: usize,
    pub alpha: C64,
    pub beta: C64,
    pub coeffs: Vec<C64>,
    pub kmax: usize,
    /// Bound on the omitted tail on `|z| = 1`.
    pub tail_estimate: f64,
}

fn ln_factorial(k: usize) -> f64 {
    (1..=k).map(|j| (j as f64).ln()).sum()
}

impl WeightSeries {
    fn build(n: usize, alpha: C64, beta: C64, coeffs: Vec<C64>) -> Self {
        let kmax = coeffs.len() - 1;
        let mut w = WeightSeries { n, alpha, beta, coeffs, kmax, tail_estimate: 0.0 };
        w.tail_estimate = w.tail_bound(1.0);
        w
    }

    /// `M Σ_{k>kmax} (ρ/r)^k / √k!` with `ρ = √2 + ε` and `M` fitted to the
    /// upper half of the stored coefficients.
    pub fn tail_bound(&self, r: f64) -> f64 {
        let rho = 2f64.sqrt() + TAIL_EPS;
        let lo = self.kmax / 2;
        let ln_m = (lo..=self.kmax)
            .filter(|&k| self.coeffs[k].norm() > 0.0)
            .map(|k| self.coeffs[k].norm().ln() + 0.5 * ln_factorial(k) - k as f64 * rho.ln())
            .fold(f64::NEG_INFINITY, f64::max);
        if ln_m == f64::NEG_INFINITY {
            return 0.0;
        }
        let mut sum = 0.0;
        let mut ln_fact = ln_factorial(self.kmax);
        let q = (rho / r).ln();
        for k in self.kmax + 1.. {
            ln_fact += (k as f64).ln();
            let t = (ln_m + k as f64 * q - 0.5 * ln_fact).exp();
            sum += t;
            if k > self.kmax + 8 && t < 1e-30 * sum.max(1e-300) {
                break;
            }
            if k > self.kmax + 100_000 {
                return f64::INFINITY;
            }
        }
        sum
    }

    /// `(2 - k + 2n + α) a_k - β a_{k-1} - 2 a_{k-2}` for each stored `k ≥ 2`.
    pub fn recursion_residuals(&self) -> Vec<f64> {
        let d = 2.0 * self.n as f64 + self.alpha;
        (2..=self.kmax)
            .map(|k| {
                ((2.0 - k as f64 + d) * self.coeffs[k]
                    - self.beta * self.coeffs[k - 1]
                    - 2.0 * self.coeffs[k - 2])
                    .norm()
            })
            .collect()
    }

    pub fn max_abs_coeff(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }

    /// Truncated partial sum without the tail check.
    pub fn partial_sum(&self, z: C64) -> C64 {
        let w = 1.0 / z;
        self.coeffs.iter().rev().fold(re(0.0), |acc, &c| acc * w + c)
    }

    /// A copy keeping only `a_0 … a_k`.
    pub fn truncated(&self, k: usize) -> Self {
        Self::build(self.n, self.alpha, self.beta, self.coeffs[..=k.min(self.kmax)].to_vec())
    }
}

/// First `k ≥ 1` at which `2 - k + 2n + α` vanishes.
pub fn degenerate_index(n: usize, alpha: C64, kmax: usize) -> Option<usize> {
    (1..=kmax).find(|&k| (2.0 - k as f64 + 2.0 * n as f64 + alpha).norm() < 1e-12)
}

pub fn weight_coeffs(n: usize, alpha: C64, beta: C64, kmax: usize) -> Result<WeightSeries> {
    if let Some(k) = degenerate_index(n, alpha, kmax) {
        return Err(Error::DegenerateWeight { k });
    }
    let d = 2.0 * n as f64 + alpha;
    let mut a = vec![-(n as f64) - alpha / 2.0];
    if kmax >= 1 {
        a.push(beta * a[0] / (1.0 + d));
    }
    for k in 2..=kmax {
        a.push((beta * a[k - 1] + 2.0 * a[k - 2]) / (2.0 - k as f64 + d));
    }
    Ok(WeightSeries::build(n, alpha, beta, a))
}

/// β = 0 weight: `a_{2k} = (-1)^k Γ(1-x)/Γ(k-x)` with `x = n + α/2`, odd terms zero.
pub fn weight_closed_form(n: usize, alpha: C64, kmax: usize) -> Result<WeightSeries> {
    let x = n as f64 + alpha / 2.0;
    let mut a = Vec::with_capacity(kmax + 1);
    // Γ(1-x)/Γ(k-x) = 1/[(1-x)(2-x)…(k-1-x)] for k ≥ 1 and -x for k = 0
    let mut ratio = re(1.0);
    for k in 0..=kmax {
        if k % 2 == 1 {
            a.push(re(0.0));
            continue;
        }
        let h = k / 2;
        let v = if h == 0 {
            -x
        } else {
            if h >= 2 {
                let f = h as f64 - 1.0 - x;
                if f.norm() < 1e-12 {
                    return Err(Error::DegenerateWeight { k });
                }
                ratio /= f;
            }
            ratio * if h % 2 == 0 { 1.0 } else { -1.0 }
        };
        a.push(v);
    }
    Ok(WeightSeries::build(n, alpha, re(0.0), a))
}

/// Partial sum with the tail bound enforced.
pub fn weight_eval(w: &WeightSeries, z: C64) -> Result<C64> {
    let r = z.norm();
    if r < 0.5 {
        return Err(Error::WeightDomain { r });
    }
    let tail = w.tail_bound(r);
    if !(tail < TAIL_TOL) {
        return Err(Error::InsufficientTruncation { tail, tol: TAIL_TOL });
    }
    Ok(w.partial_sum(z))
}

/// `(z³ρ)' - [(1-2n-α)z² + βz + 2]ρ - (2+2n+α)(-n-α/2)z²` on the truncated series.
pub fn self_adjoint_residual(w: &WeightSeries, z: C64) -> C64 {
    let nf = w.n as f64;
    let inv = 1.0 / z;
    let mut rho = re(0.0);
    let mut d = re(0.0);
    let mut p = z * z;
    for (k, &a) in w.coeffs.iter().enumerate() {
        rho += a * p * inv * inv;
        d += (3.0 - k as f64) * a * p;
        p *= inv;
    }
    d - ((1.0 - 2.0 * nf - w.alpha) * z * z + w.beta * z + 2.0) * rho
        - (2.0 + 2.0 * nf + w.alpha) * (-nf - w.alpha / 2.0) * z * z
}

/// Scaled coefficients `b_k = a_k √k!` from the recursion, free of overflow.
pub fn scaled_coeffs(n: usize, alpha: C64, beta: C64, kmax: usize) -> Result<Vec<C64>> {
    if let Some(k) = degenerate_index(n, alpha, kmax) {
        return Err(Error::DegenerateWeight { k });
    }
    let d = 2.0 * n as f64 + alpha;
    let mut b = vec![-(n as f64) - alpha / 2.0];
    if kmax >= 1 {
        b.push(beta * b[0] / (1.0 + d));
    }
    for k in 2..=kmax {
        let kf = k as f64;
        b.push((beta * b[k - 1] * kf.sqrt() + 2.0 * b[k - 2] * (kf * (kf - 1.0)).sqrt()) / (2.0 - kf + d));
    }
    Ok(b)
}

/// `(|a_k| √k!)^{1/k}` at `k = kmax` (the largest even `k ≤ kmax` when β = 0).
///
/// Runs the scaled recursion with periodic renormalization, so any `kmax`
/// is safe from overflow.
pub fn convergence_diagnostic(n: usize, alpha: C64, beta: C64, kmax: usize) -> Result<f64> {
    if let Some(k) = degenerate_index(n, alpha, kmax) {
        return Err(Error::DegenerateWeight { k });
    }
    let k = if beta.norm() == 0.0 && kmax % 2 == 1 { kmax - 1 } else { kmax };
    if k == 0 {
        return Err(Error::DiagnosticUndefined { k });
    }
    let d = 2.0 * n as f64 + alpha;
    let mut prev = -(n as f64) - alpha / 2.0;
    let mut cur = beta * prev / (1.0 + d);
    let mut ln_offset = 0.0;
    for j in 2..=k {
        let jf = j as f64;
        let next = (beta * cur * jf.sqrt() + 2.0 * prev * (jf * (jf - 1.0)).sqrt()) / (2.0 - jf + d);
        prev = cur;
        cur = next;
        let m = cur.norm().max(prev.norm());
        if m > 1e100 || (m < 1e-100 && m > 0.0) {
            prev /= m;
            cur /= m;
            ln_offset += m.ln();
        }
    }
    let v = cur.norm();
    if v == 0.0 {
        return Err(Error::DiagnosticUndefined { k });
    }
    Ok(((v.ln() + ln_offset) / k as f64).exp())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn beta_zero_second_coefficient() {
        for n in 0..4 {
            for alpha in [0.1, 0.7, 1.3] {
                let w = weight_coeffs(n, re(alpha), re(0.0), 6).unwrap();
                assert_eq!(w.coeffs[1], re(0.0));
                assert!((w.coeffs[2] + 1.0).norm() < 1e-15);
                assert!(w.coeffs.iter().skip(1).step_by(2).all(|c| *c == re(0.0)));
            }
        }
    }

    #[test]
    fn one_step_by_hand() {
        let w = weight_coeffs(0, re(1.0), re(1.0), 1).unwrap();
        assert!((w.coeffs[1] + 0.25).norm() < 1e-16);
    }

    #[test]
    fn degenerate_divisor_named() {
        assert_eq!(weight_coeffs(1, re(0.0), re(0.0), 10), Err(Error::DegenerateWeight { k: 4 }));
        assert_eq!(weight_closed_form(1, re(0.0), 10), Err(Error::DegenerateWeight { k: 4 }));
        assert!(weight_closed_form(1, re(0.0), 3).is_ok());
    }

    #[test]
    fn kmax_zero_eval() {
        let w = weight_coeffs(2, re(0.3), re(0.7), 0).unwrap();
        assert_eq!(w.partial_sum(C64::new(0.2, 0.9)), w.coeffs[0]);
    }

    #[test]
    fn domain_error_near_origin() {
        let w = weight_coeffs(0, re(0.3), re(0.0), 40).unwrap();
        assert!(matches!(weight_eval(&w, re(0.1)), Err(Error::WeightDomain { .. })));
    }
}
