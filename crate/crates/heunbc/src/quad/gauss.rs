use num_complex::Complex64 as C64;
use std::f64::consts::PI;

/// Gauss–Legendre nodes and weights on [-1, 1] by Newton iteration.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    for i in 0..n {
        let mut t = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 1.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, t);
            for k in 2..=n {
                let kf = k as f64;
                let p2 = ((2.0 * kf - 1.0) * t * p1 - (kf - 1.0) * p0) / kf;
                p0 = p1;
                p1 = p2;
            }
            dp = n as f64 * (t * p1 - p0) / (t * t - 1.0);
            let dt = p1 / dp;
            t -= dt;
            if dt.abs() < 1e-16 {
                break;
            }
        }
        x[i] = t;
        w[i] = 2.0 / ((1.0 - t * t) * dp * dp);
    }
    (x, w)
}

struct Rule {
    x: Vec<f64>,
    w: Vec<f64>,
}

impl Rule {
    fn apply<F: Fn(f64) -> Vec<C64>>(&self, f: &F, a: f64, b: f64, m: usize) -> (Vec<C64>, Vec<f64>) {
        let h = 0.5 * (b - a);
        let c = 0.5 * (a + b);
        let mut s = vec![C64::new(0.0, 0.0); m];
        let mut abs = vec![0.0; m];
        for (xi, wi) in self.x.iter().zip(&self.w) {
            let v = f(c + h * xi);
            for k in 0..m {
                s[k] += v[k] * (wi * h);
                abs[k] += v[k].norm() * wi * h;
            }
        }
        (s, abs)
    }
}

/// Result of [`adaptive_vec`].
pub struct AdaptiveResult {
    pub value: Vec<C64>,
    /// `∫ |f_k|` per component.
    pub scale: Vec<f64>,
    /// Summed panel differences between the two orders.
    pub error: Vec<f64>,
}

/// Adaptive bisection with an embedded 20/40-point Gauss–Legendre pair,
/// integrating `m` components at once over [a, b].
pub fn adaptive_vec<F: Fn(f64) -> Vec<C64>>(f: F, a: f64, b: f64, m: usize, rel_tol: f64) -> AdaptiveResult {
    let lo = { let (x, w) = gauss_legendre(20); Rule { x, w } };
    let hi = { let (x, w) = gauss_legendre(40); Rule { x, w } };
    let (_, total_abs) = hi.apply(&f, a, b, m);
    let tol_scale: f64 = total_abs.iter().cloned().fold(0.0, f64::max);
    let mut value = vec![C64::new(0.0, 0.0); m];
    let mut scale = vec![0.0; m];
    let mut error = vec![0.0; m];
    let mut stack = vec![(a, b, 0usize)];
    while let Some((x0, x1, depth)) = stack.pop() {
        let (s1, _) = lo.apply(&f, x0, x1, m);
        let (s2, abs2) = hi.apply(&f, x0, x1, m);
        let err = s1.iter().zip(&s2).map(|(p, q)| (p - q).norm()).fold(0.0, f64::max);
        let local_tol = rel_tol * tol_scale * ((x1 - x0) / (b - a)).max(1e-3);
        if err <= local_tol || depth >= 60 {
            for k in 0..m {
                value[k] += s2[k];
                scale[k] += abs2[k];
                error[k] += (s1[k] - s2[k]).norm();
            }
        } else {
            let mid = 0.5 * (x0 + x1);
            stack.push((x0, mid, depth + 1));
            stack.push((mid, x1, depth + 1));
        }
    }
    AdaptiveResult { value, scale, error }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn weights_sum_to_two_and_integrate_monomials() {
        let (x, w) = gauss_legendre(20);
        assert!((w.iter().sum::<f64>() - 2.0).abs() < 1e-14);
        let i: f64 = x.iter().zip(&w).map(|(x, w)| w * x.powi(38)).sum();
        assert!((i - 2.0 / 39.0).abs() < 1e-14);
    }

    #[test]
    fn gaussian_half_moment() {
        let r = adaptive_vec(|t| vec![C64::new((-t * t).exp(), 0.0)], 0.0, 10.0, 1, 1e-15);
        assert!((r.value[0].re - PI.sqrt() / 2.0).abs() < 1e-14);
    }
}
