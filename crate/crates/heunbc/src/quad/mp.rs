//! Multiprecision complex arithmetic on MPFR floats, for integrands whose
//! magnitude on the contour far exceeds the double range.

use crate::spectra::BhSolution;
use num_complex::Complex64 as C64;
use rug::float::Constant;
use rug::Float;

#[derive(Clone, Debug)]
pub struct MpC {
    pub re: Float,
    pub im: Float,
}

impl MpC {
    pub fn zero(prec: u32) -> Self {
        MpC { re: Float::new(prec), im: Float::new(prec) }
    }

    pub fn from_c64(prec: u32, z: C64) -> Self {
        MpC { re: Float::with_val(prec, z.re), im: Float::with_val(prec, z.im) }
    }

    pub fn prec(&self) -> u32 {
        self.re.prec()
    }

    pub fn add(&self, o: &MpC) -> MpC {
        let p = self.prec();
        MpC { re: Float::with_val(p, &self.re + &o.re), im: Float::with_val(p, &self.im + &o.im) }
    }

    pub fn sub(&self, o: &MpC) -> MpC {
        let p = self.prec();
        MpC { re: Float::with_val(p, &self.re - &o.re), im: Float::with_val(p, &self.im - &o.im) }
    }

    pub fn mul(&self, o: &MpC) -> MpC {
        let p = self.prec();
        let rr = Float::with_val(p, &self.re * &o.re);
        let ii = Float::with_val(p, &self.im * &o.im);
        let ri = Float::with_val(p, &self.re * &o.im);
        let ir = Float::with_val(p, &self.im * &o.re);
        MpC { re: rr - ii, im: ri + ir }
    }

    pub fn mul_c64(&self, z: C64) -> MpC {
        self.mul(&MpC::from_c64(self.prec(), z))
    }

    pub fn exp(&self) -> MpC {
        let p = self.prec();
        let m = self.re.clone().exp();
        let (s, c) = self.im.clone().sin_cos(Float::new(p));
        MpC { re: Float::with_val(p, &m * &c), im: Float::with_val(p, &m * &s) }
    }

    pub fn recip(&self) -> MpC {
        let p = self.prec();
        let d = Float::with_val(p, self.re.clone().square() + self.im.clone().square());
        MpC { re: Float::with_val(p, &self.re / &d), im: -Float::with_val(p, &self.im / &d) }
    }

    pub fn to_c64(&self) -> C64 {
        C64::new(self.re.to_f64(), self.im.to_f64())
    }

    pub fn norm_f64(&self) -> f64 {
        let p = self.prec();
        Float::with_val(p, self.re.clone().square() + self.im.clone().square()).sqrt().to_f64()
    }

    /// `log |z|` without overflow.
    pub fn ln_abs(&self) -> f64 {
        let p = self.prec();
        let n = Float::with_val(p, self.re.clone().square() + self.im.clone().square());
        if n.is_zero() {
            f64::NEG_INFINITY
        } else {
            0.5 * n.ln().to_f64()
        }
    }
}

/// `base + i 2π j / n` with `base` real, computed with an exact-precision π.
pub fn vertical_node(prec: u32, base_is_pi: bool, base: f64, j: usize, n: usize) -> MpC {
    let pi = Float::with_val(prec, Constant::Pi);
    let re = if base_is_pi { pi.clone() } else { Float::with_val(prec, base) };
    let im = Float::with_val(prec, &pi * 2u32) * j as u32 / n as u32;
    MpC { re, im }
}

/// `BH(z)` evaluated at a multiprecision point.
pub fn bh_value(sol: &BhSolution, z: &MpC) -> MpC {
    let p = z.prec();
    let e = z.exp();
    let w = e.recip();
    let mut y = MpC::zero(p);
    for &c in sol.hautot.reversed.coeffs().iter().rev() {
        y = y.mul(&w).add(&MpC::from_c64(p, c));
    }
    let half = MpC::from_c64(p, C64::new(0.5, 0.0));
    let g = e
        .mul_c64(sol.coeffs.k3 / 2.0)
        .sub(&e.mul(&e).mul(&half))
        .add(&z.mul_c64(sol.shift()));
    y.mul(&g.exp())
}

/// Largest real part of the exponent of `BH` on a vertical line, sampled.
pub fn max_exponent(sol: &BhSolution, base: f64, samples: usize) -> f64 {
    (0..samples)
        .map(|j| {
            let t = 2.0 * std::f64::consts::PI * j as f64 / samples as f64;
            sol.exponent(C64::new(base, t)).re
        })
        .fold(f64::NEG_INFINITY, f64::max)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exp_matches_double() {
        let z = C64::new(0.3, -1.7);
        let e = MpC::from_c64(200, z).exp().to_c64();
        assert!((e - z.exp()).norm() < 1e-15);
    }

    #[test]
    fn huge_values_stay_finite() {
        let z = MpC::from_c64(400, C64::new(800.0, 0.5));
        assert!((z.exp().ln_abs() - 800.0).abs() < 1e-12);
    }
}
