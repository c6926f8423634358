use heunbc::bhe::{self, BheParams};
use heunbc::cpoly::CPoly;
use heunbc::qes::{self, TurbinerParams};
use heunbc::quad::{self, ContourRule};
use heunbc::spectra::{self, Sign, SpectrumProblem};
use heunbc::weight;
use heunbc::C64;
use proptest::prelude::*;
use std::f64::consts::{PI, SQRT_2};

fn re(x: f64) -> C64 {
    C64::new(x, 0.0)
}

fn cplx(r: f64) -> impl Strategy<Value = C64> {
    (-r..r, -r..r).prop_map(|(a, b)| C64::new(a, b))
}

fn poly(max_deg: usize) -> impl Strategy<Value = CPoly> {
    prop::collection::vec(cplx(2.0), 1..=max_deg + 1).prop_map(CPoly::new)
}

fn max_dev(a: &[C64], b: &[C64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn reverse_is_an_involution(p in poly(12), extra in 0usize..3) {
        prop_assume!(p.coeffs()[0].norm() > 1e-3);
        let n = p.degree() + extra;
        let twice = p.reverse(n).unwrap().reverse(n).unwrap();
        prop_assert_eq!(twice, p);
    }

    #[test]
    fn roots_satisfy_polynomial(p in poly(14)) {
        prop_assume!(p.degree() >= 1 && p.leading().norm() > 0.1);
        let roots = p.roots().unwrap();
        prop_assert_eq!(roots.len(), p.degree());
        let scale = p.max_abs_coeff();
        for r in roots {
            prop_assert!(p.eval(r).norm() / scale < 1e-10, "|p(r)| = {}", p.eval(r).norm());
        }
    }

    #[test]
    fn divide_reconstructs(p in poly(20), q in poly(8)) {
        prop_assume!(q.leading().norm() > 0.1 && p.degree() >= q.degree());
        let (quot, rem) = p.divide_exact(&q).unwrap();
        prop_assert!(rem.is_zero() || rem.degree() < q.degree());
        let back = q.mul(&quot).add(&rem);
        let mut c = back.coeffs().to_vec();
        c.resize(p.coeffs().len().max(c.len()), re(0.0));
        let mut d = p.coeffs().to_vec();
        d.resize(c.len(), re(0.0));
        // |c_k| ranges over p and the product q·quot
        let scale = p.max_abs_coeff().max(q.max_abs_coeff() * quot.max_abs_coeff());
        prop_assert!(max_dev(&c, &d) < 1e-12 * scale);
    }

    #[test]
    fn horner_matches_power_sum(p in poly(15), z in cplx(1.5)) {
        let naive: C64 = p.coeffs().iter().enumerate().map(|(k, c)| c * z.powu(k as u32)).sum();
        let scale: f64 = p.coeffs().iter().enumerate().map(|(k, c)| c.norm() * z.norm().powi(k as i32)).sum();
        prop_assert!((p.eval(z) - naive).norm() <= 1e-13 * scale.max(1e-300));
    }

    #[test]
    fn hautot_roots_terminate(m in 0usize..=8, alpha in -0.9f64..3.0, beta in -2.0f64..2.0) {
        let sols = bhe::hautot(m, re(alpha), re(beta)).unwrap();
        prop_assert_eq!(sols.len(), m + 1);
        let a_poly = bhe::termination_poly(m, re(alpha), re(beta));
        let scale = a_poly.max_abs_coeff();
        for s in &sols {
            prop_assert!(a_poly.eval(s.delta_eig).norm() < 1e-10 * scale * (1.0 + s.delta_eig.norm()).powi(m as i32 + 1));
            // real roots when 1 + α > 0 and β real
            prop_assert!(s.delta_eig.im.abs() < 1e-8 * (1.0 + s.delta_eig.re.abs()));
            prop_assert_eq!(s.poly.degree(), m);
            prop_assert_eq!(s.poly.coeffs()[0], re(1.0));
            prop_assert_eq!(s.reversed.reverse(m).unwrap(), s.poly.clone());
        }
    }

    #[test]
    fn hautot_residual_on_unit_circle(m in 0usize..=8, alpha in -0.5f64..2.0, beta in -1.5f64..1.5, phase in 0.0f64..1.0) {
        for s in bhe::hautot(m, re(alpha), re(beta)).unwrap() {
            for j in 0..20 {
                let z = C64::from_polar(1.0, 2.0 * PI * (j as f64 + phase) / 20.0);
                let r = bhe::bhe_residual_poly(&s.params, &s.poly, z);
                prop_assert!(r.relative() < 1e-11, "m={} residual {}", m, r.relative());
            }
        }
    }

    #[test]
    fn pbhe_bhe_roundtrip(k3 in cplx(3.0), k2 in cplx(3.0), k1 in cplx(3.0), sigma in cplx(2.0)) {
        let k = bhe::PbheCoeffs::normalized(k3, k2, k1, sigma);
        let back = bhe::pbhe_from_bhe(&bhe::bhe_from_pbhe(&k).unwrap());
        for (a, b) in [(back.k3, k.k3), (back.k2, k.k2), (back.k1, k.k1), (back.k0, k.k0), (back.sigma, k.sigma)] {
            prop_assert!((a - b).norm() < 1e-14 * (1.0 + b.norm()));
        }
        prop_assert!((k.sigma * k.sigma + k.k0).norm() < 1e-14 * (1.0 + k.k0.norm()));
    }

    #[test]
    fn bhe_pbhe_roundtrip(alpha in cplx(3.0), beta in cplx(3.0), gamma in cplx(3.0), delta in cplx(3.0)) {
        let p = BheParams::new(alpha, beta, gamma, delta);
        let back = bhe::bhe_from_pbhe(&bhe::pbhe_from_bhe(&p)).unwrap();
        for (a, b) in [(back.alpha, alpha), (back.beta, beta), (back.gamma, gamma), (back.delta, delta)] {
            prop_assert!((a - b).norm() < 1e-14 * (1.0 + b.norm()));
        }
    }

    #[test]
    fn determinant_roots_are_mapped_delta_roots(
        n in 0usize..=8,
        k3 in -3.0f64..3.0,
        k0 in -1.0f64..-0.01,
        plus in any::<bool>(),
    ) {
        let sign = if plus { Sign::Plus } else { Sign::Minus };
        let p = SpectrumProblem::with_k2_from_condition(n, re(k3), re(k0), sign);
        let sigma = p.sigma();
        prop_assume!((1.0 + 2.0 * sigma).norm() > 0.05);
        let mut det = spectra::det_poly(&p).roots().unwrap();
        let mut mapped: Vec<C64> = bhe::hautot(n, 2.0 * sigma, -p.k3).unwrap().iter().map(|s| -s.delta_eig / 2.0).collect();
        det = heunbc::cpoly::sort_roots(det);
        mapped = heunbc::cpoly::sort_roots(mapped);
        let scale = 1.0 + det.iter().map(|r| r.norm()).fold(0.0, f64::max);
        prop_assert!(max_dev(&det, &mapped) < 1e-9 * scale, "dev {}", max_dev(&det, &mapped));
    }

    #[test]
    fn eigen_solutions_solve_periodic_equation(
        n in 0usize..=6,
        k3 in -2.0f64..-0.1,
        sigma in 0.05f64..1.5,
    ) {
        let p = SpectrumProblem::from_sigma(n, re(k3), re(sigma));
        for sol in spectra::family(&p).unwrap() {
            for j in 0..20 {
                let z = C64::new((j % 5) as f64 / 4.0, 2.0 * PI * j as f64 / 20.0);
                let r = spectra::pbhe_residual(&sol.coeffs, &sol, z);
                prop_assert!(r.relative() < 1e-9, "n={} residual {}", n, r.relative());
            }
        }
    }

    #[test]
    fn weight_forms_agree(n in 0usize..=4, alpha in 0.05f64..0.95) {
        let rec = weight::weight_coeffs(n, re(alpha), re(0.0), 40).unwrap();
        let cf = weight::weight_closed_form(n, re(alpha), 40).unwrap();
        prop_assert!(max_dev(&rec.coeffs, &cf.coeffs) < 1e-12 * rec.max_abs_coeff().max(1.0));
    }

    #[test]
    fn weight_recursion_residual(n in 0usize..=5, alpha in 0.05f64..0.95, beta in -2.0f64..2.0) {
        let w = weight::weight_coeffs(n, re(alpha), re(beta), 80).unwrap();
        prop_assert!((w.coeffs[0] + n as f64 + alpha / 2.0).norm() < 1e-15);
        let scale = w.max_abs_coeff();
        prop_assert!(w.recursion_residuals().iter().all(|r| *r < 1e-13 * scale));
    }

    #[test]
    fn self_adjoint_within_tail(n in 0usize..=4, alpha in 0.05f64..0.95, t in 0.0f64..1.0) {
        let w = weight::weight_coeffs(n, re(alpha), re(0.0), 80).unwrap();
        let z = C64::from_polar(1.0, 2.0 * PI * t);
        let r = weight::self_adjoint_residual(&w, z).norm();
        prop_assert!(r < (10.0 * w.tail_estimate).max(1e-12), "residual {} tail {}", r, w.tail_estimate);
    }

    #[test]
    fn circle_gram_is_symmetric(n in 0usize..=4, beta in -1.0f64..1.0) {
        let r = quad::circle_orthogonality(n, re(0.3), re(beta), &ContourRule::circle(1.0, 256).unwrap()).unwrap();
        for i in 0..r.size() {
            for j in 0..r.size() {
                prop_assert!((r.gram[i][j] - r.gram[j][i]).norm() <= 1e-12 * (1.0 + r.gram[i][j].norm()));
            }
        }
    }

    #[test]
    fn kernel_symmetric_and_periodic(z in cplx(1.0), s in cplx(1.0), c in cplx(1.0), plus in any::<bool>()) {
        let a = re(if plus { 0.5 } else { -0.5 });
        let k = quad::fredholm_kernel(z, s, a, c).unwrap();
        prop_assert!((k - quad::fredholm_kernel(s, z, a, c).unwrap()).norm() <= 1e-14 * k.norm());
        prop_assert!((k - quad::fredholm_kernel(z + 2.0 * PI, s, a, c).unwrap()).norm() <= 1e-12 * k.norm());
    }

    #[test]
    fn bender_dunne_parity(s in 0.1f64..2.0, j in 1usize..=6, e in cplx(5.0)) {
        for (k, p) in qes::bender_dunne_polys(s, j, 0.0, 8).iter().enumerate() {
            let sgn = if k % 2 == 0 { 1.0 } else { -1.0 };
            let scale = p.eval_abs(e.norm()).max(1.0);
            prop_assert!((p.eval(-e) - sgn * p.eval(e)).norm() <= 1e-13 * scale);
        }
    }

    #[test]
    fn series_matches_bender_dunne(s in 0.1f64..2.0, j in 1usize..=6, c in -2.0f64..2.0, e in cplx(4.0)) {
        let p = TurbinerParams::new(s, j, c, e);
        let a = bhe::series_coeffs(&qes::bhe_from_turbiner(&p), 12).unwrap();
        let polys = qes::bender_dunne_polys(s, j, c, 12);
        for k in 0..=12 {
            let rhs = (-SQRT_2 / 4.0).powi(k as i32) * polys[k].eval(e);
            let scale = (-SQRT_2 / 4.0f64).abs().powi(k as i32) * polys[k].eval_abs(e.norm());
            prop_assert!((a[k] - rhs).norm() <= 1e-11 * scale.max(1e-300), "k={} {} vs {}", k, a[k], rhs);
        }
    }

    #[test]
    fn periodic_turbiner_composes(s in 0.1f64..2.0, j in 0usize..=6, c in -2.0f64..2.0, e in cplx(4.0)) {
        let p = TurbinerParams::new(s, j, c, e);
        let b = bhe::bhe_from_pbhe(&qes::periodic_turbiner_coeffs(&p)).unwrap();
        let t = qes::bhe_from_turbiner(&p);
        for (x, y) in [(b.alpha, t.alpha), (b.beta, t.beta), (b.gamma, t.gamma), (b.delta, t.delta)] {
            prop_assert!((x - y).norm() <= 1e-12 * (1.0 + y.norm()));
        }
    }

    #[test]
    fn qes_paths_agree(s in 0.1f64..2.0, j in 1usize..=5, c in -1.5f64..1.5) {
        let q = qes::qes_spectrum_paths(s, j, c).unwrap();
        prop_assert_eq!(q.from_determinant.len(), j);
        let scale = 1.0 + q.from_determinant.iter().map(|r| r.norm()).fold(0.0, f64::max);
        prop_assert!(q.max_deviation < 1e-9 * scale);
    }
}
