use serde_json::Value;
use std::process::{Command, Output};

fn heunbc(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_heunbc")).args(args).output().expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("valid JSON on stdout")
}

fn complex(v: &Value) -> (f64, f64) {
    (v["re"].as_f64().unwrap(), v["im"].as_f64().unwrap())
}

fn real_poly(v: &Value) -> Vec<f64> {
    v.as_array().unwrap().iter().map(|c| complex(c).0).collect()
}

#[test]
fn spectrum_example_has_three_real_roots() {
    let out = heunbc(&["spectrum", "--n", "2", "--k3", "-1", "--k0", "-0.25", "--sign", "plus", "--format", "json"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["schema"], "heunbc-report/1");
    let roots: Vec<(f64, f64)> = v["results"]["k1"].as_array().unwrap().iter().map(complex).collect();
    assert_eq!(roots.len(), 3);
    assert!(roots.iter().all(|r| r.1.abs() < 1e-9));
    // (K3, K0, sign) = (-1, -1/4, plus) gives σ = -1/2 and D_3 = -K1(K1² - 3K1 - 2)
    let disc: f64 = 17.0;
    let mut oracle = [0.0, (3.0 - disc.sqrt()) / 2.0, (3.0 + disc.sqrt()) / 2.0];
    oracle.sort_by(|a, b| a.partial_cmp(b).unwrap());
    for (r, o) in roots.iter().zip(oracle) {
        assert!((r.0 - o).abs() < 1e-12, "{r:?} vs {o}");
    }
}

#[test]
fn bender_dunne_example_reproduces_factorization() {
    let out = heunbc(&["bender-dunne", "--s", "0.5", "--J", "3", "--c", "0", "--kmax", "6"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    let polys: Vec<Vec<f64>> = v["results"]["polys"].as_array().unwrap().iter().map(real_poly).collect();
    assert_eq!(polys.len(), 7);
    // P_4 = P_3 · E: shift the coefficients of P_3 up by one
    let mut shifted = vec![0.0];
    shifted.extend(&polys[3]);
    assert_eq!(polys[4].len(), shifted.len());
    for (a, b) in polys[4].iter().zip(&shifted) {
        assert!((a - b).abs() < 1e-12 * (1.0 + b.abs()));
    }
    let q1 = real_poly(&v["results"]["quotients"][0]);
    assert_eq!(q1, vec![0.0, 1.0]);
    assert!(v["certificates"].is_object());
}

#[test]
fn rational_mode_reports_exact_remainders() {
    let out = heunbc(&["--precision", "rational-where-possible", "bender-dunne", "--s", "1/2", "--J", "3", "--c", "1", "--kmax", "7"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    let flags = v["results"]["exact_remainder_zero"].as_array().unwrap();
    assert_eq!(flags.len(), 4);
    assert!(flags.iter().all(|f| f.as_bool() == Some(true)));
}

#[test]
fn output_is_byte_identical() {
    for args in [
        &["spectrum", "--n", "3", "--k3", "-2", "--k0", "-0.09", "--sign", "minus"][..],
        &["--quadrature-n", "64", "circle-orth", "--n", "3", "--alpha", "0.3", "--beta", "0.7"][..],
        &["weight", "--n", "2", "--alpha", "0.3", "--beta", "1", "--kmax", "60"][..],
        &["--format", "csv", "hautot", "--m", "4", "--alpha", "0.5", "--beta", "-1"][..],
    ] {
        let a = heunbc(args);
        let b = heunbc(args);
        assert_eq!(a.status.code(), Some(0), "{args:?}: {}", String::from_utf8_lossy(&a.stderr));
        assert_eq!(a.stdout, b.stdout, "{args:?}");
    }
}

#[test]
fn out_flag_writes_the_same_artifact() {
    let path = std::env::temp_dir().join(format!("heunbc-cli-{}.json", std::process::id()));
    let p = path.to_str().unwrap();
    let to_file = heunbc(&["--out", p, "hautot", "--m", "2", "--alpha", "0", "--beta", "0"]);
    assert_eq!(to_file.status.code(), Some(0));
    let to_stdout = heunbc(&["hautot", "--m", "2", "--alpha", "0", "--beta", "0"]);
    let written = std::fs::read(&path).unwrap();
    std::fs::remove_file(&path).ok();
    assert_eq!(written, to_stdout.stdout);
}

#[test]
fn csv_is_a_flat_projection() {
    let out = heunbc(&["--format", "csv", "spectrum", "--n", "1", "--k3", "-1", "--k0", "-0.25", "--sign", "minus"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("path,value"));
    assert!(lines.all(|l| l.split(',').count() == 2));
}

#[test]
fn exit_codes() {
    assert_eq!(heunbc(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(heunbc(&["--help"]).status.code(), Some(0));
    assert_eq!(heunbc(&["--quadrature-n", "100", "circle-orth", "--n", "1", "--alpha", "0.3", "--beta", "0"]).status.code(), Some(2));
    assert_eq!(heunbc(&["spectrum", "--n", "2", "--k3", "-1", "--k2", "1", "--k0", "-0.25", "--sign", "plus"]).status.code(), Some(2));
    assert_eq!(heunbc(&["bender-dunne", "--s", "abc", "--J", "3", "--c", "0"]).status.code(), Some(2));
    assert_eq!(heunbc(&["halfline-orth", "--m", "2", "--alpha", "-1.5", "--beta", "0"]).status.code(), Some(2));
}

#[test]
fn every_report_carries_certificates_and_tolerances() {
    for args in [
        &["hautot", "--m", "3", "--alpha", "0.2", "--beta", "0.4"][..],
        &["weight", "--n", "1", "--alpha", "0.3", "--beta", "0"][..],
        &["halfline-orth", "--m", "2", "--alpha", "0", "--beta", "1"][..],
        &["turbiner", "--s", "0.75", "--J", "3", "--c", "0.5"][..],
        &["fredholm", "--n", "0", "--a", "-0.5", "--k1", "0.3"][..],
    ] {
        let out = heunbc(args);
        assert!(matches!(out.status.code(), Some(0) | Some(3)), "{args:?}");
        let v = json(&out);
        assert!(v["certificates"].is_object(), "{args:?}");
        assert!(v["tolerances"].is_object(), "{args:?}");
        assert!(v["inputs"].is_object(), "{args:?}");
        assert_eq!(v["verified"].as_bool().unwrap(), out.status.code() == Some(0), "{args:?}");
    }
}

#[test]
fn verify_all_quick_exit_code_tracks_outcomes() {
    let out = heunbc(&["verify-all", "--quick"]);
    let v = json(&out);
    let outcomes = v["results"].as_array().unwrap();
    assert_eq!(outcomes.len(), 12);
    let all_pass = outcomes.iter().all(|o| o["pass"].as_bool().unwrap());
    assert_eq!(out.status.code(), Some(if all_pass { 0 } else { 3 }));
    let lines = String::from_utf8(out.stderr).unwrap();
    assert_eq!(lines.lines().filter(|l| l.starts_with("PASS") || l.starts_with("FAIL")).count(), 12);
}
