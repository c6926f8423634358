//! Command-line front end. Every command emits one report with schema
//! `heunbc-report/1`: inputs, tolerances, certificates and result tables.

pub mod verify;

use crate::bhe::{self, BheParams};
use crate::cpoly::exact::{QPoly, QSqrt2};
use crate::cpoly::CPoly;
use crate::error::Error;
use crate::qes::{self, TurbinerParams};
use crate::quad::{self, ContourRule, FredholmSetup, OrthReport, CERT_TOL};
use crate::spectra::{self, Sign, SpectrumProblem};
use crate::weight;
use clap::{Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use num_complex::Complex64 as C64;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use serde_json::{json, Map, Value};
use std::io::Write;
use std::path::PathBuf;
use std::str::FromStr;

pub const SCHEMA: &str = "heunbc-report/1";

pub const EXIT_OK: i32 = 0;
pub const EXIT_INTERNAL: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_VERIFY: i32 = 3;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Precision {
    Float,
    RationalWherePossible,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum SignArg {
    Plus,
    Minus,
}

impl From<SignArg> for Sign {
    fn from(s: SignArg) -> Sign {
        match s {
            SignArg::Plus => Sign::Plus,
            SignArg::Minus => Sign::Minus,
        }
    }
}

/// Complex number written as `a`, `bi`, `a+bi` or `a-bi`.
pub fn parse_c64(s: &str) -> Result<C64, String> {
    let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    let bad = || format!("cannot parse complex number '{s}'");
    let Some(body) = t.strip_suffix('i').or_else(|| t.strip_suffix('j')) else {
        return t.parse::<f64>().map(|x| C64::new(x, 0.0)).map_err(|_| bad());
    };
    let split = body
        .char_indices()
        .skip(1)
        .filter(|&(i, c)| (c == '+' || c == '-') && !matches!(body.as_bytes()[i - 1], b'e' | b'E'))
        .map(|(i, _)| i)
        .last();
    let im = |x: &str| match x {
        "" | "+" => Ok(1.0),
        "-" => Ok(-1.0),
        v => v.parse::<f64>().map_err(|_| bad()),
    };
    match split {
        Some(i) => Ok(C64::new(body[..i].parse().map_err(|_| bad())?, im(&body[i..])?)),
        None => Ok(C64::new(0.0, im(body)?)),
    }
}

/// Exact rational from a decimal or `p/q` literal.
pub fn parse_rational(s: &str) -> Option<BigRational> {
    let s = s.trim();
    if let Some((p, q)) = s.split_once('/') {
        let (p, q) = (BigInt::from_str(p.trim()).ok()?, BigInt::from_str(q.trim()).ok()?);
        return (!q.is_zero()).then(|| BigRational::new(p, q));
    }
    if s.contains(['e', 'E']) {
        return None;
    }
    let (int, frac) = s.split_once('.').unwrap_or((s, ""));
    let digits = format!("{int}{frac}");
    let num = BigInt::from_str(if digits == "-" { "-0" } else { &digits }).ok()?;
    Some(BigRational::new(num, BigInt::from(10u32).pow(frac.len() as u32)))
}

#[derive(Parser, Debug)]
#[command(name = "heunbc", version, about = "Biconfluent Heun eigen-solutions: spectra, weights, orthogonality and Fredholm checks")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[arg(long, global = true, value_enum, default_value = "json")]
    pub format: Format,
    /// Write the artifact here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Trapezoid node count (power of two, at least 16).
    #[arg(long = "quadrature-n", global = true, default_value_t = quad::DEFAULT_N)]
    pub quadrature_n: usize,
    #[arg(long, global = true, value_enum, default_value = "float")]
    pub precision: Precision,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Terminating BHE polynomials P_{m,ν} and their reversals.
    Hautot {
        #[arg(long)]
        m: usize,
        #[arg(long, value_parser = parse_c64, allow_hyphen_values = true)]
        alpha: C64,
        #[arg(long, value_parser = parse_c64, allow_hyphen_values = true)]
        beta: C64,
    },
    /// K1 spectrum of the periodic equation from the tridiagonal determinant.
    Spectrum {
        #[arg(long)]
        n: usize,
        #[arg(long, value_parser = parse_c64, allow_hyphen_values = true)]
        k3: C64,
        /// Defaults to the value fixed by the termination condition.
        #[arg(long, value_parser = parse_c64, allow_hyphen_values = true)]
        k2: Option<C64>,
        #[arg(long, value_parser = parse_c64, allow_hyphen_values = true)]
        k0: C64,
        #[arg(long, value_enum)]
        sign: SignArg,
    },
    /// Laurent coefficients of the circle weight.
    Weight {
        #[arg(long)]
        n: usize,
        #[arg(long, value_parser = parse_c64, allow_hyphen_values = true)]
        alpha: C64,
        #[arg(long, value_parser = parse_c64, allow_hyphen_values = true)]
        beta: C64,
        #[arg(long, default_value_t = 60)]
        kmax: usize,
    },
    /// Gram matrix of the reversed polynomials on |t| = radius.
    CircleOrth {
        #[arg(long)]
        n: usize,
        #[arg(long, value_parser = parse_c64, allow_hyphen_values = true)]
        alpha: C64,
        #[arg(long, value_parser = parse_c64, allow_hyphen_values = true)]
        beta: C64,
        #[arg(long, default_value_t = 1.0)]
        radius: f64,
    },
    /// Gram matrix of P_{m,ν} on the half-line.
    HalflineOrth {
        #[arg(long)]
        m: usize,
        #[arg(long, allow_hyphen_values = true)]
        alpha: f64,
        #[arg(long, allow_hyphen_values = true)]
        beta: f64,
    },
    /// Gram matrix of BH_{n,ν} on [0, 2πi] against e^z.
    SingleOrth {
        #[arg(long)]
        n: usize,
        #[arg(long, allow_hyphen_values = true)]
        k3: f64,
        #[arg(long, allow_hyphen_values = true)]
        sigma: f64,
        /// Also integrate over [π, π+2πi].
        #[arg(long)]
        shifted: bool,
    },
    /// Double orthogonality matrix over [0, 2πi] × [π, π+2πi].
    DoubleOrth {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        m: usize,
        #[arg(long, allow_hyphen_values = true)]
        k3: f64,
        #[arg(long = "sigma-n", allow_hyphen_values = true)]
        sigma_n: f64,
        #[arg(long = "sigma-m", allow_hyphen_values = true)]
        sigma_m: f64,
    },
    /// Fredholm eigenvalue λ for the rotated solution.
    Fredholm {
        #[arg(long)]
        n: usize,
        /// Kernel constant, ±1/2.
        #[arg(long, allow_hyphen_values = true)]
        a: f64,
        /// Defaults to the self-consistent values.
        #[arg(long, value_parser = parse_c64, allow_hyphen_values = true)]
        k1: Option<C64>,
        #[arg(long, default_value_t = 16)]
        samples: usize,
    },
    /// Bender–Dunne polynomials P_k^c(E) and their factorization.
    BenderDunne {
        #[arg(long)]
        s: String,
        #[arg(long = "J")]
        j: usize,
        #[arg(long, allow_hyphen_values = true)]
        c: String,
        #[arg(long, default_value_t = 6)]
        kmax: usize,
    },
    /// Quasi-exact spectrum, coefficient maps and wavefunction check.
    Turbiner {
        #[arg(long)]
        s: f64,
        #[arg(long = "J")]
        j: usize,
        #[arg(long, allow_hyphen_values = true)]
        c: f64,
    },
    /// The acceptance suite.
    VerifyAll {
        /// Reduced sizes.
        #[arg(long)]
        quick: bool,
    },
}

/// Outcome of one command before formatting.
#[derive(Debug)]
pub struct Report {
    pub command: &'static str,
    pub inputs: Value,
    pub tolerances: Value,
    pub certificates: Value,
    pub results: Value,
    pub verified: bool,
}

impl Report {
    pub fn to_json(&self) -> Value {
        json!({
            "schema": SCHEMA,
            "command": self.command,
            "inputs": self.inputs,
            "tolerances": self.tolerances,
            "certificates": self.certificates,
            "results": self.results,
            "verified": self.verified,
        })
    }
}

pub fn cj(z: C64) -> Value {
    json!({"re": num(z.re), "im": num(z.im)})
}

fn num(x: f64) -> Value {
    if x.is_finite() {
        json!(x)
    } else {
        json!(x.to_string())
    }
}

fn cvec(v: &[C64]) -> Value {
    Value::Array(v.iter().map(|&z| cj(z)).collect())
}

fn cmat(m: &[Vec<C64>]) -> Value {
    Value::Array(m.iter().map(|r| cvec(r)).collect())
}

fn poly_json(p: &CPoly) -> Value {
    cvec(p.coeffs())
}

fn q_json(q: &QSqrt2) -> Value {
    json!({"rational": q.a.to_string(), "sqrt2": q.b.to_string(), "value": num(q.to_f64())})
}

fn qpoly_json(p: &QPoly) -> Value {
    Value::Array(p.coeffs().iter().map(q_json).collect())
}

fn params_json(p: &BheParams) -> Value {
    json!({"alpha": cj(p.alpha), "beta": cj(p.beta), "gamma": cj(p.gamma), "delta": cj(p.delta)})
}

fn coeffs_json(k: &bhe::PbheCoeffs) -> Value {
    json!({"k4": cj(k.k4), "k3": cj(k.k3), "k2": cj(k.k2), "k1": cj(k.k1), "k0": cj(k.k0), "sigma": cj(k.sigma)})
}

fn orth_json(r: &OrthReport) -> Value {
    json!({
        "gram": cmat(&r.gram),
        "normalized_offdiag": num(r.normalized_offdiag),
        "diag_nonzero": r.diag_nonzero,
        "diag_scale": r.diag_scale.iter().map(|&x| num(x)).collect::<Vec<_>>(),
        "asymmetry": num(r.asymmetry),
        "skipped": r.skipped,
        "rule": r.rule.map(|r| json!({"kind": format!("{:?}", r.kind), "n": r.n})),
        "notes": r.notes,
    })
}

/// Flat `path,value` projection of every leaf under `results`.
pub fn to_csv(report: &Report) -> String {
    fn walk(prefix: &str, v: &Value, out: &mut Vec<(String, String)>) {
        match v {
            Value::Object(m) => {
                for (k, x) in m {
                    walk(&if prefix.is_empty() { k.clone() } else { format!("{prefix}.{k}") }, x, out);
                }
            }
            Value::Array(a) => {
                for (i, x) in a.iter().enumerate() {
                    walk(&format!("{prefix}[{i}]"), x, out);
                }
            }
            Value::String(s) => out.push((prefix.to_string(), s.clone())),
            other => out.push((prefix.to_string(), other.to_string())),
        }
    }
    let mut rows = vec![];
    walk("certificates", &report.certificates, &mut rows);
    walk("results", &report.results, &mut rows);
    let mut s = String::from("path,value\n");
    for (p, v) in rows {
        let v = if v.contains([',', '"']) { format!("\"{}\"", v.replace('"', "\"\"")) } else { v };
        s.push_str(&format!("{p},{v}\n"));
    }
    s
}

/// Exit code for a library error.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::InvariantViolation(_) | Error::NonTerminatingSeries { .. } => EXIT_VERIFY,
        Error::RootConvergence { .. } | Error::NonFiniteNode { .. } | Error::DivisionByZero => EXIT_INTERNAL,
        _ => EXIT_USAGE,
    }
}

fn rule_err(e: Error) -> (i32, String) {
    (exit_code(&e), e.to_string())
}

type CmdResult = std::result::Result<Report, (i32, String)>;

trait Lift<T> {
    fn lift(self) -> std::result::Result<T, (i32, String)>;
}

impl<T> Lift<T> for crate::Result<T> {
    fn lift(self) -> std::result::Result<T, (i32, String)> {
        self.map_err(rule_err)
    }
}

fn hautot_cmd(m: usize, alpha: C64, beta: C64) -> CmdResult {
    let sols = bhe::hautot(m, alpha, beta).lift()?;
    let mut worst = 0.0f64;
    let mut rows = vec![];
    for s in &sols {
        let pts = [C64::new(0.7, 0.3), C64::new(-1.1, 0.4), C64::new(0.2, -1.3)];
        let r = pts.iter().map(|&z| bhe::bhe_residual_poly(&s.params, &s.poly, z).relative()).fold(0.0, f64::max);
        worst = worst.max(r);
        rows.push(json!({
            "nu": s.nu,
            "delta": cj(s.delta_eig),
            "multiplicity": s.multiplicity,
            "poly": poly_json(&s.poly),
            "reversed": poly_json(&s.reversed),
            "params": params_json(&s.params),
            "residual": num(r),
        }));
    }
    Ok(Report {
        command: "hautot",
        inputs: json!({"m": m, "alpha": cj(alpha), "beta": cj(beta)}),
        tolerances: json!({"residual": 1e-9}),
        certificates: json!({"max_relative_residual": num(worst)}),
        results: json!({"solutions": rows, "termination_poly": poly_json(&bhe::termination_poly(m, alpha, beta))}),
        verified: worst < 1e-9,
    })
}

fn spectrum_cmd(n: usize, k3: C64, k2: Option<C64>, k0: C64, sign: Sign) -> CmdResult {
    let p = match k2 {
        Some(k2) => SpectrumProblem::new(n, k3, k2, k0, sign).lift()?,
        None => SpectrumProblem::with_k2_from_condition(n, k3, k0, sign),
    };
    let pairs = spectra::k1_spectrum(&p).lift()?;
    let roots: Vec<C64> = pairs.iter().map(|e| e.k1).collect();
    let b = bhe::bhe_from_pbhe(&p.coeffs(C64::new(0.0, 0.0))).lift()?;
    let oracle: Vec<C64> = bhe::termination_poly(n, b.alpha, b.beta).roots().lift()?.iter().map(|d| -d / 2.0).collect();
    let dev = verify::root_set_distance(&roots, &oracle);
    Ok(Report {
        command: "spectrum",
        inputs: json!({"n": n, "k3": cj(k3), "k2": cj(p.k2), "k0": cj(k0), "sign": format!("{sign:?}").to_lowercase()}),
        tolerances: json!({"oracle_deviation": verify::TOL_SPECTRUM, "min_gap": verify::TOL_GAP}),
        certificates: json!({"oracle_deviation": num(dev)}),
        results: json!({
            "sigma": cj(p.sigma()),
            "determinant": poly_json(&spectra::det_poly(&p)),
            "k1": cvec(&roots),
            "multiplicities": pairs.iter().map(|e| e.multiplicity).collect::<Vec<_>>(),
            "min_gap": num(spectra::min_gap(&roots)),
            "reality_hypotheses": p.reality_hypotheses(),
        }),
        verified: dev < verify::TOL_SPECTRUM,
    })
}

fn weight_cmd(n: usize, alpha: C64, beta: C64, kmax: usize) -> CmdResult {
    let w = weight::weight_coeffs(n, alpha, beta, kmax).lift()?;
    let resid = w.recursion_residuals().into_iter().fold(0.0, f64::max);
    let diag = weight::convergence_diagnostic(n, alpha, beta, kmax).ok();
    let sa = (0..32)
        .map(|j| weight::self_adjoint_residual(&w, C64::from_polar(1.0, std::f64::consts::PI * j as f64 / 16.0)).norm())
        .fold(0.0, f64::max);
    Ok(Report {
        command: "weight",
        inputs: json!({"n": n, "alpha": cj(alpha), "beta": cj(beta), "kmax": kmax}),
        tolerances: json!({"tail": weight::TAIL_TOL}),
        certificates: json!({"tail_estimate": num(w.tail_estimate), "recursion_residual": num(resid)}),
        results: json!({
            "coeffs": cvec(&w.coeffs),
            "convergence_diagnostic": diag.map(num),
            "self_adjoint_residual": num(sa),
        }),
        verified: w.tail_estimate < weight::TAIL_TOL,
    })
}

fn orth_report(command: &'static str, inputs: Value, r: &OrthReport, tol: f64) -> Report {
    Report {
        command,
        inputs,
        tolerances: json!({"normalized_offdiag": tol, "certificate": CERT_TOL, "diag_nonzero": 1e-6}),
        certificates: json!({"n_to_2n": num(r.certificate)}),
        results: orth_json(r),
        verified: r.normalized_offdiag < tol && r.diag_nonzero && r.certified(),
    }
}

fn bender_dunne_cmd(s: &str, j: usize, c: &str, kmax: usize, precision: Precision) -> CmdResult {
    let usage = |w: &str| (EXIT_USAGE, format!("--{w} is not a number"));
    let real = |v: &str| v.parse::<f64>().ok().or_else(|| parse_rational(v)?.to_f64());
    let sf = real(s).ok_or_else(|| usage("s"))?;
    let cf = real(c).ok_or_else(|| usage("c"))?;
    let nmax = kmax.saturating_sub(j);
    let float_polys = qes::bender_dunne_polys(sf, j, cf, kmax);
    let fact = qes::factorization_check(sf, j, cf, nmax);
    let worst = fact.iter().map(|f| f.1).fold(0.0, f64::max);
    let mut results = json!({
        "polys": float_polys.iter().map(poly_json).collect::<Vec<_>>(),
        "quotients": fact.iter().map(|f| poly_json(&f.0)).collect::<Vec<_>>(),
        "remainders": fact.iter().map(|f| num(f.1)).collect::<Vec<_>>(),
    });
    let mut verified = worst < 1e-10;
    let mut exact_used = false;
    if precision == Precision::RationalWherePossible {
        if let (Some(sq), Some(cq)) = (parse_rational(s), parse_rational(c)) {
            let ex = qes::factorization_check_exact(&sq, j, &cq, nmax);
            let polys = qes::bender_dunne_polys_exact(&sq, j, &cq, kmax);
            verified = ex.iter().all(|e| e.1);
            exact_used = true;
            let m = results.as_object_mut().unwrap();
            m.insert("exact_polys".into(), Value::Array(polys.iter().map(qpoly_json).collect()));
            m.insert("exact_quotients".into(), Value::Array(ex.iter().map(|e| qpoly_json(&e.0)).collect()));
            m.insert("exact_remainder_zero".into(), json!(ex.iter().map(|e| e.1).collect::<Vec<_>>()));
        }
    }
    Ok(Report {
        command: "bender-dunne",
        inputs: json!({"s": s, "J": j, "c": c, "kmax": kmax, "exact": exact_used}),
        tolerances: json!({"float_remainder": 1e-10}),
        certificates: json!({"max_float_remainder": num(worst)}),
        results,
        verified,
    })
}

fn turbiner_cmd(s: f64, j: usize, c: f64) -> CmdResult {
    let paths = qes::qes_spectrum_paths(s, j, c).lift()?;
    let scale = 1.0 + paths.from_determinant.iter().map(|e| e.norm()).fold(0.0, f64::max);
    let agree = paths.max_deviation <= 1e-9 * scale;
    let cond = qes::condition_ii(s, j, c);
    let mut levels = vec![];
    let mut worst = 0.0f64;
    for &e in &paths.from_determinant {
        let p = TurbinerParams::new(s, j, c, e);
        let mut row = Map::new();
        row.insert("energy".into(), cj(e));
        row.insert("periodic".into(), coeffs_json(&qes::periodic_turbiner_coeffs(&p)));
        row.insert("periodic_displayed".into(), coeffs_json(&qes::periodic_turbiner_coeffs_displayed(&p)));
        row.insert("bhe".into(), params_json(&qes::bhe_from_turbiner(&p)));
        if c == 0.0 {
            let r = [0.6, 1.0, 1.7]
                .iter()
                .map(|&x| qes::hamiltonian_residual(&p, C64::new(x, 0.0)).map(|r| r.relative()))
                .collect::<crate::Result<Vec<_>>>()
                .lift()?
                .into_iter()
                .fold(0.0, f64::max);
            worst = worst.max(r);
            row.insert("hamiltonian_residual".into(), num(r));
        }
        levels.push(Value::Object(row));
    }
    Ok(Report {
        command: "turbiner",
        inputs: json!({"s": s, "J": j, "c": c}),
        tolerances: json!({"path_agreement": 1e-9, "hamiltonian_residual": 1e-9}),
        certificates: json!({"path_deviation": num(paths.max_deviation), "max_hamiltonian_residual": num(worst)}),
        results: json!({
            "energies": cvec(&paths.from_determinant),
            "energies_from_delta": cvec(&paths.from_delta_roots),
            "energies_from_bender_dunne": cvec(&paths.from_bender_dunne),
            "condition_ii": {
                "displayed_plus": num(cond.displayed_plus),
                "displayed_minus": num(cond.displayed_minus),
                "displayed_rhs": num(cond.displayed_rhs),
                "derived_lhs": num(cond.derived_lhs),
                "derived_rhs": num(cond.derived_rhs),
            },
            "levels": levels,
        }),
        verified: agree && worst < 1e-9,
    })
}

fn fredholm_cmd(n: usize, a: f64, k1: Option<C64>, samples: usize, nodes: usize) -> CmdResult {
    let k1s = match k1 {
        Some(k) => vec![k],
        None => match FredholmSetup::consistent_k1(n, a).lift()? {
            Some(v) => v,
            None => {
                return Err((EXIT_USAGE, "every K1 is self-consistent for this (n, a); pass --k1".into()));
            }
        },
    };
    let mut rows = vec![];
    let mut verified = true;
    let mut cert = 0.0f64;
    let grid: Vec<f64> = (0..8).map(|j| std::f64::consts::PI * j as f64 / 4.0).collect();
    for k1 in k1s {
        let setup = FredholmSetup::new(n, a, k1).lift()?;
        let sol = setup.solution().lift()?;
        let ac = C64::new(a, 0.0);
        let conc = quad::concomitant_check(&sol, ac, setup.kernel_c(), &grid).lift()?;
        let mut row = json!({"k1": cj(k1), "sigma": cj(setup.sigma), "coeffs": coeffs_json(&setup.coeffs()), "concomitant_defect": num(conc)});
        match quad::fredholm_lambda(&sol, ac, setup.kernel_c(), samples, nodes) {
            Ok(r) => {
                cert = cert.max(r.certificate);
                verified &= r.variation < verify::TOL_LAMBDA && r.certificate < CERT_TOL;
                let m = row.as_object_mut().unwrap();
                m.insert("lambda".into(), cj(r.lambda));
                m.insert("variation".into(), num(r.variation));
                m.insert("samples".into(), json!(r.samples.iter().map(|&x| num(x)).collect::<Vec<_>>()));
                m.insert("lambdas".into(), cvec(&r.lambdas));
            }
            Err(e) => {
                verified = false;
                row.as_object_mut().unwrap().insert("error".into(), json!(e.to_string()));
            }
        }
        rows.push(row);
    }
    Ok(Report {
        command: "fredholm",
        inputs: json!({"n": n, "a": a, "k1": k1.map(cj), "samples": samples, "quadrature_n": nodes}),
        tolerances: json!({"variation": verify::TOL_LAMBDA, "certificate": CERT_TOL}),
        certificates: json!({"n_to_2n": num(cert)}),
        results: json!({"pairs": rows}),
        verified,
    })
}

fn verify_cmd(quick: bool) -> CmdResult {
    let size = if quick { verify::Size::Quick } else { verify::Size::Full };
    let outcomes = verify::run_all(size, |o| eprintln!("{}", o.line()));
    Ok(Report {
        command: "verify-all",
        inputs: json!({"size": size}),
        tolerances: json!(outcomes.iter().map(|o| (o.id.to_string(), num(o.tolerance))).collect::<Map<_, _>>()),
        certificates: json!({"worst_quadrature_certificate": outcomes.iter().find(|o| o.id == 12).map(|o| num(o.measured))}),
        results: serde_json::to_value(&outcomes).unwrap_or(Value::Null),
        verified: outcomes.iter().all(|o| o.pass),
    })
}

/// Runs one parsed command and returns the report.
pub fn execute(cli: &Cli) -> CmdResult {
    quad::check_node_count(cli.quadrature_n).lift()?;
    let nodes = cli.quadrature_n;
    match &cli.command {
        Command::Hautot { m, alpha, beta } => hautot_cmd(*m, *alpha, *beta),
        Command::Spectrum { n, k3, k2, k0, sign } => spectrum_cmd(*n, *k3, *k2, *k0, (*sign).into()),
        Command::Weight { n, alpha, beta, kmax } => weight_cmd(*n, *alpha, *beta, *kmax),
        Command::CircleOrth { n, alpha, beta, radius } => {
            let rule = ContourRule::circle(*radius, nodes).lift()?;
            let r = quad::circle_orthogonality(*n, *alpha, *beta, &rule).lift()?;
            let inputs = json!({"n": n, "alpha": cj(*alpha), "beta": cj(*beta), "radius": radius, "quadrature_n": nodes});
            Ok(orth_report("circle-orth", inputs, &r, verify::TOL_CIRCLE))
        }
        Command::HalflineOrth { m, alpha, beta } => {
            let r = quad::halfline_orthogonality(*m, *alpha, *beta).lift()?;
            Ok(orth_report("halfline-orth", json!({"m": m, "alpha": alpha, "beta": beta}), &r, verify::TOL_HALFLINE))
        }
        Command::SingleOrth { n, k3, sigma, shifted } => {
            let p = quad::segment_problem(*n, *k3, *sigma);
            let r = quad::single_orthogonality(&p, &ContourRule::vertical(C64::new(0.0, 0.0), nodes).lift()?).lift()?;
            let inputs = json!({"n": n, "k3": k3, "sigma": sigma, "k2": num(p.k2.re), "quadrature_n": nodes});
            let mut rep = orth_report("single-orth", inputs, &r, verify::TOL_SEGMENT);
            if *shifted {
                let rule = ContourRule::vertical(C64::new(std::f64::consts::PI, 0.0), nodes).lift()?;
                let s = quad::shifted_orthogonality(&p, &rule, None).lift()?;
                rep.verified &= s.normalized_offdiag < verify::TOL_SEGMENT && s.diag_nonzero && s.certified();
                rep.certificates = json!({"n_to_2n": num(r.certificate), "shifted_n_to_2n": num(s.certificate)});
                rep.results = json!({"single": orth_json(&r), "shifted": orth_json(&s)});
            }
            Ok(rep)
        }
        Command::DoubleOrth { n, m, k3, sigma_n, sigma_m } => {
            let pn = quad::segment_problem(*n, *k3, *sigma_n);
            let pm = quad::segment_problem(*m, *k3, *sigma_m);
            let r = quad::double_orthogonality(&pn, &pm, nodes, None).lift()?;
            Ok(Report {
                command: "double-orth",
                inputs: json!({"n": n, "m": m, "k3": k3, "sigma_n": sigma_n, "sigma_m": sigma_m, "quadrature_n": nodes}),
                tolerances: json!({"normalized_offdiag": verify::TOL_DOUBLE, "certificate": CERT_TOL}),
                certificates: json!({"n_to_2n": num(r.certificate)}),
                results: json!({
                    "labels": r.labels,
                    "entries": cmat(&r.entries),
                    "normalized": r.normalized.iter().map(|row| row.iter().map(|&x| num(x)).collect::<Vec<_>>()).collect::<Vec<_>>(),
                    "max_normalized_offdiag": num(r.max_normalized_offdiag),
                    "diag_nonzero": r.diag_nonzero,
                    "precision_bits": r.precision_bits,
                }),
                verified: r.max_normalized_offdiag < verify::TOL_DOUBLE && r.certified(),
            })
        }
        Command::Fredholm { n, a, k1, samples } => fredholm_cmd(*n, *a, *k1, *samples, nodes),
        Command::BenderDunne { s, j, c, kmax } => bender_dunne_cmd(s, *j, c, *kmax, cli.precision),
        Command::Turbiner { s, j, c } => turbiner_cmd(*s, *j, *c),
        Command::VerifyAll { quick } => verify_cmd(*quick),
    }
}

/// Parses, runs, writes the artifact and returns the exit status.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    let report = match execute(&cli) {
        Ok(r) => r,
        Err((code, msg)) => {
            eprintln!("error: {msg}");
            return code;
        }
    };
    let text = match cli.format {
        Format::Json => serde_json::to_string_pretty(&report.to_json()).unwrap_or_default() + "\n",
        Format::Csv => to_csv(&report),
    };
    let written = match &cli.out {
        Some(p) => std::fs::write(p, &text),
        None => std::io::stdout().write_all(text.as_bytes()),
    };
    if let Err(e) = written {
        eprintln!("error: {e}");
        return EXIT_INTERNAL;
    }
    if report.verified {
        EXIT_OK
    } else {
        EXIT_VERIFY
    }
}
