//! Python bindings for `heunbc`.

use heunbc::bhe;
use heunbc::cli::verify::{self, Size};
use heunbc::cpoly::CPoly;
use heunbc::qes::{self, TurbinerParams};
use heunbc::quad::{self, ContourRule, FredholmSetup};
use heunbc::spectra::{self, Sign};
use heunbc::weight;
use heunbc::Error;
use num_complex::Complex64 as C64;
use pyo3::exceptions::{PyArithmeticError, PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyDict;

fn py_err(e: Error) -> PyErr {
    match e {
        Error::RootConvergence { .. } | Error::NonFiniteNode { .. } => PyArithmeticError::new_err(e.to_string()),
        Error::InvariantViolation(_) => PyRuntimeError::new_err(e.to_string()),
        _ => PyValueError::new_err(e.to_string()),
    }
}

fn coeffs(p: &CPoly) -> Vec<C64> {
    p.coeffs().to_vec()
}

fn sign(s: &str) -> PyResult<Sign> {
    match s {
        "plus" | "+" => Ok(Sign::Plus),
        "minus" | "-" => Ok(Sign::Minus),
        _ => Err(PyValueError::new_err("sign must be 'plus' or 'minus'")),
    }
}

fn rule(kind: &str, n: usize, radius: f64) -> PyResult<ContourRule> {
    match kind {
        "circle" => ContourRule::circle(radius, n),
        "vertical" => ContourRule::vertical(C64::new(0.0, 0.0), n),
        "shifted" => ContourRule::vertical(C64::new(std::f64::consts::PI, 0.0), n),
        _ => return Err(PyValueError::new_err("unknown contour")),
    }
    .map_err(py_err)
}

/// Terminating solution `P_{m,ν}` of the biconfluent Heun equation.
#[pyclass(name = "HautotSolution", frozen)]
struct PyHautot {
    inner: bhe::HautotSolution,
}

#[pymethods]
impl PyHautot {
    #[getter]
    fn m(&self) -> usize {
        self.inner.m
    }
    #[getter]
    fn nu(&self) -> usize {
        self.inner.nu
    }
    #[getter]
    fn delta(&self) -> C64 {
        self.inner.delta_eig
    }
    #[getter]
    fn multiplicity(&self) -> usize {
        self.inner.multiplicity
    }
    #[getter]
    fn poly(&self) -> Vec<C64> {
        coeffs(&self.inner.poly)
    }
    #[getter]
    fn reversed(&self) -> Vec<C64> {
        coeffs(&self.inner.reversed)
    }
    /// `(α, β, γ, δ)`.
    #[getter]
    fn params(&self) -> (C64, C64, C64, C64) {
        let p = self.inner.params;
        (p.alpha, p.beta, p.gamma, p.delta)
    }
    fn bhe_residual(&self, z: C64) -> C64 {
        bhe::bhe_residual(&self.inner.params, &self.inner, z)
    }
    fn reversed_residual(&self, z: C64) -> PyResult<C64> {
        bhe::reversed_residual(&self.inner, z).map_err(py_err)
    }
    fn __repr__(&self) -> String {
        format!("HautotSolution(m={}, nu={}, delta={})", self.inner.m, self.inner.nu, self.inner.delta_eig)
    }
}

/// Periodic-form eigenvalue problem at fixed `(n, K3, K2, K0, sign)`.
#[pyclass(name = "SpectrumProblem", frozen)]
struct PySpectrumProblem {
    inner: spectra::SpectrumProblem,
}

#[pymethods]
impl PySpectrumProblem {
    #[new]
    #[pyo3(signature = (n, k3, k0, sign, k2=None))]
    fn new(n: usize, k3: C64, k0: C64, sign: &str, k2: Option<C64>) -> PyResult<Self> {
        let s = self::sign(sign)?;
        let inner = match k2 {
            Some(k2) => spectra::SpectrumProblem::new(n, k3, k2, k0, s).map_err(py_err)?,
            None => spectra::SpectrumProblem::with_k2_from_condition(n, k3, k0, s),
        };
        Ok(PySpectrumProblem { inner })
    }

    #[staticmethod]
    fn from_sigma(n: usize, k3: C64, sigma: C64) -> Self {
        PySpectrumProblem { inner: spectra::SpectrumProblem::from_sigma(n, k3, sigma) }
    }

    #[getter]
    fn n(&self) -> usize {
        self.inner.n
    }
    #[getter]
    fn k2(&self) -> C64 {
        self.inner.k2
    }
    #[getter]
    fn sigma(&self) -> C64 {
        self.inner.sigma()
    }
    fn det_poly(&self) -> Vec<C64> {
        coeffs(&spectra::det_poly(&self.inner))
    }
    fn k1_spectrum(&self) -> PyResult<Vec<C64>> {
        Ok(spectra::k1_spectrum(&self.inner).map_err(py_err)?.into_iter().map(|p| p.k1).collect())
    }
    /// `(value, d/dz, d²/dz²)` of every `BH_{n,ν}` at `z`.
    fn solutions_at(&self, z: C64) -> PyResult<Vec<(C64, C64, C64)>> {
        Ok(spectra::family(&self.inner).map_err(py_err)?.iter().map(|s| s.eval(z)).collect())
    }
    /// Relative residual of the periodic equation for every `BH_{n,ν}` at `z`.
    fn residuals_at(&self, z: C64) -> PyResult<Vec<f64>> {
        Ok(spectra::family(&self.inner)
            .map_err(py_err)?
            .iter()
            .map(|s| spectra::pbhe_residual(&s.coeffs, s, z).relative())
            .collect())
    }
    fn __repr__(&self) -> String {
        let p = &self.inner;
        format!("SpectrumProblem(n={}, k3={}, k2={}, k0={}, sign={:?})", p.n, p.k3, p.k2, p.k0, p.sign)
    }
}

/// Truncated Laurent weight `Σ a_k z^{-k}`.
#[pyclass(name = "WeightSeries", frozen)]
struct PyWeight {
    inner: weight::WeightSeries,
}

#[pymethods]
impl PyWeight {
    #[getter]
    fn coeffs(&self) -> Vec<C64> {
        self.inner.coeffs.clone()
    }
    #[getter]
    fn tail_estimate(&self) -> f64 {
        self.inner.tail_estimate
    }
    fn __call__(&self, z: C64) -> PyResult<C64> {
        weight::weight_eval(&self.inner, z).map_err(py_err)
    }
    fn self_adjoint_residual(&self, z: C64) -> C64 {
        weight::self_adjoint_residual(&self.inner, z)
    }
}

/// Gram matrix of a bilinear pairing with its diagnostics.
#[pyclass(name = "OrthReport", frozen, get_all)]
struct PyOrthReport {
    gram: Vec<Vec<C64>>,
    normalized_offdiag: f64,
    diag_nonzero: bool,
    certificate: f64,
    skipped: Vec<usize>,
    notes: Vec<String>,
}

impl From<quad::OrthReport> for PyOrthReport {
    fn from(r: quad::OrthReport) -> Self {
        PyOrthReport {
            gram: r.gram,
            normalized_offdiag: r.normalized_offdiag,
            diag_nonzero: r.diag_nonzero,
            certificate: r.certificate,
            skipped: r.skipped,
            notes: r.notes,
        }
    }
}

#[pymethods]
impl PyOrthReport {
    fn __repr__(&self) -> String {
        format!(
            "OrthReport(size={}, normalized_offdiag={:e}, certificate={:e})",
            self.gram.len(),
            self.normalized_offdiag,
            self.certificate
        )
    }
}

#[pyfunction]
fn roots(c: Vec<C64>) -> PyResult<Vec<C64>> {
    CPoly::new(c).roots().map_err(py_err)
}

#[pyfunction]
fn reverse(c: Vec<C64>, n: usize) -> PyResult<Vec<C64>> {
    Ok(coeffs(&CPoly::new(c).reverse(n).map_err(py_err)?))
}

#[pyfunction]
fn series_coeffs(alpha: C64, beta: C64, gamma: C64, delta: C64, kmax: usize) -> PyResult<Vec<C64>> {
    bhe::series_coeffs(&bhe::BheParams::new(alpha, beta, gamma, delta), kmax).map_err(py_err)
}

#[pyfunction]
fn hautot(m: usize, alpha: C64, beta: C64) -> PyResult<Vec<PyHautot>> {
    Ok(bhe::hautot(m, alpha, beta).map_err(py_err)?.into_iter().map(|inner| PyHautot { inner }).collect())
}

/// `{K4, K3, K2, K1, K0, sigma}` of the periodic form.
#[pyfunction]
fn pbhe_from_bhe(py: Python<'_>, alpha: C64, beta: C64, gamma: C64, delta: C64) -> PyResult<Bound<'_, PyDict>> {
    let k = bhe::pbhe_from_bhe(&bhe::BheParams::new(alpha, beta, gamma, delta));
    let d = PyDict::new_bound(py);
    for (name, v) in [("K4", k.k4), ("K3", k.k3), ("K2", k.k2), ("K1", k.k1), ("K0", k.k0), ("sigma", k.sigma)] {
        d.set_item(name, v)?;
    }
    Ok(d)
}

#[pyfunction]
fn check_termination(k3: C64, k2: C64, k0: C64, sign: &str) -> PyResult<Option<usize>> {
    Ok(spectra::check_termination(k3, k2, k0, self::sign(sign)?))
}

#[pyfunction]
#[pyo3(signature = (n, alpha, beta, kmax=60))]
fn weight_coeffs(n: usize, alpha: C64, beta: C64, kmax: usize) -> PyResult<PyWeight> {
    Ok(PyWeight { inner: weight::weight_coeffs(n, alpha, beta, kmax).map_err(py_err)? })
}

#[pyfunction]
#[pyo3(signature = (n, alpha, kmax=60))]
fn weight_closed_form(n: usize, alpha: C64, kmax: usize) -> PyResult<PyWeight> {
    Ok(PyWeight { inner: weight::weight_closed_form(n, alpha, kmax).map_err(py_err)? })
}

#[pyfunction]
#[pyo3(signature = (n, alpha, beta, kmax=200))]
fn convergence_diagnostic(n: usize, alpha: C64, beta: C64, kmax: usize) -> PyResult<f64> {
    weight::convergence_diagnostic(n, alpha, beta, kmax).map_err(py_err)
}

#[pyfunction]
#[pyo3(signature = (n, alpha, beta, radius=1.0, nodes=512))]
fn circle_orthogonality(n: usize, alpha: C64, beta: C64, radius: f64, nodes: usize) -> PyResult<PyOrthReport> {
    let r = rule("circle", nodes, radius)?;
    Ok(quad::circle_orthogonality(n, alpha, beta, &r).map_err(py_err)?.into())
}

#[pyfunction]
fn halfline_orthogonality(m: usize, alpha: f64, beta: f64) -> PyResult<PyOrthReport> {
    Ok(quad::halfline_orthogonality(m, alpha, beta).map_err(py_err)?.into())
}

#[pyfunction]
#[pyo3(signature = (problem, nodes=512, shifted=false))]
fn single_orthogonality(problem: &PySpectrumProblem, nodes: usize, shifted: bool) -> PyResult<PyOrthReport> {
    let r = if shifted {
        quad::shifted_orthogonality(&problem.inner, &rule("shifted", nodes, 1.0)?, None)
    } else {
        quad::single_orthogonality(&problem.inner, &rule("vertical", nodes, 1.0)?)
    };
    Ok(r.map_err(py_err)?.into())
}

/// `(max normalized off-diagonal, certificate, entries)` of the double pairing.
#[pyfunction]
#[pyo3(signature = (pn, pm, nodes=128))]
fn double_orthogonality(pn: &PySpectrumProblem, pm: &PySpectrumProblem, nodes: usize) -> PyResult<(f64, f64, Vec<Vec<C64>>)> {
    let r = quad::double_orthogonality(&pn.inner, &pm.inner, nodes, None).map_err(py_err)?;
    Ok((r.max_normalized_offdiag, r.certificate, r.entries))
}

/// `(lambda, variation, certificate)` for the rotated solution at `(n, a, K1)`.
#[pyfunction]
#[pyo3(signature = (n, a, k1, samples=16, nodes=512))]
fn fredholm_lambda(n: usize, a: f64, k1: C64, samples: usize, nodes: usize) -> PyResult<(C64, f64, f64)> {
    let setup = FredholmSetup::new(n, a, k1).map_err(py_err)?;
    let sol = setup.solution().map_err(py_err)?;
    let r = quad::fredholm_lambda(&sol, setup.a, setup.kernel_c(), samples, nodes).map_err(py_err)?;
    Ok((r.lambda, r.variation, r.certificate))
}

#[pyfunction]
fn fredholm_kernel(z: C64, s: C64, a: C64, c: C64) -> PyResult<C64> {
    quad::fredholm_kernel(z, s, a, c).map_err(py_err)
}

#[pyfunction]
#[pyo3(signature = (s, j, c, kmax=6))]
fn bender_dunne_polys(s: f64, j: usize, c: f64, kmax: usize) -> Vec<Vec<C64>> {
    qes::bender_dunne_polys(s, j, c, kmax).iter().map(coeffs).collect()
}

/// `[(Q_n, remainder norm)]` for `n = 1..=nmax`.
#[pyfunction]
fn factorization_check(s: f64, j: usize, c: f64, nmax: usize) -> Vec<(Vec<C64>, f64)> {
    qes::factorization_check(s, j, c, nmax).into_iter().map(|(q, r)| (coeffs(&q), r)).collect()
}

#[pyfunction]
fn qes_spectrum(s: f64, j: usize, c: f64) -> PyResult<Vec<C64>> {
    qes::qes_spectrum(s, j, c).map_err(py_err)
}

#[pyfunction]
fn periodic_turbiner_coeffs(py: Python<'_>, s: f64, j: usize, c: f64, e: C64) -> PyResult<Bound<'_, PyDict>> {
    let k = qes::periodic_turbiner_coeffs(&TurbinerParams::new(s, j, c, e));
    let d = PyDict::new_bound(py);
    for (name, v) in [("K4", k.k4), ("K3", k.k3), ("K2", k.k2), ("K1", k.k1), ("K0", k.k0), ("sigma", k.sigma)] {
        d.set_item(name, v)?;
    }
    Ok(d)
}

#[pyfunction]
fn wavefunction(s: f64, j: usize, c: f64, e: C64, x: C64) -> PyResult<C64> {
    qes::wavefunction(&TurbinerParams::new(s, j, c, e), x).map_err(py_err)
}

/// The acceptance suite as a list of dicts.
#[pyfunction]
#[pyo3(signature = (quick=true))]
fn verify_all(py: Python<'_>, quick: bool) -> PyResult<Vec<Bound<'_, PyDict>>> {
    let size = if quick { Size::Quick } else { Size::Full };
    let outcomes = py.allow_threads(|| verify::run_all(size, |_| {}));
    outcomes
        .into_iter()
        .map(|o| {
            let d = PyDict::new_bound(py);
            d.set_item("id", o.id)?;
            d.set_item("name", o.name)?;
            d.set_item("pass", o.pass)?;
            d.set_item("measured", o.measured)?;
            d.set_item("tolerance", o.tolerance)?;
            d.set_item("details", o.details)?;
            Ok(d)
        })
        .collect()
}

#[pymodule]
fn heunbc_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyHautot>()?;
    m.add_class::<PySpectrumProblem>()?;
    m.add_class::<PyWeight>()?;
    m.add_class::<PyOrthReport>()?;
    m.add_function(wrap_pyfunction!(roots, m)?)?;
    m.add_function(wrap_pyfunction!(reverse, m)?)?;
    m.add_function(wrap_pyfunction!(series_coeffs, m)?)?;
    m.add_function(wrap_pyfunction!(hautot, m)?)?;
    m.add_function(wrap_pyfunction!(pbhe_from_bhe, m)?)?;
    m.add_function(wrap_pyfunction!(check_termination, m)?)?;
    m.add_function(wrap_pyfunction!(weight_coeffs, m)?)?;
    m.add_function(wrap_pyfunction!(weight_closed_form, m)?)?;
    m.add_function(wrap_pyfunction!(convergence_diagnostic, m)?)?;
    m.add_function(wrap_pyfunction!(circle_orthogonality, m)?)?;
    m.add_function(wrap_pyfunction!(halfline_orthogonality, m)?)?;
    m.add_function(wrap_pyfunction!(single_orthogonality, m)?)?;
    m.add_function(wrap_pyfunction!(double_orthogonality, m)?)?;
    m.add_function(wrap_pyfunction!(fredholm_lambda, m)?)?;
    m.add_function(wrap_pyfunction!(fredholm_kernel, m)?)?;
    m.add_function(wrap_pyfunction!(bender_dunne_polys, m)?)?;
    m.add_function(wrap_pyfunction!(factorization_check, m)?)?;
    m.add_function(wrap_pyfunction!(qes_spectrum, m)?)?;
    m.add_function(wrap_pyfunction!(periodic_turbiner_coeffs, m)?)?;
    m.add_function(wrap_pyfunction!(wavefunction, m)?)?;
    m.add_function(wrap_pyfunction!(verify_all, m)?)?;
    Ok(())
}
