//! Python bindings: operator construction, coefficient tables, the conformal
//! maps and the verification suites. Core errors surface as `ValueError`.

use std::collections::BTreeMap;

use nalgebra::DMatrix;
use num_complex::Complex64;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

use juhl_core::cli::{coeff_table, operator_from_json, operator_to_json, render_coeffs, CoeffFormat};
use juhl_core::conformal::{self, ConformalMap};
use juhl_core::diffop;
use juhl_core::verify::{run_suite, Suite, SuiteOptions};

fn err(e: juhl_core::Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

/// Polynomial-coefficient differential operator `Σ p_α(λ, ξ) ∂^α`.
#[pyclass(name = "DiffOp", module = "juhl", eq, skip_from_py_object)]
#[derive(Clone, PartialEq)]
struct DiffOp {
    inner: diffop::DiffOp,
}

#[pymethods]
impl DiffOp {
    #[getter]
    fn dim(&self) -> usize {
        self.inner.dim()
    }

    /// Highest derivative order.
    #[getter]
    fn order(&self) -> u32 {
        self.inner.order()
    }

    fn __len__(&self) -> usize {
        self.inner.len()
    }

    fn __str__(&self) -> String {
        self.inner.to_string()
    }

    fn __repr__(&self) -> String {
        format!("DiffOp(n={}, terms={})", self.inner.dim(), self.inner.len())
    }

    /// `(multi_index, coefficient display)` pairs.
    fn terms(&self) -> Vec<(Vec<u32>, String)> {
        self.inner.terms().map(|(a, p)| (a.clone(), p.to_string())).collect()
    }

    /// `self ∘ other` (other applied first).
    fn compose(&self, other: PyRef<'_, DiffOp>) -> PyResult<DiffOp> {
        Ok(DiffOp { inner: self.inner.compose(&other.inner).map_err(err)? })
    }

    /// Set `ξ_n = 0` in the coefficients.
    fn restrict(&self) -> DiffOp {
        DiffOp { inner: self.inner.restrict() }
    }

    /// Apply at a point to the second-order jet of a Gaussian `exp(−|ξ−c|²/w²)`.
    fn apply_to_gaussian(&self, lam: f64, point: Vec<f64>, center: Vec<f64>, width: f64) -> PyResult<f64> {
        let f = conformal::TestFunction::gaussian(center, width).map_err(err)?;
        let jet = f.eval_jet(&conformal::Jet::coordinates(&point, self.inner.order())).map_err(err)?;
        self.inner.apply_jet(lam, &point, &jet).map_err(err)
    }

    /// Exact JSON: `[exponents, numerator, denominator]` triples per coefficient.
    fn to_json(&self) -> String {
        serde_json::to_string(&operator_to_json(&self.inner, self.inner.order())).expect("serializable")
    }

    #[staticmethod]
    fn from_json(text: &str) -> PyResult<DiffOp> {
        let v: serde_json::Value = serde_json::from_str(text).map_err(|e| PyValueError::new_err(e.to_string()))?;
        Ok(DiffOp { inner: operator_from_json(&v).map_err(err)? })
    }
}

/// Finite word in translations, rotations, dilations and the chart inversion.
#[pyclass(name = "ConformalMap", module = "juhl", skip_from_py_object)]
#[derive(Clone)]
struct PyConformalMap {
    inner: ConformalMap,
}

#[pymethods]
impl PyConformalMap {
    #[staticmethod]
    fn identity(n: usize) -> Self {
        PyConformalMap { inner: ConformalMap::identity(n) }
    }

    #[staticmethod]
    fn translation(v: Vec<f64>) -> PyResult<Self> {
        Ok(PyConformalMap { inner: ConformalMap::translation(v).map_err(err)? })
    }

    /// Orthogonal matrix given as a list of rows.
    #[staticmethod]
    fn rotation(rows: Vec<Vec<f64>>) -> PyResult<Self> {
        let n = rows.len();
        if rows.iter().any(|r| r.len() != n) {
            return Err(PyValueError::new_err("rotation matrix must be square"));
        }
        let m = DMatrix::from_fn(n, n, |i, j| rows[i][j]);
        Ok(PyConformalMap { inner: ConformalMap::rotation(m).map_err(err)? })
    }

    #[staticmethod]
    fn dilation(n: usize, r: f64) -> PyResult<Self> {
        Ok(PyConformalMap { inner: ConformalMap::dilation(n, r).map_err(err)? })
    }

    #[staticmethod]
    fn inversion(n: usize) -> Self {
        PyConformalMap { inner: ConformalMap::inversion(n) }
    }

    #[getter]
    fn dim(&self) -> usize {
        self.inner.dim()
    }

    /// `other ∘ self`: apply `self` first.
    fn then(&self, other: PyRef<'_, PyConformalMap>) -> PyResult<Self> {
        Ok(PyConformalMap { inner: self.inner.then(&other.inner).map_err(err)? })
    }

    fn inverse(&self) -> Self {
        PyConformalMap { inner: self.inner.inverse() }
    }

    fn act(&self, xi: Vec<f64>) -> PyResult<Vec<f64>> {
        self.inner.act(&xi).map_err(err)
    }

    /// Conformal factor `κ(g, ξ)`.
    fn kappa(&self, xi: Vec<f64>) -> PyResult<f64> {
        self.inner.kappa(&xi).map_err(err)
    }

    fn preserves_hyperplane(&self) -> bool {
        self.inner.preserves_hyperplane()
    }

    fn __repr__(&self) -> String {
        format!("ConformalMap(n={}, word={:?})", self.inner.dim(), self.inner.word())
    }
}

/// `E_λ = (2λ − n + 2)∂_n + ξ_n Δ`.
#[pyfunction]
fn build_e(n: usize) -> DiffOp {
    DiffOp { inner: juhl_core::juhl::build_e(n) }
}

/// `E_{λ,N} = E_{λ+N−1} ∘ ⋯ ∘ E_λ`.
#[pyfunction]
#[pyo3(name = "build_en", signature = (n, order))]
fn build_en(n: usize, order: u32) -> DiffOp {
    DiffOp { inner: juhl_core::juhl::build_en(n, order) }
}

/// Display strings of `a_0, …, a_{⌊N/2⌋}`.
#[pyfunction]
fn juhl_coeffs(n: usize, order: u32) -> PyResult<Vec<String>> {
    let t = juhl_core::juhl::juhl_coeffs(n, order).map_err(err)?;
    Ok(t.coeffs().iter().map(|c| c.to_string()).collect())
}

/// Coefficient table rendered as `json`, `csv` or `latex`.
#[pyfunction]
#[pyo3(signature = (n, order, format = "json"))]
fn coeff_table_text(n: usize, order: u32, format: &str) -> PyResult<String> {
    let fmt = match format {
        "json" => CoeffFormat::Json,
        "csv" => CoeffFormat::Csv,
        "latex" => CoeffFormat::Latex,
        other => return Err(PyValueError::new_err(format!("unknown format `{other}`"))),
    };
    Ok(render_coeffs(&coeff_table(n, order).map_err(err)?, fmt))
}

/// `∏_{m=N+1}^{2N} (2λ − n + m)` expanded.
#[pyfunction]
fn a0_closed_form(n: usize, order: u32) -> String {
    juhl_core::juhl::a0_closed_form(n, order).to_string()
}

#[pyfunction]
fn normalization_meta(n: usize, order: u32) -> PyResult<String> {
    Ok(juhl_core::juhl::normalization_meta(n, order).map_err(err)?.to_json().to_string())
}

/// Exact symbol identity relating `M∘J_λ` and `J_{λ+1}∘E_λ`.
#[pyfunction]
fn check_mi(n: usize) -> PyResult<bool> {
    juhl_core::symbolcalc::check_mi(n).map_err(err)
}

#[pyfunction]
fn check_inverse_j(n: usize, lambdas: Vec<Complex64>) -> PyResult<bool> {
    juhl_core::symbolcalc::check_inverse_j(n, &lambdas).map_err(err)
}

/// Stereographic chart `ℝⁿ → Sⁿ`.
#[pyfunction]
fn chart_c(xi: Vec<f64>) -> Vec<f64> {
    conformal::chart_c(&xi)
}

#[pyfunction]
fn kappa_c(xi: Vec<f64>) -> f64 {
    conformal::kappa_c(&xi)
}

/// Runs a verification suite and returns the JSON report.
#[pyfunction]
#[pyo3(signature = (suite = "all", seed = 0, n_min = None, n_max = None, tol = None))]
fn run_verify(
    suite: &str,
    seed: u64,
    n_min: Option<usize>,
    n_max: Option<usize>,
    tol: Option<BTreeMap<String, f64>>,
) -> PyResult<String> {
    let suite: Suite = suite.parse().map_err(err)?;
    let opts = SuiteOptions { n_min, n_max, seed, tol: tol.unwrap_or_default() };
    let report = run_suite(suite, &opts).map_err(err)?;
    Ok(serde_json::to_string(&report).expect("serializable"))
}

#[pymodule]
fn juhl(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<DiffOp>()?;
    m.add_class::<PyConformalMap>()?;
    m.add_function(wrap_pyfunction!(build_e, m)?)?;
    m.add_function(wrap_pyfunction!(build_en, m)?)?;
    m.add_function(wrap_pyfunction!(juhl_coeffs, m)?)?;
    m.add_function(wrap_pyfunction!(coeff_table_text, m)?)?;
    m.add_function(wrap_pyfunction!(a0_closed_form, m)?)?;
    m.add_function(wrap_pyfunction!(normalization_meta, m)?)?;
    m.add_function(wrap_pyfunction!(check_mi, m)?)?;
    m.add_function(wrap_pyfunction!(check_inverse_j, m)?)?;
    m.add_function(wrap_pyfunction!(chart_c, m)?)?;
    m.add_function(wrap_pyfunction!(kappa_c, m)?)?;
    m.add_function(wrap_pyfunction!(run_verify, m)?)?;
    Ok(())
}
