//! Python bindings for `ptmathieu`.
//!
//! Parameter objects, the Floquet and Hill engines and the boundary tracer,
//! with branches given as `"zero"`, `"quarter+"`, `"quarter-"` and complex
//! numbers as Python `complex`.

use num_complex::Complex64;
use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;

use ptmathieu::perturbative::{predict_stability_perturbative_with, QuarterSign};
use ptmathieu::tracer::{trace_boundary_with, CompareOptions};
use ptmathieu::{BranchId, EdgeTarget, MathieuError, PerturbativeClass, TraceOptions};

fn to_py(e: MathieuError) -> PyErr {
    match e {
        MathieuError::NonFinite { .. } | MathieuError::NoBracket { .. } | MathieuError::VerificationFailed { .. } => {
            PyRuntimeError::new_err(e.to_string())
        }
        _ => PyValueError::new_err(e.to_string()),
    }
}

fn branch_of(label: &str) -> PyResult<BranchId> {
    BranchId::from_label(label)
        .ok_or_else(|| PyValueError::new_err(format!("unknown branch {label:?}; use zero, quarter+ or quarter-")))
}

fn sign_of(sign: &str) -> PyResult<QuarterSign> {
    match sign {
        "+" | "plus" => Ok(QuarterSign::Plus),
        "-" | "minus" => Ok(QuarterSign::Minus),
        _ => Err(PyValueError::new_err(format!("sign must be '+' or '-', got {sign:?}"))),
    }
}

#[pyclass(name = "MathieuParams", frozen, from_py_object)]
#[derive(Clone, Copy)]
struct PyMathieuParams(ptmathieu::MathieuParams);

#[pymethods]
impl PyMathieuParams {
    #[new]
    fn new(a: f64, eps: f64, beta: f64) -> PyResult<Self> {
        ptmathieu::MathieuParams::new(a, eps, beta).map(Self).map_err(to_py)
    }

    /// Same as the constructor after taking `|eps|` and `|beta|`.
    #[staticmethod]
    fn normalized(a: f64, eps: f64, beta: f64) -> PyResult<Self> {
        ptmathieu::MathieuParams::normalized(a, eps, beta)
            .map(Self)
            .map_err(to_py)
    }

    #[getter]
    fn a(&self) -> f64 {
        self.0.a()
    }

    #[getter]
    fn eps(&self) -> f64 {
        self.0.eps()
    }

    #[getter]
    fn beta(&self) -> f64 {
        self.0.beta()
    }

    fn with_a(&self, a: f64) -> PyResult<Self> {
        self.0.with_a(a).map(Self).map_err(to_py)
    }

    fn __repr__(&self) -> String {
        format!(
            "MathieuParams(a={}, eps={}, beta={})",
            self.0.a(),
            self.0.eps(),
            self.0.beta()
        )
    }
}

#[pyclass(name = "FloquetResult", frozen, get_all)]
struct PyFloquetResult {
    discriminant: Complex64,
    mu1: Complex64,
    mu2: Complex64,
    growth_rate: f64,
    /// `"stable"`, `"unstable"` or `"boundary"`
    classification: &'static str,
}

#[pymethods]
impl PyFloquetResult {
    fn __repr__(&self) -> String {
        format!(
            "FloquetResult(discriminant={}, growth_rate={:e}, classification='{}')",
            self.discriminant, self.growth_rate, self.classification
        )
    }
}

#[pyclass(name = "BandEdges", frozen, get_all)]
struct PyBandEdges {
    values: Vec<f64>,
    truncation_warning: bool,
}

#[pymethods]
impl PyBandEdges {
    fn __repr__(&self) -> String {
        format!(
            "BandEdges(values={:?}, truncation_warning={})",
            self.values, self.truncation_warning
        )
    }
}

#[pyclass(name = "BoundaryCurve", frozen, from_py_object)]
#[derive(Clone)]
struct PyBoundaryCurve(ptmathieu::BoundaryCurve);

#[pymethods]
impl PyBoundaryCurve {
    #[getter]
    fn branch(&self) -> &'static str {
        self.0.branch.label()
    }

    #[getter]
    fn beta(&self) -> f64 {
        self.0.beta
    }

    /// `[(eps, a), ...]` with increasing `eps`.
    #[getter]
    fn samples(&self) -> Vec<(f64, f64)> {
        self.0.samples.clone()
    }

    /// Discriminant value traced: `2.0` or `-2.0`.
    #[getter]
    fn target(&self) -> f64 {
        self.0.target.value()
    }

    #[getter]
    fn merged(&self) -> bool {
        self.0.merged
    }

    #[getter]
    fn closed_at(&self) -> Option<f64> {
        self.0.closed_at
    }

    fn is_complete(&self) -> bool {
        self.0.is_complete()
    }

    fn __len__(&self) -> usize {
        self.0.samples.len()
    }

    fn __repr__(&self) -> String {
        format!(
            "BoundaryCurve(branch='{}', beta={}, samples={}, merged={}, closed_at={:?})",
            self.0.branch.label(),
            self.0.beta,
            self.0.samples.len(),
            self.0.merged,
            self.0.closed_at
        )
    }
}

#[pyclass(name = "CurvatureReport", frozen, get_all)]
struct PyCurvatureReport {
    branch: &'static str,
    beta: f64,
    kappa_numeric: f64,
    kappa_paper: f64,
    relative_error: f64,
    slope_numeric: f64,
    slope_paper: f64,
}

#[pymethods]
impl PyCurvatureReport {
    fn __repr__(&self) -> String {
        format!(
            "CurvatureReport(branch='{}', beta={}, kappa_numeric={}, kappa_paper={}, relative_error={:e})",
            self.branch, self.beta, self.kappa_numeric, self.kappa_paper, self.relative_error
        )
    }
}

#[pyclass(name = "ComparisonRow", frozen, get_all)]
struct PyComparisonRow {
    branch: &'static str,
    beta: f64,
    eps: f64,
    a_perturbative: f64,
    a_floquet: Option<f64>,
    a_hill: Option<f64>,
    abs_error_pert: Option<f64>,
    cross_engine_error: Option<f64>,
    /// `None`, `"merged"`, `"no_bracket"` or `"overflow"`
    flag: Option<&'static str>,
}

#[pymethods]
impl PyComparisonRow {
    fn __repr__(&self) -> String {
        format!(
            "ComparisonRow(branch='{}', beta={}, eps={}, a_floquet={:?}, cross_engine_error={:?})",
            self.branch, self.beta, self.eps, self.a_floquet, self.cross_engine_error
        )
    }
}

/// `cos x + iβ sin x`
#[pyfunction]
fn potential_value(x: f64, beta: f64) -> Complex64 {
    ptmathieu::potential_value(x, beta)
}

/// Hill-matrix couplings `(-ε(1+β), -ε(1-β))` to the lower and upper neighbour.
#[pyfunction]
fn coupling_coefficients(eps: f64, beta: f64) -> (f64, f64) {
    ptmathieu::coupling_coefficients(eps, beta)
}

#[pyfunction]
fn boundary_a0(eps: f64, beta: f64) -> PyResult<f64> {
    ptmathieu::boundary_a0(eps, beta).map_err(to_py)
}

#[pyfunction]
fn boundary_quarter(eps: f64, beta: f64, sign: &str) -> PyResult<f64> {
    ptmathieu::boundary_quarter(eps, beta, sign_of(sign)?).map_err(to_py)
}

#[pyfunction]
fn curvature_kappa1(beta: f64) -> PyResult<f64> {
    ptmathieu::curvature_kappa1(beta).map_err(to_py)
}

#[pyfunction]
fn curvature_kappa2(beta: f64) -> PyResult<f64> {
    ptmathieu::curvature_kappa2(beta).map_err(to_py)
}

/// `"stable"`, `"unstable"` or `"near_boundary"` from the closed forms.
#[pyfunction]
#[pyo3(signature = (params, tol=None))]
fn predict_stability(params: PyMathieuParams, tol: Option<f64>) -> PyResult<&'static str> {
    let p = params.0;
    let tol = tol.unwrap_or_else(|| ptmathieu::perturbative::default_boundary_tolerance(p.eps()));
    Ok(match predict_stability_perturbative_with(&p, tol).map_err(to_py)? {
        PerturbativeClass::Stable => "stable",
        PerturbativeClass::Unstable => "unstable",
        PerturbativeClass::NearBoundary => "near_boundary",
    })
}

/// Monodromy matrix as `((m11, m12), (m21, m22))`.
#[pyfunction]
#[pyo3(signature = (params, steps=ptmathieu::floquet::DEFAULT_STEPS))]
fn monodromy(
    py: Python<'_>,
    params: PyMathieuParams,
    steps: usize,
) -> PyResult<((Complex64, Complex64), (Complex64, Complex64))> {
    let m = py.detach(|| ptmathieu::monodromy(&params.0, steps)).map_err(to_py)?;
    Ok(((m.m11, m.m12), (m.m21, m.m22)))
}

#[pyfunction]
#[pyo3(signature = (params, steps=ptmathieu::floquet::DEFAULT_STEPS))]
fn discriminant(py: Python<'_>, params: PyMathieuParams, steps: usize) -> PyResult<Complex64> {
    let m = py.detach(|| ptmathieu::monodromy(&params.0, steps)).map_err(to_py)?;
    Ok(ptmathieu::discriminant(&m))
}

/// Roots of `μ² - Δμ + 1`, larger modulus first.
#[pyfunction]
fn multipliers(delta: Complex64) -> (Complex64, Complex64) {
    ptmathieu::multipliers(delta)
}

#[pyfunction]
#[pyo3(signature = (params, steps=ptmathieu::floquet::DEFAULT_STEPS, tol=ptmathieu::floquet::DEFAULT_GROWTH_TOL))]
fn classify(py: Python<'_>, params: PyMathieuParams, steps: usize, tol: f64) -> PyResult<PyFloquetResult> {
    let r = py
        .detach(|| ptmathieu::classify(&params.0, steps, tol))
        .map_err(to_py)?;
    Ok(PyFloquetResult {
        discriminant: r.discriminant,
        mu1: r.mu1,
        mu2: r.mu2,
        growth_rate: r.growth_rate,
        classification: r.classification.label(),
    })
}

#[pyfunction]
#[pyo3(signature = (nu, eps, beta, trunc=ptmathieu::hill::DEFAULT_TRUNCATION, count=3))]
fn band_edges(nu: f64, eps: f64, beta: f64, trunc: usize, count: usize) -> PyResult<PyBandEdges> {
    let e = ptmathieu::band_edges(nu, eps, beta, trunc, count).map_err(to_py)?;
    Ok(PyBandEdges {
        values: e.values,
        truncation_warning: e.truncation_warning,
    })
}

#[pyfunction]
#[pyo3(signature = (eps, beta, trunc=ptmathieu::hill::DEFAULT_TRUNCATION))]
fn hermitian_equivalence_check(eps: f64, beta: f64, trunc: usize) -> PyResult<f64> {
    ptmathieu::hermitian_equivalence_check(eps, beta, trunc).map_err(to_py)
}

/// Root of `Re Δ(a) = target` (`2.0` or `-2.0`) in `[seed_a - window, seed_a + window]`.
#[pyfunction]
#[pyo3(signature = (eps, beta, seed_a, target, window, steps=ptmathieu::floquet::DEFAULT_STEPS))]
fn solve_edge(
    py: Python<'_>,
    eps: f64,
    beta: f64,
    seed_a: f64,
    target: f64,
    window: f64,
    steps: usize,
) -> PyResult<f64> {
    let target = EdgeTarget::from_value(target).map_err(to_py)?;
    let opts = TraceOptions {
        steps,
        ..TraceOptions::default()
    };
    py.detach(|| ptmathieu::tracer::solve_edge_with(eps, beta, seed_a, target, window, &opts))
        .map_err(to_py)
}

#[pyfunction]
#[pyo3(signature = (branch, beta, eps_max, samples=41, steps=ptmathieu::floquet::DEFAULT_STEPS))]
fn trace_boundary(
    py: Python<'_>,
    branch: &str,
    beta: f64,
    eps_max: f64,
    samples: usize,
    steps: usize,
) -> PyResult<PyBoundaryCurve> {
    let branch = branch_of(branch)?;
    let opts = TraceOptions {
        steps,
        ..TraceOptions::default()
    };
    py.detach(|| trace_boundary_with(branch, beta, eps_max, samples, &opts))
        .map(PyBoundaryCurve)
        .map_err(to_py)
}

#[pyfunction]
fn estimate_curvature(curve: PyBoundaryCurve) -> PyResult<PyCurvatureReport> {
    let r = ptmathieu::estimate_curvature(&curve.0).map_err(to_py)?;
    Ok(PyCurvatureReport {
        branch: r.branch.label(),
        beta: r.beta,
        kappa_numeric: r.kappa_numeric,
        kappa_paper: r.kappa_paper,
        relative_error: r.relative_error,
        slope_numeric: r.slope_numeric,
        slope_paper: r.slope_paper,
    })
}

#[pyfunction]
#[pyo3(signature = (betas=vec![0.0, 0.5, 0.9], eps_grid=vec![0.02, 0.05, 0.1]))]
fn compare_report(py: Python<'_>, betas: Vec<f64>, eps_grid: Vec<f64>) -> PyResult<Vec<PyComparisonRow>> {
    let rows = py
        .detach(|| ptmathieu::compare_report(&betas, &eps_grid))
        .map_err(to_py)?;
    Ok(rows
        .into_iter()
        .map(|r| PyComparisonRow {
            branch: r.branch.label(),
            beta: r.beta,
            eps: r.eps,
            a_perturbative: r.a_perturbative,
            a_floquet: r.a_floquet,
            a_hill: r.a_hill,
            abs_error_pert: r.abs_error_pert,
            cross_engine_error: r.cross_engine_error,
            flag: r.flag.map(|f| f.label()),
        })
        .collect())
}

/// Single comparison row with explicit step count and truncation.
#[pyfunction]
#[pyo3(signature = (branch, beta, eps, steps=2 * ptmathieu::floquet::DEFAULT_STEPS, trunc=ptmathieu::hill::DEFAULT_TRUNCATION))]
fn compare_row(
    py: Python<'_>,
    branch: &str,
    beta: f64,
    eps: f64,
    steps: usize,
    trunc: usize,
) -> PyResult<PyComparisonRow> {
    let branch = branch_of(branch)?;
    let opts = CompareOptions {
        trace: TraceOptions {
            steps,
            ..TraceOptions::default()
        },
        truncation: trunc,
    };
    let r = py
        .detach(|| ptmathieu::tracer::compare_row(branch, beta, eps, &opts))
        .map_err(to_py)?;
    Ok(PyComparisonRow {
        branch: r.branch.label(),
        beta: r.beta,
        eps: r.eps,
        a_perturbative: r.a_perturbative,
        a_floquet: r.a_floquet,
        a_hill: r.a_hill,
        abs_error_pert: r.abs_error_pert,
        cross_engine_error: r.cross_engine_error,
        flag: r.flag.map(|f| f.label()),
    })
}

#[pymodule]
fn pymathieu(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("__version__", env!("CARGO_PKG_VERSION"))?;
    m.add("BRANCHES", ["zero", "quarter+", "quarter-"])?;
    m.add_class::<PyMathieuParams>()?;
    m.add_class::<PyFloquetResult>()?;
    m.add_class::<PyBandEdges>()?;
    m.add_class::<PyBoundaryCurve>()?;
    m.add_class::<PyCurvatureReport>()?;
    m.add_class::<PyComparisonRow>()?;
    m.add_function(wrap_pyfunction!(potential_value, m)?)?;
    m.add_function(wrap_pyfunction!(coupling_coefficients, m)?)?;
    m.add_function(wrap_pyfunction!(boundary_a0, m)?)?;
    m.add_function(wrap_pyfunction!(boundary_quarter, m)?)?;
    m.add_function(wrap_pyfunction!(curvature_kappa1, m)?)?;
    m.add_function(wrap_pyfunction!(curvature_kappa2, m)?)?;
    m.add_function(wrap_pyfunction!(predict_stability, m)?)?;
    m.add_function(wrap_pyfunction!(monodromy, m)?)?;
    m.add_function(wrap_pyfunction!(discriminant, m)?)?;
    m.add_function(wrap_pyfunction!(multipliers, m)?)?;
    m.add_function(wrap_pyfunction!(classify, m)?)?;
    m.add_function(wrap_pyfunction!(band_edges, m)?)?;
    m.add_function(wrap_pyfunction!(hermitian_equivalence_check, m)?)?;
    m.add_function(wrap_pyfunction!(solve_edge, m)?)?;
    m.add_function(wrap_pyfunction!(trace_boundary, m)?)?;
    m.add_function(wrap_pyfunction!(estimate_curvature, m)?)?;
    m.add_function(wrap_pyfunction!(compare_report, m)?)?;
    m.add_function(wrap_pyfunction!(compare_row, m)?)?;
    Ok(())
}
