//! Python module `uinf`. Reports come back as plain dicts and lists, parsed
//! from the same JSON the command-line tool writes.

use num_complex::Complex64;
use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyDict;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use uinf_core::monopole::{
    asymptotics, bps_profiles, energy, energy_correction, perturbation_solve, variational_check, MonopoleProfile,
    PrefactorParams, RadialGrid, SecondLineCoefficients,
};
use uinf_core::random::{random_config, random_field, random_scalar};
use uinf_core::reduction::{
    alpha_ordering, b_scaling_scan, born_infeld_reduction_check, masslessness_check, scalar_line_values,
    two_dim_exact_check, ym_line_values, Background, BlockMetric,
};
use uinf_core::sphere;
use uinf_core::tensor::{self, FlatMetric, FlatTensor2, FlatVector};
use uinf_core::Error;

fn err(e: Error) -> PyErr {
    match e {
        Error::Solver(_) | Error::Convergence(_) => PyRuntimeError::new_err(e.to_string()),
        _ => PyValueError::new_err(e.to_string()),
    }
}

fn to_py<T: Serialize>(py: Python<'_>, value: &T) -> PyResult<Py<PyAny>> {
    let text = serde_json::to_string(value).map_err(|e| PyRuntimeError::new_err(e.to_string()))?;
    Ok(py.import("json")?.call_method1("loads", (text,))?.unbind())
}

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Band-limited complex field on the unit sphere.
#[pyclass(name = "HarmonicField", module = "uinf")]
#[derive(Clone)]
pub struct PyHarmonicField {
    inner: sphere::HarmonicField,
}

impl From<sphere::HarmonicField> for PyHarmonicField {
    fn from(inner: sphere::HarmonicField) -> Self {
        Self { inner }
    }
}

#[pymethods]
impl PyHarmonicField {
    #[new]
    fn new(l_max: usize) -> Self {
        sphere::HarmonicField::zeros(l_max).into()
    }

    #[staticmethod]
    fn mode(l: usize, m: i64, c: Complex64) -> PyResult<Self> {
        Ok(sphere::HarmonicField::mode(l, m, c).map_err(err)?.into())
    }

    /// Real field with coefficients uniform in `[-scale, scale]`.
    #[staticmethod]
    #[pyo3(signature = (l_max, scale = 1.0, seed = 0))]
    fn random(l_max: usize, scale: f64, seed: u64) -> Self {
        random_field(&mut rng(seed), l_max, scale).into()
    }

    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        Ok(sphere::HarmonicField::from_json(text).map_err(err)?.into())
    }

    fn to_json(&self) -> String {
        self.inner.to_json()
    }

    #[getter]
    fn l_max(&self) -> usize {
        self.inner.l_max()
    }

    fn coeff(&self, l: usize, m: i64) -> Complex64 {
        self.inner.coeff(l, m)
    }

    fn set(&mut self, l: usize, m: i64, c: Complex64) -> PyResult<()> {
        self.inner.set(l, m, c).map_err(err)
    }

    /// Nonzero coefficients as `(l, m, c)`.
    fn coefficients(&self) -> Vec<(usize, i64, Complex64)> {
        self.inner.nonzero().collect()
    }

    fn bracket(&self, other: &Self) -> Self {
        sphere::bracket(&self.inner, &other.inner).into()
    }

    fn product(&self, other: &Self) -> Self {
        sphere::product(&self.inner, &other.inner).into()
    }

    fn integrate(&self) -> Complex64 {
        self.inner.integrate()
    }

    fn integral_of_product(&self, other: &Self) -> Complex64 {
        self.inner.integral_of_product(&other.inner)
    }

    fn reality_residual(&self) -> f64 {
        self.inner.reality_residual()
    }

    fn max_abs(&self) -> f64 {
        self.inner.max_abs()
    }

    fn __add__(&self, other: &Self) -> Self {
        (&self.inner + &other.inner).into()
    }

    fn __sub__(&self, other: &Self) -> Self {
        (&self.inner - &other.inner).into()
    }

    fn __mul__(&self, s: Complex64) -> Self {
        self.inner.scale(s).into()
    }

    fn __repr__(&self) -> String {
        format!("HarmonicField(l_max={}, nonzero={})", self.inner.l_max(), self.inner.nonzero().count())
    }
}

#[pyfunction]
fn bracket(f: &PyHarmonicField, g: &PyHarmonicField) -> PyHarmonicField {
    f.bracket(g)
}

/// Closure data of the `l = 1` generators plus the generators themselves.
#[pyfunction]
fn su2_generators(py: Python<'_>) -> PyResult<Py<PyAny>> {
    let s = sphere::su2_generators();
    let d = PyDict::new(py);
    d.set_item("basis", to_py(py, &s.basis)?)?;
    d.set_item("closure_constant", s.closure_constant())?;
    d.set_item("closure", to_py(py, &s.closure)?)?;
    d.set_item("printed_closure", to_py(py, &s.printed_closure)?)?;
    let t: Vec<PyHarmonicField> = s.t.iter().cloned().map(PyHarmonicField::from).collect();
    d.set_item("generators", t)?;
    Ok(d.into_any().unbind())
}

#[pyfunction]
fn structure_constants_csv(l_max: usize) -> PyResult<String> {
    Ok(sphere::StructureConstants::compute(l_max).map_err(err)?.to_csv())
}

/// One identity suite: `delta3_expansion` and `delta4_trace_form` take `n`,
/// the ε suites fix it.
#[pyfunction]
#[pyo3(signature = (identity, n = 4, trials = 1000, seed = 0))]
fn identity_suite(py: Python<'_>, identity: &str, n: usize, trials: usize, seed: u64) -> PyResult<Py<PyAny>> {
    let mut r = rng(seed);
    let report = match identity {
        tensor::ID_DELTA3 => tensor::suite_delta3(&mut r, n, trials),
        tensor::ID_DELTA4 => tensor::suite_delta4(&mut r, n, trials),
        tensor::ID_EPS3 => tensor::suite_eps3(&mut r, trials),
        tensor::ID_EPS4 => tensor::suite_eps4(&mut r, trials),
        other => return Err(PyValueError::new_err(format!("unknown identity {other}"))),
    }
    .map_err(err)?;
    to_py(py, &report)
}

fn tensor2(f: Vec<Vec<f64>>) -> PyResult<FlatTensor2> {
    let n = f.len();
    if f.iter().any(|row| row.len() != n) {
        return Err(PyValueError::new_err("field strength must be square"));
    }
    FlatTensor2::new(n, f.into_iter().flatten().collect()).map_err(err)
}

/// Cubic generalized-delta contraction with the given diagonal metric.
#[pyfunction]
fn gen_delta_contract_3(f: Vec<Vec<f64>>, v: Vec<f64>, g: Vec<f64>) -> PyResult<f64> {
    let (f, v, g) = (tensor2(f)?, FlatVector::new(v).map_err(err)?, FlatMetric::new(g).map_err(err)?);
    tensor::gen_delta_contract_3(&f, &v, &g).map_err(err)
}

#[pyfunction]
fn expanded_scalar_form(f: Vec<Vec<f64>>, v: Vec<f64>, g: Vec<f64>) -> PyResult<f64> {
    let (f, v, g) = (tensor2(f)?, FlatVector::new(v).map_err(err)?, FlatMetric::new(g).map_err(err)?);
    tensor::expanded_scalar_form(&f, &v, &g).map_err(err)
}

#[pyfunction]
fn gen_delta_contract_4(f: Vec<Vec<f64>>, g: Vec<f64>) -> PyResult<f64> {
    tensor::gen_delta_contract_4(&tensor2(f)?, &FlatMetric::new(g).map_err(err)?).map_err(err)
}

#[pyfunction]
fn trace_form_quartic(f: Vec<Vec<f64>>, g: Vec<f64>) -> PyResult<f64> {
    tensor::trace_form_quartic(&tensor2(f)?, &FlatMetric::new(g).map_err(err)?).map_err(err)
}

/// Line groups of one random configuration on Minkowski spacetime times a
/// sphere of radius `b`, with `q = e b²`.
#[pyfunction]
#[pyo3(signature = (model = "ym", dim = 3, lmax = 2, b = 0.1, e = 2.0, scale = 0.5, seed = 0))]
fn reduce(py: Python<'_>, model: &str, dim: usize, lmax: usize, b: f64, e: f64, scale: f64, seed: u64) -> PyResult<Py<PyAny>> {
    let metric = BlockMetric::minkowski(dim, b).map_err(err)?;
    let bg = Background::for_coupling(e, b).map_err(err)?;
    let mut r = rng(seed);
    let cfg = random_config(&mut r, dim, lmax, e, scale);
    let report = match model {
        "ym" => ym_line_values(&cfg, &bg, &metric),
        "scalar" => scalar_line_values(&cfg, &random_scalar(&mut r, dim, lmax, scale), &bg, &metric),
        other => return Err(PyValueError::new_err(format!("model must be 'ym' or 'scalar', got {other}"))),
    }
    .map_err(err)?;
    to_py(py, &report)
}

/// Scalar-sector value with no spacetime derivatives for a given field.
#[pyfunction]
#[pyo3(signature = (phi, dim = 3, b = 0.1, e = 2.0))]
fn masslessness(py: Python<'_>, phi: &PyHarmonicField, dim: usize, b: f64, e: f64) -> PyResult<Py<PyAny>> {
    let metric = BlockMetric::minkowski(dim, b).map_err(err)?;
    let bg = Background::for_coupling(e, b).map_err(err)?;
    to_py(py, &masslessness_check(&phi.inner, &bg, &metric).map_err(err)?)
}

#[pyfunction]
#[pyo3(signature = (b_list, model = "ym", dim = 3, lmax = 2, e = 2.0, scale = 0.5, seed = 0))]
fn scan_b(
    py: Python<'_>,
    b_list: Vec<f64>,
    model: &str,
    dim: usize,
    lmax: usize,
    e: f64,
    scale: f64,
    seed: u64,
) -> PyResult<Py<PyAny>> {
    let mut r = rng(seed);
    let cfg = random_config(&mut r, dim, lmax, e, scale);
    let s = random_scalar(&mut r, dim, lmax, scale);
    let g = BlockMetric::minkowski(dim, 1.0).map_err(err)?.g_spacetime().to_vec();
    let scalar = match model {
        "ym" => None,
        "scalar" => Some(&s),
        other => return Err(PyValueError::new_err(format!("model must be 'ym' or 'scalar', got {other}"))),
    };
    to_py(py, &b_scaling_scan(&cfg, scalar, e, &g, &b_list).map_err(err)?)
}

#[pyfunction]
#[pyo3(signature = (q = 1.0, b_list = vec![0.5, 0.1], lmax = 2, scale = 0.5, seed = 0))]
fn two_dim_check(py: Python<'_>, q: f64, b_list: Vec<f64>, lmax: usize, scale: f64, seed: u64) -> PyResult<Py<PyAny>> {
    let cfg = random_config(&mut rng(seed), 2, lmax, q, scale);
    let bg = Background::new(q).map_err(err)?;
    to_py(py, &two_dim_exact_check(&cfg, &bg, &b_list).map_err(err)?)
}

/// Full against reduced Born-Infeld integrals along `b_list`, and the
/// small-`α` ordering experiment at `ordering_b`.
#[pyfunction]
#[pyo3(signature = (
    b_list = vec![0.4, 0.2, 0.1, 0.05], alpha = 0.5, alpha_list = vec![0.03, 0.01, 0.003, 0.001],
    ordering_b = 0.3, e = 1.0, c = 1.0, dim = 3, lmax = 2, scale = 0.2, seed = 0
))]
fn born_infeld(
    py: Python<'_>,
    b_list: Vec<f64>,
    alpha: f64,
    alpha_list: Vec<f64>,
    ordering_b: f64,
    e: f64,
    c: f64,
    dim: usize,
    lmax: usize,
    scale: f64,
    seed: u64,
) -> PyResult<Py<PyAny>> {
    let cfg = random_config(&mut rng(seed), dim, lmax, e, scale);
    let g = BlockMetric::minkowski(dim, 1.0).map_err(err)?.g_spacetime().to_vec();
    let limit = born_infeld_reduction_check(&cfg, e, &g, alpha, c, &b_list).map_err(err)?;
    let ordering = alpha_ordering(&cfg, e, &g, ordering_b, c, 1.0, &alpha_list).map_err(err)?;
    let d = PyDict::new(py);
    d.set_item("limit", to_py(py, &limit)?)?;
    d.set_item("ordering", to_py(py, &ordering)?)?;
    Ok(d.into_any().unbind())
}

fn base(xi_max: f64, n: usize) -> PyResult<MonopoleProfile> {
    Ok(bps_profiles(&RadialGrid::new(xi_max, n).map_err(err)?))
}

/// BPS profiles `K₀, H₀` on the graded radial grid.
#[pyfunction]
#[pyo3(signature = (xi_max = 25.0, n = 4000))]
fn bps_profile(py: Python<'_>, xi_max: f64, n: usize) -> PyResult<Py<PyAny>> {
    let p = base(xi_max, n)?;
    let d = PyDict::new(py);
    d.set_item("xi", p.grid.xi().to_vec())?;
    d.set_item("K", p.k.clone())?;
    d.set_item("H", p.h.clone())?;
    d.set_item("bogomolnyi_residuals", uinf_core::monopole::bogomolnyi_residuals(&p))?;
    Ok(d.into_any().unbind())
}

#[pyfunction]
#[pyo3(signature = (evb = 0.0, xi_max = 25.0, n = 4000, v = 1.0, beta = 1.0, e = 1.0, b = 1.0))]
fn monopole_energy(py: Python<'_>, evb: f64, xi_max: f64, n: usize, v: f64, beta: f64, e: f64, b: f64) -> PyResult<Py<PyAny>> {
    let params = PrefactorParams { v, beta, e, b };
    to_py(py, &energy(&base(xi_max, n)?, evb, &params, &SecondLineCoefficients::default()).map_err(err)?)
}

/// First-order profiles `K₁, H₁` and their fitted asymptotics.
#[pyfunction]
#[pyo3(signature = (evb = 0.1, xi_max = 25.0, n = 4000))]
fn monopole_perturbation(py: Python<'_>, evb: f64, xi_max: f64, n: usize) -> PyResult<Py<PyAny>> {
    let p = perturbation_solve(&base(xi_max, n)?, evb.powi(4) / 30.0, &SecondLineCoefficients::default()).map_err(err)?;
    let d = PyDict::new(py);
    d.set_item("perturbation", to_py(py, &p)?)?;
    d.set_item("asymptotics", to_py(py, &asymptotics(&p))?)?;
    Ok(d.into_any().unbind())
}

#[pyfunction]
#[pyo3(signature = (evb_list, xi_max = 25.0, n = 4000))]
fn energy_scan(py: Python<'_>, evb_list: Vec<f64>, xi_max: f64, n: usize) -> PyResult<Py<PyAny>> {
    let scan = energy_correction(&base(xi_max, n)?, &evb_list, &PrefactorParams::default(), &SecondLineCoefficients::default())
        .map_err(err)?;
    to_py(py, &scan)
}

/// Analytic against finite-difference Gateaux derivative at the BPS profile
/// along `(dk, dh)` sampled on its grid.
#[pyfunction]
#[pyo3(signature = (dk, dh, evb = 0.5, xi_max = 25.0, n = 4000))]
fn monopole_variational(py: Python<'_>, dk: Vec<f64>, dh: Vec<f64>, evb: f64, xi_max: f64, n: usize) -> PyResult<Py<PyAny>> {
    let p = base(xi_max, n)?;
    let r = variational_check(&p, &dk, &dh, &SecondLineCoefficients::default(), evb.powi(4) / 30.0).map_err(err)?;
    to_py(py, &r)
}

#[pymodule]
fn uinf(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyHarmonicField>()?;
    m.add("KAPPA", tensor::KAPPA)?;
    m.add("EPS3_CONSTANT", tensor::EPS3_CONSTANT)?;
    m.add("EPS4_CONSTANT", tensor::EPS4_CONSTANT)?;
    m.add_function(wrap_pyfunction!(bracket, m)?)?;
    m.add_function(wrap_pyfunction!(su2_generators, m)?)?;
    m.add_function(wrap_pyfunction!(structure_constants_csv, m)?)?;
    m.add_function(wrap_pyfunction!(identity_suite, m)?)?;
    m.add_function(wrap_pyfunction!(gen_delta_contract_3, m)?)?;
    m.add_function(wrap_pyfunction!(expanded_scalar_form, m)?)?;
    m.add_function(wrap_pyfunction!(gen_delta_contract_4, m)?)?;
    m.add_function(wrap_pyfunction!(trace_form_quartic, m)?)?;
    m.add_function(wrap_pyfunction!(reduce, m)?)?;
    m.add_function(wrap_pyfunction!(masslessness, m)?)?;
    m.add_function(wrap_pyfunction!(scan_b, m)?)?;
    m.add_function(wrap_pyfunction!(two_dim_check, m)?)?;
    m.add_function(wrap_pyfunction!(born_infeld, m)?)?;
    m.add_function(wrap_pyfunction!(bps_profile, m)?)?;
    m.add_function(wrap_pyfunction!(monopole_energy, m)?)?;
    m.add_function(wrap_pyfunction!(monopole_perturbation, m)?)?;
    m.add_function(wrap_pyfunction!(energy_scan, m)?)?;
    m.add_function(wrap_pyfunction!(monopole_variational, m)?)?;
    Ok(())
}
