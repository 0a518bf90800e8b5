//! Python bindings: grids, fields, states, the star product, residual checks and studies.
//!
//! Residual reports come back as [`PyResidualReport`]; the larger study reports are
//! returned as plain dicts built from their JSON form.

use num_complex::Complex64;
use pyo3::exceptions::{PyRuntimeError, PyTypeError, PyValueError};
use pyo3::prelude::*;
use serde::Serialize;

use starwall::analysis;
use starwall::phase_space::{make_grid, Field, FieldKind, PhaseSpaceGrid, Window};
use starwall::specfun::MellinBarnesSpec;
use starwall::star::{
    self, CheckOptions, DifferenceForm, LrOptions, ResidualReport, ShiftBranch, StarOperand, ZerothOrder,
};
use starwall::states::{
    self as st, AnalyticOperand, ClosedFormOperand, EvalMethod, Family, LiouvilleEvaluator, StateSpec, WignerOptions,
};

fn err(e: starwall::Error) -> PyErr {
    use starwall::Error::*;
    match e {
        Config(_) | Window(_) | UnsupportedGrid(_) | GridMismatch(_) | ExcludedSample { .. } => {
            PyValueError::new_err(e.to_string())
        }
        _ => PyRuntimeError::new_err(e.to_string()),
    }
}

fn kebab<T: serde::de::DeserializeOwned>(what: &str, s: &str) -> PyResult<T> {
    serde_json::from_value(serde_json::Value::String(s.to_string()))
        .map_err(|_| PyValueError::new_err(format!("unknown {what} `{s}`")))
}

/// Serializes through JSON into a Python object.
fn to_py<'py, T: Serialize>(py: Python<'py>, v: &T) -> PyResult<Bound<'py, PyAny>> {
    let s = serde_json::to_string(v).map_err(|e| PyRuntimeError::new_err(e.to_string()))?;
    py.import("json")?.call_method1("loads", (s,))
}

fn c(v: f64) -> Complex64 {
    Complex64::new(v, 0.0)
}

#[pyclass(name = "Grid", module = "starwall", frozen, skip_from_py_object)]
#[derive(Clone, Copy)]
pub struct PyGrid {
    inner: PhaseSpaceGrid,
}

#[pymethods]
impl PyGrid {
    #[new]
    fn new(x_min: f64, x_max: f64, n_x: usize, p_min: f64, p_max: f64, n_p: usize) -> PyResult<Self> {
        Ok(Self { inner: make_grid(x_min, x_max, n_x, p_min, p_max, n_p).map_err(err)? })
    }

    /// x in [-6, 1], p in [-6, 6], 512 x 512.
    #[staticmethod]
    fn default_checks() -> Self {
        Self { inner: PhaseSpaceGrid::default_checks() }
    }

    /// Grid with `n_p dp dx = q pi`, used by the purity test.
    #[staticmethod]
    #[pyo3(signature = (x_min, x_max, n_x, n_p, q = 1))]
    fn aligned(x_min: f64, x_max: f64, n_x: usize, n_p: usize, q: usize) -> PyResult<Self> {
        Ok(Self { inner: analysis::aligned_grid(x_min, x_max, n_x, n_p, q).map_err(err)? })
    }

    #[getter]
    fn x(&self) -> Vec<f64> {
        self.inner.x.values()
    }

    #[getter]
    fn p(&self) -> Vec<f64> {
        self.inner.p.values()
    }

    #[getter]
    fn shape(&self) -> (usize, usize) {
        (self.inner.x.n, self.inner.p.n)
    }

    fn __repr__(&self) -> String {
        let g = &self.inner;
        format!("Grid(x=[{}, {}] x {}, p=[{}, {}] x {})", g.x.min, g.x.max, g.x.n, g.p.min, g.p.max, g.p.n)
    }
}

#[pyclass(name = "Field", module = "starwall", frozen, skip_from_py_object)]
#[derive(Clone)]
pub struct PyField {
    inner: Field,
}

#[pymethods]
impl PyField {
    /// `values` is a list of rows (one per x), each a list of complex numbers.
    #[new]
    fn new(grid: &PyGrid, values: Vec<Vec<Complex64>>) -> PyResult<Self> {
        let g = grid.inner;
        if values.len() != g.x.n || values.iter().any(|r| r.len() != g.p.n) {
            return Err(PyValueError::new_err(format!("values must have shape ({}, {})", g.x.n, g.p.n)));
        }
        let flat = values.into_iter().flatten().collect();
        Ok(Self { inner: Field::new(g, flat, FieldKind::Complex).map_err(err)? })
    }

    #[getter]
    fn grid(&self) -> PyGrid {
        PyGrid { inner: *self.inner.grid() }
    }

    fn get(&self, ix: usize, ip: usize) -> PyResult<Complex64> {
        let g = self.inner.grid();
        if ix >= g.x.n || ip >= g.p.n {
            return Err(PyValueError::new_err("index out of range"));
        }
        Ok(self.inner.get(ix, ip))
    }

    /// Rows over x, each a list over p.
    fn values(&self) -> Vec<Vec<Complex64>> {
        let n = self.inner.grid().p.n;
        self.inner.values().chunks(n).map(|r| r.to_vec()).collect()
    }

    fn real(&self) -> Vec<Vec<f64>> {
        let n = self.inner.grid().p.n;
        self.inner.values().chunks(n).map(|r| r.iter().map(|v| v.re).collect()).collect()
    }

    fn sup_norm(&self) -> f64 {
        self.inner.sup_norm()
    }

    fn to_csv(&self) -> String {
        self.inner.to_csv_string()
    }
}

/// One eigenfunction; mirrors the `[state]` table of the CLI config.
#[pyclass(name = "State", module = "starwall", frozen, skip_from_py_object)]
#[derive(Clone)]
pub struct PyState {
    inner: StateSpec,
}

#[pymethods]
impl PyState {
    #[new]
    #[pyo3(signature = (family, k, alpha = 1.0, L = 0.0, amp_plus = (1.0, 0.0), amp_minus = (1.0, 0.0), sigma_reg = 0.05))]
    #[allow(non_snake_case)]
    fn new(
        family: &str,
        k: f64,
        alpha: f64,
        L: f64,
        amp_plus: (f64, f64),
        amp_minus: (f64, f64),
        sigma_reg: f64,
    ) -> PyResult<Self> {
        let inner = StateSpec {
            family: kebab::<Family>("family", family)?,
            k,
            alpha,
            l: L,
            amp_plus: [amp_plus.0, amp_plus.1],
            amp_minus: [amp_minus.0, amp_minus.1],
            sigma_reg,
        };
        inner.validate().map_err(err)?;
        Ok(Self { inner })
    }

    #[getter]
    fn family(&self) -> String {
        serde_json::to_value(self.inner.family).ok().and_then(|v| v.as_str().map(str::to_owned)).unwrap_or_default()
    }

    #[getter]
    fn k(&self) -> f64 {
        self.inner.k
    }

    fn psi(&self, x: f64) -> PyResult<Complex64> {
        Ok(self.inner.wave_function().map_err(err)?.eval(x))
    }

    /// Quadrature Wigner function; returns the field and the quadrature error estimate.
    #[pyo3(signature = (grid, window = None))]
    fn wigner(&self, py: Python<'_>, grid: &PyGrid, window: Option<f64>) -> PyResult<(PyField, f64)> {
        let psi = self.inner.wave_function().map_err(err)?;
        let g = grid.inner;
        let w = window.unwrap_or_else(|| match self.inner.family {
            Family::FreeSuperposition => 8.0 * st::envelope_width_for(self.inner.sigma_reg),
            Family::Liouville => g.x.min.abs().max(g.x.max.abs()) + 1.0 + 40.0 / self.inner.alpha,
            _ => g.x.min.abs().max(g.x.max.abs()) + 1.0,
        });
        let out = py
            .detach(|| st::wigner_transform_numeric(psi.as_ref(), g, WignerOptions::with_window(w)))
            .map_err(err)?;
        Ok((PyField { inner: out.field }, out.error_estimate))
    }

    /// Discrete Wigner transform whose position kernel is exactly the sampled `psi psi*`.
    fn wigner_lattice(&self, py: Python<'_>, grid: &PyGrid) -> PyResult<PyField> {
        let psi = self.inner.wave_function().map_err(err)?;
        let g = grid.inner;
        Ok(PyField { inner: py.detach(|| st::wigner_transform_lattice(psi.as_ref(), g)).map_err(err)? })
    }

    fn __repr__(&self) -> String {
        serde_json::to_string(&self.inner).unwrap_or_default()
    }
}

/// Closed-form wall Wigner function with phase `phi`, scaled, without the step factor.
#[pyclass(name = "ClosedForm", module = "starwall", frozen, skip_from_py_object)]
#[derive(Clone, Copy)]
pub struct PyClosedForm {
    inner: ClosedFormOperand,
}

#[pymethods]
impl PyClosedForm {
    #[new]
    #[pyo3(signature = (k, phi = 0.0, scale = 1.0))]
    fn new(k: f64, phi: f64, scale: f64) -> PyResult<Self> {
        if !(k > 0.0) {
            return Err(PyValueError::new_err(format!("k must be positive, got {k}")));
        }
        Ok(Self { inner: ClosedFormOperand { k, phi, scale } })
    }

    fn value(&self, x: f64, p: f64) -> PyResult<Complex64> {
        self.inner.value(c(x), c(p)).map_err(err)
    }
}

#[pyclass(name = "Liouville", module = "starwall", frozen, skip_from_py_object)]
#[derive(Clone, Copy)]
pub struct PyLiouville {
    inner: LiouvilleEvaluator,
}

#[pymethods]
impl PyLiouville {
    #[new]
    #[pyo3(signature = (alpha, k, method = "auto", mb_sigma = -0.25, mb_t_max = 12.0, mb_nodes = 64))]
    fn new(alpha: f64, k: f64, method: &str, mb_sigma: f64, mb_t_max: f64, mb_nodes: usize) -> PyResult<Self> {
        let mb = MellinBarnesSpec { sigma: mb_sigma, t_max: mb_t_max, n_nodes: mb_nodes };
        let method = kebab::<EvalMethod>("method", method)?;
        Ok(Self { inner: LiouvilleEvaluator::new(alpha, k, mb, method).map_err(err)? })
    }

    /// Value at complex `x`, `p`.
    fn value(&self, x: Complex64, p: Complex64) -> PyResult<Complex64> {
        st::rho_liouville(&self.inner, x, p).map_err(err)
    }

    /// x-derivatives of the given orders.
    fn derivatives(&self, x: Complex64, p: Complex64, orders: Vec<u32>) -> PyResult<Vec<Complex64>> {
        Ok(self.inner.derivatives(x, p, &orders).map_err(err)?.values)
    }

    fn field(&self, py: Python<'_>, grid: &PyGrid) -> PyResult<PyField> {
        let (ev, g) = (self.inner, grid.inner);
        let f = py
            .detach(|| Field::try_from_fn(g, FieldKind::RealExpected, |x, p| st::rho_liouville(&ev, c(x), c(p))))
            .map_err(err)?;
        Ok(PyField { inner: f })
    }
}

#[pyclass(name = "ResidualReport", module = "starwall", frozen, skip_from_py_object)]
pub struct PyResidualReport {
    inner: ResidualReport,
}

#[pymethods]
impl PyResidualReport {
    #[getter]
    fn equation_id(&self) -> &str {
        &self.inner.equation_id
    }
    #[getter]
    fn sup_norm(&self) -> f64 {
        self.inner.sup_norm
    }
    #[getter]
    fn l2_norm(&self) -> f64 {
        self.inner.l2_norm
    }
    #[getter]
    fn reference_scale(&self) -> f64 {
        self.inner.reference_scale
    }
    #[getter]
    fn tolerance(&self) -> f64 {
        self.inner.tolerance
    }
    #[getter]
    fn verdict(&self) -> &'static str {
        if self.inner.passed() {
            "pass"
        } else {
            "fail"
        }
    }
    #[getter]
    fn warnings(&self) -> Vec<String> {
        self.inner.warnings.clone()
    }
    #[getter]
    fn n_points(&self) -> usize {
        self.inner.points.len()
    }
    /// `sup_norm / reference_scale`.
    fn relative(&self) -> f64 {
        self.inner.relative()
    }
    fn passed(&self) -> bool {
        self.inner.passed()
    }
    fn to_json(&self) -> PyResult<String> {
        self.inner.to_json().map_err(err)
    }
    fn to_csv(&self) -> String {
        self.inner.to_csv()
    }
    fn __repr__(&self) -> String {
        format!(
            "ResidualReport({}, {}, relative={:.3e}, tolerance={:.1e})",
            self.inner.equation_id,
            self.verdict(),
            self.inner.relative(),
            self.inner.tolerance
        )
    }
}

fn report(r: ResidualReport) -> PyResidualReport {
    PyResidualReport { inner: r }
}

/// A `Field`, `ClosedForm` or `Liouville` (the last two need `grid`).
enum Operand {
    Grid(Field),
    Closed(ClosedFormOperand, PhaseSpaceGrid),
    Liouville(LiouvilleEvaluator, PhaseSpaceGrid),
}

impl Operand {
    fn extract(obj: &Bound<'_, PyAny>, grid: Option<&PyGrid>) -> PyResult<Self> {
        if let Ok(f) = obj.cast::<PyField>() {
            return Ok(Operand::Grid(f.get().inner.clone()));
        }
        let need_grid = || grid.map(|g| g.inner).ok_or_else(|| PyValueError::new_err("analytic operands need a grid"));
        if let Ok(op) = obj.cast::<PyClosedForm>() {
            return Ok(Operand::Closed(op.get().inner, need_grid()?));
        }
        if let Ok(op) = obj.cast::<PyLiouville>() {
            return Ok(Operand::Liouville(op.get().inner, need_grid()?));
        }
        Err(PyTypeError::new_err("operand must be a Field, ClosedForm or Liouville"))
    }

    fn with<R>(&self, f: impl FnOnce(&StarOperand) -> R) -> R {
        match self {
            Operand::Grid(field) => f(&StarOperand::Grid(field)),
            Operand::Closed(op, grid) => f(&StarOperand::Analytic { op, grid: *grid }),
            Operand::Liouville(op, grid) => f(&StarOperand::Analytic { op, grid: *grid }),
        }
    }
}

fn check_options(tolerance: f64, region: Option<(f64, f64, f64, f64)>) -> PyResult<CheckOptions> {
    let mut o = CheckOptions::new(tolerance);
    if let Some((a, b, c, d)) = region {
        o = o.with_region(Window::new(a, b, c, d).map_err(err)?);
    }
    Ok(o)
}

#[pyfunction]
#[pyo3(signature = (k, x, p, phi = 0.0))]
fn rho_bar(k: f64, x: f64, p: f64, phi: f64) -> f64 {
    st::rho_bar_phase(k, phi, x, p)
}

#[pyfunction]
fn rho_bar_field(k: f64, grid: &PyGrid) -> PyResult<PyField> {
    Ok(PyField { inner: st::fill_rho_bar(k, grid.inner).map_err(err)? })
}

/// Regularized free-particle Wigner function of a `free-superposition` state.
#[pyfunction]
fn rho_free_field(state: &PyState, grid: &PyGrid) -> PyResult<PyField> {
    Ok(PyField { inner: st::rho_free_regularized(&state.inner, grid.inner).map_err(err)? })
}

#[pyfunction]
#[pyo3(name = "star")]
fn star_product(py: Python<'_>, f: &PyField, g: &PyField) -> PyResult<PyField> {
    let (a, b) = (&f.inner, &g.inner);
    Ok(PyField { inner: py.detach(|| star::star(a, b)).map_err(err)? })
}

/// Residual of `(p^2 - k^2) rho - i p d_x rho - d_x^2 rho / 4`.
#[pyfunction]
#[pyo3(signature = (rho, k, grid = None, tolerance = 1e-6, region = None))]
fn genvalue_residual_free(
    py: Python<'_>,
    rho: &Bound<'_, PyAny>,
    k: f64,
    grid: Option<&PyGrid>,
    tolerance: f64,
    region: Option<(f64, f64, f64, f64)>,
) -> PyResult<PyResidualReport> {
    let op = Operand::extract(rho, grid)?;
    let opts = check_options(tolerance, region)?;
    let r = py.detach(|| op.with(|o| star::genvalue_residual_free(o, k, &opts))).map_err(err)?;
    Ok(report(r))
}

/// Fourth-order residual on the points with `x < 0`; `zeroth` is `expanded` or `as-printed`.
#[pyfunction]
#[pyo3(signature = (rho, k, grid = None, zeroth = "expanded", tolerance = 1e-8, region = None))]
fn fourth_order_residual(
    py: Python<'_>,
    rho: &Bound<'_, PyAny>,
    k: f64,
    grid: Option<&PyGrid>,
    zeroth: &str,
    tolerance: f64,
    region: Option<(f64, f64, f64, f64)>,
) -> PyResult<PyResidualReport> {
    let op = Operand::extract(rho, grid)?;
    let zeroth = kebab::<ZerothOrder>("zeroth-order form", zeroth)?;
    let opts = check_options(tolerance, region)?;
    let r = py.detach(|| op.with(|o| star::fourth_order_residual(o, k, zeroth, &opts))).map_err(err)?;
    Ok(report(r))
}

/// Double star product `(p^2 - E) * rho * (p^2 - E)` against the differential route, as a dict.
#[pyfunction]
#[pyo3(signature = (rho, e, tolerance = 1e-5))]
fn lr_star_residual<'py>(py: Python<'py>, rho: &PyField, e: f64, tolerance: f64) -> PyResult<Bound<'py, PyAny>> {
    let f = &rho.inner;
    let r = py
        .detach(|| star::lr_star_residual(f, e, &LrOptions { tolerance, ..LrOptions::default() }))
        .map_err(err)?;
    to_py(py, &r)
}

#[pyfunction]
#[pyo3(signature = (ev, points, tolerance = 1e-6))]
fn genvalue_residual_liouville(
    py: Python<'_>,
    ev: &PyLiouville,
    points: Vec<(f64, f64)>,
    tolerance: f64,
) -> PyResult<PyResidualReport> {
    let e = ev.inner;
    let r = py
        .detach(|| star::genvalue_residual_liouville(&e, e.alpha, e.k, &points, tolerance))
        .map_err(err)?;
    Ok(report(r))
}

/// `form` is `derived` or `as-printed`.
#[pyfunction]
#[pyo3(signature = (ev, points, form = "derived", tolerance = 1e-6))]
fn difference_eq_residual(
    py: Python<'_>,
    ev: &PyLiouville,
    points: Vec<(f64, f64)>,
    form: &str,
    tolerance: f64,
) -> PyResult<PyResidualReport> {
    let e = ev.inner;
    let form = kebab::<DifferenceForm>("difference form", form)?;
    let r = py
        .detach(|| star::difference_eq_residual(&e, e.alpha, e.k, &points, form, tolerance))
        .map_err(err)?;
    Ok(report(r))
}

/// `branch` is `complex-shift` or `real-shift`. Returns the report, identity defect and shift.
#[pyfunction]
#[pyo3(signature = (ev, points, branch = "complex-shift", tolerance = 1e-6))]
fn effective_mass_residual(
    py: Python<'_>,
    ev: &PyLiouville,
    points: Vec<(f64, f64)>,
    branch: &str,
    tolerance: f64,
) -> PyResult<(PyResidualReport, f64, Complex64)> {
    let e = ev.inner;
    let branch = kebab::<ShiftBranch>("shift branch", branch)?;
    let r = py
        .detach(|| star::effective_mass_residual(&e, e.alpha, e.k, branch, &points, tolerance))
        .map_err(err)?;
    Ok((report(r.residual), r.identity_defect, Complex64::new(r.shift[0], r.shift[1])))
}

#[pyfunction]
fn sample_rectangle(x: (f64, f64), p: (f64, f64), n: usize) -> Vec<(f64, f64)> {
    star::sample_rectangle(x, p, n)
}

#[pyfunction]
#[pyo3(signature = (alphas, k, window = (-3.0, -0.5, -3.0, 3.0), n_x = 26, n_p = 31))]
fn convergence_study<'py>(
    py: Python<'py>,
    alphas: Vec<f64>,
    k: f64,
    window: (f64, f64, f64, f64),
    n_x: usize,
    n_p: usize,
) -> PyResult<Bound<'py, PyAny>> {
    let w = Window::new(window.0, window.1, window.2, window.3).map_err(err)?;
    let grid = w.grid(n_x, n_p).map_err(err)?;
    let r = py
        .detach(|| analysis::convergence_study(&alphas, k, w, grid, MellinBarnesSpec::default()))
        .map_err(err)?;
    to_py(py, &r)
}

#[pyfunction]
fn wall_suppression_study<'py>(
    py: Python<'py>,
    alphas: Vec<f64>,
    k: f64,
    x_pos: f64,
    p_samples: Vec<f64>,
) -> PyResult<Bound<'py, PyAny>> {
    let r = py
        .detach(|| analysis::wall_suppression_study(&alphas, k, x_pos, &p_samples, MellinBarnesSpec::default()))
        .map_err(err)?;
    to_py(py, &r)
}

/// Singular values of the position kernel over the window's x range.
#[pyfunction]
#[pyo3(signature = (rho, window = None))]
fn purity_check<'py>(
    py: Python<'py>,
    rho: &PyField,
    window: Option<(f64, f64, f64, f64)>,
) -> PyResult<Bound<'py, PyAny>> {
    let g = rho.inner.grid();
    let (a, b, c, d) = window.unwrap_or((g.x.min, g.x.max, g.p.min, g.p.max));
    let w = Window::new(a, b, c, d).map_err(err)?;
    let f = &rho.inner;
    let r = py.detach(|| analysis::purity_check(f, w)).map_err(err)?;
    to_py(py, &r)
}

#[pyfunction]
fn robin_scan<'py>(py: Python<'py>, l_values: Vec<f64>, k: f64, grid: &PyGrid) -> PyResult<Bound<'py, PyAny>> {
    let g = grid.inner;
    let r = py
        .detach(|| analysis::robin_scan(&l_values, k, g, analysis::RobinOptions::default()))
        .map_err(err)?;
    to_py(py, &r)
}

#[pymodule(name = "starwall")]
pub fn starwall_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyGrid>()?;
    m.add_class::<PyField>()?;
    m.add_class::<PyState>()?;
    m.add_class::<PyClosedForm>()?;
    m.add_class::<PyLiouville>()?;
    m.add_class::<PyResidualReport>()?;
    m.add_function(wrap_pyfunction!(rho_bar, m)?)?;
    m.add_function(wrap_pyfunction!(rho_bar_field, m)?)?;
    m.add_function(wrap_pyfunction!(rho_free_field, m)?)?;
    m.add_function(wrap_pyfunction!(star_product, m)?)?;
    m.add_function(wrap_pyfunction!(genvalue_residual_free, m)?)?;
    m.add_function(wrap_pyfunction!(fourth_order_residual, m)?)?;
    m.add_function(wrap_pyfunction!(lr_star_residual, m)?)?;
    m.add_function(wrap_pyfunction!(genvalue_residual_liouville, m)?)?;
    m.add_function(wrap_pyfunction!(difference_eq_residual, m)?)?;
    m.add_function(wrap_pyfunction!(effective_mass_residual, m)?)?;
    m.add_function(wrap_pyfunction!(sample_rectangle, m)?)?;
    m.add_function(wrap_pyfunction!(convergence_study, m)?)?;
    m.add_function(wrap_pyfunction!(wall_suppression_study, m)?)?;
    m.add_function(wrap_pyfunction!(purity_check, m)?)?;
    m.add_function(wrap_pyfunction!(robin_scan, m)?)?;
    Ok(())
}
