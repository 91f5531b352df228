//! Python bindings: spaces, clouds, measures, payoff matrices, the game
//! solvers, circumradius and Jung reports, plus the scenario/demo runners
//! (which return JSON strings).

use std::sync::Arc;

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::IntoPyObjectExt;
use pyo3::types::PyDict;

use maxvar::barycenter::{frechet_mean, refine_candidates, RefinementConfig};
use maxvar::error::Error;
use maxvar::measures::DiscreteMeasure;
use maxvar::minimax::{
    balanced_maximizer, bilinear_value, certify_saddle, solve_fictitious, solve_lp, v_anti_variance,
    v_variance, PayoffKind, PayoffMatrix, SaddleSolution,
};
use maxvar::spaces::{model_side, sample_grid, ModelSpace, Point, PointCloud, Region};
use maxvar::{circum, jung, scenario};

fn err(e: Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn point_from_py(coords: Vec<f64>) -> Point {
    Point::Coords(coords)
}

fn point_to_py(p: &Point) -> Py<PyAny> {
    Python::attach(|py| match p {
        Point::Coords(c) => c.clone().into_py_any(py).unwrap(),
        Point::Index(i) => (*i).into_py_any(py).unwrap(),
    })
}

/// A model metric space.
#[pyclass(name = "Space", frozen, from_py_object)]
#[derive(Clone)]
struct PySpace {
    inner: ModelSpace,
}

#[pymethods]
impl PySpace {
    #[staticmethod]
    fn euclidean(dim: usize) -> PyResult<Self> {
        Ok(PySpace { inner: ModelSpace::euclidean(dim).map_err(err)? })
    }

    #[staticmethod]
    fn sphere(curvature: f64, dim: usize) -> PyResult<Self> {
        Ok(PySpace { inner: ModelSpace::sphere(curvature, dim).map_err(err)? })
    }

    #[staticmethod]
    fn hyperbolic(curvature: f64, dim: usize) -> PyResult<Self> {
        Ok(PySpace { inner: ModelSpace::hyperbolic(curvature, dim).map_err(err)? })
    }

    #[staticmethod]
    fn finite(table: Vec<Vec<f64>>) -> PyResult<Self> {
        Ok(PySpace { inner: ModelSpace::finite(table).map_err(err)? })
    }

    #[getter]
    fn kind(&self) -> &'static str {
        self.inner.kind_name()
    }

    #[getter]
    fn curvature(&self) -> f64 {
        self.inner.curvature()
    }

    fn distance(&self, p: Vec<f64>, q: Vec<f64>) -> PyResult<f64> {
        self.inner.distance(&point_from_py(p), &point_from_py(q)).map_err(err)
    }

    fn finite_distance(&self, i: usize, j: usize) -> PyResult<f64> {
        self.inner.distance(&Point::Index(i), &Point::Index(j)).map_err(err)
    }

    fn geodesic_point(&self, p: Vec<f64>, q: Vec<f64>, s: f64) -> PyResult<Py<PyAny>> {
        let out = self
            .inner
            .geodesic_point(&point_from_py(p), &point_from_py(q), s)
            .map_err(err)?;
        Ok(point_to_py(&out))
    }

    fn angle(&self, vertex: Vec<f64>, p: Vec<f64>, q: Vec<f64>) -> PyResult<f64> {
        self.inner
            .angle(&point_from_py(vertex), &point_from_py(p), &point_from_py(q))
            .map_err(err)
    }

    fn squared_distance_derivative(
        &self,
        x0: Vec<f64>,
        toward: Vec<f64>,
        p: Vec<f64>,
    ) -> PyResult<f64> {
        self.inner
            .squared_distance_derivative(
                &point_from_py(x0),
                &point_from_py(toward),
                &point_from_py(p),
            )
            .map_err(err)
    }

    fn __repr__(&self) -> String {
        format!("Space(kind={}, curvature={})", self.inner.kind_name(), self.inner.curvature())
    }
}

/// An ordered finite point set in a model space.
#[pyclass(name = "Cloud", frozen, from_py_object)]
#[derive(Clone)]
struct PyCloud {
    inner: Arc<PointCloud>,
}

#[pymethods]
impl PyCloud {
    #[new]
    fn new(space: PySpace, points: Vec<Vec<f64>>) -> PyResult<Self> {
        let pts = points.into_iter().map(Point::Coords).collect();
        Ok(PyCloud { inner: Arc::new(PointCloud::new(space.inner, pts).map_err(err)?) })
    }

    #[staticmethod]
    fn from_indices(space: PySpace, indices: Vec<usize>) -> PyResult<Self> {
        let pts = indices.into_iter().map(Point::Index).collect();
        Ok(PyCloud { inner: Arc::new(PointCloud::new(space.inner, pts).map_err(err)?) })
    }

    #[staticmethod]
    fn grid_box(space: PySpace, min: Vec<f64>, max: Vec<f64>, resolution: usize) -> PyResult<Self> {
        let cloud =
            sample_grid(&space.inner, &Region::Box { min, max }, resolution).map_err(err)?;
        Ok(PyCloud { inner: Arc::new(cloud) })
    }

    #[staticmethod]
    fn grid_sphere(space: PySpace, resolution: usize) -> PyResult<Self> {
        let cloud = sample_grid(&space.inner, &Region::FullSphere, resolution).map_err(err)?;
        Ok(PyCloud { inner: Arc::new(cloud) })
    }

    #[staticmethod]
    fn grid_cap(space: PySpace, center: Vec<f64>, radius: f64, resolution: usize) -> PyResult<Self> {
        let cloud =
            sample_grid(&space.inner, &Region::Cap { center, radius }, resolution).map_err(err)?;
        Ok(PyCloud { inner: Arc::new(cloud) })
    }

    #[staticmethod]
    fn simplex(n: usize) -> PyResult<Self> {
        Ok(PyCloud { inner: Arc::new(scenario::simplex_vertices(n).map_err(err)?) })
    }

    #[staticmethod]
    fn circle(count: usize) -> PyResult<Self> {
        Ok(PyCloud { inner: Arc::new(scenario::unit_diameter_circle(count).map_err(err)?) })
    }

    fn __len__(&self) -> usize {
        self.inner.len()
    }

    fn points(&self) -> Vec<Py<PyAny>> {
        self.inner.points().iter().map(point_to_py).collect()
    }

    fn diameter(&self) -> PyResult<f64> {
        self.inner.diameter().map_err(err)
    }
}

/// A discrete probability measure on a cloud.
#[pyclass(name = "Measure", frozen, from_py_object)]
#[derive(Clone)]
struct PyMeasure {
    inner: DiscreteMeasure,
}

#[pymethods]
impl PyMeasure {
    #[new]
    fn new(cloud: PyCloud, weights: Vec<f64>) -> PyResult<Self> {
        Ok(PyMeasure { inner: DiscreteMeasure::new(cloud.inner, weights).map_err(err)? })
    }

    #[staticmethod]
    fn uniform(cloud: PyCloud) -> Self {
        PyMeasure { inner: DiscreteMeasure::uniform(cloud.inner) }
    }

    #[staticmethod]
    fn dirac(cloud: PyCloud, index: usize) -> PyResult<Self> {
        Ok(PyMeasure { inner: DiscreteMeasure::dirac(cloud.inner, index).map_err(err)? })
    }

    #[getter]
    fn weights(&self) -> Vec<f64> {
        self.inner.weights().to_vec()
    }

    #[pyo3(signature = (eps=1e-9))]
    fn support(&self, eps: f64) -> Vec<usize> {
        self.inner.support(eps)
    }
}

/// The payoff matrix V(x_i, y_j).
#[pyclass(name = "Payoff", frozen, from_py_object)]
#[derive(Clone)]
struct PyPayoff {
    inner: PayoffMatrix,
}

#[pymethods]
impl PyPayoff {
    #[staticmethod]
    fn squared_distance(x: PyCloud, y: PyCloud) -> PyResult<Self> {
        Ok(PyPayoff { inner: PayoffMatrix::squared_distance(x.inner, y.inner).map_err(err)? })
    }

    #[staticmethod]
    fn distance(x: PyCloud, y: PyCloud) -> PyResult<Self> {
        Ok(PyPayoff { inner: PayoffMatrix::distance(x.inner, y.inner).map_err(err)? })
    }

    #[staticmethod]
    fn custom(x: PyCloud, y: PyCloud, matrix: Vec<Vec<f64>>) -> PyResult<Self> {
        Ok(PyPayoff { inner: PayoffMatrix::custom(x.inner, y.inner, matrix).map_err(err)? })
    }

    #[getter]
    fn shape(&self) -> (usize, usize) {
        (self.inner.rows(), self.inner.cols())
    }

    fn entry(&self, i: usize, j: usize) -> f64 {
        self.inner.entry(i, j)
    }

    fn bilinear_value(&self, mu: &PyMeasure, nu: &PyMeasure) -> PyResult<f64> {
        bilinear_value(&self.inner, &mu.inner, &nu.inner).map_err(err)
    }

    fn v_variance(&self, mu: &PyMeasure) -> PyResult<(f64, Vec<usize>)> {
        v_variance(&self.inner, &mu.inner).map_err(err)
    }

    fn v_anti_variance(&self, nu: &PyMeasure) -> PyResult<(f64, Vec<usize>)> {
        v_anti_variance(&self.inner, &nu.inner).map_err(err)
    }
}

fn solution_to_dict(py: Python<'_>, sol: &SaddleSolution) -> PyResult<Py<PyAny>> {
    let d = PyDict::new(py);
    d.set_item("value", sol.value)?;
    d.set_item("mu", sol.mu.weights().to_vec())?;
    d.set_item("nu", sol.nu.weights().to_vec())?;
    d.set_item("primal_residual", sol.primal_residual)?;
    d.set_item("dual_residual", sol.dual_residual)?;
    d.set_item("gap", sol.gap)?;
    d.set_item("method", sol.method.name())?;
    d.set_item("iterations", sol.iterations)?;
    Ok(d.into_any().unbind())
}

/// Exact game solve; returns a dict with value, strategies and residuals.
#[pyfunction(name = "solve_lp")]
fn py_solve_lp(py: Python<'_>, payoff: &PyPayoff) -> PyResult<Py<PyAny>> {
    let sol = solve_lp(&payoff.inner).map_err(err)?;
    solution_to_dict(py, &sol)
}

/// Simultaneous fictitious play with time-averaged strategies.
#[pyfunction(name = "solve_fictitious", signature = (payoff, max_iters=100_000, target_gap=1e-3))]
fn py_solve_fictitious(
    py: Python<'_>,
    payoff: &PyPayoff,
    max_iters: usize,
    target_gap: f64,
) -> PyResult<Py<PyAny>> {
    let sol = solve_fictitious(&payoff.inner, max_iters, target_gap).map_err(err)?;
    solution_to_dict(py, &sol)
}

/// Saddle-point certificate for a (mu, nu) pair.
#[pyfunction(name = "certify_saddle", signature = (payoff, mu, nu, tol=1e-7))]
fn py_certify_saddle(
    py: Python<'_>,
    payoff: &PyPayoff,
    mu: &PyMeasure,
    nu: &PyMeasure,
    tol: f64,
) -> PyResult<Py<PyAny>> {
    let cert = certify_saddle(&payoff.inner, &mu.inner, &nu.inner, tol).map_err(err)?;
    let d = PyDict::new(py);
    d.set_item("value", cert.value)?;
    d.set_item("pass", cert.pass())?;
    d.set_item("barycenter_ok", cert.barycenter_ok)?;
    d.set_item("anti_barycenter_ok", cert.anti_barycenter_ok)?;
    d.set_item("worst_column_violation", cert.worst_column_violation)?;
    d.set_item("worst_row_violation", cert.worst_row_violation)?;
    Ok(d.into_any().unbind())
}

/// Most balanced maximizer at the given optimal value.
#[pyfunction(name = "balanced_maximizer")]
fn py_balanced_maximizer(payoff: &PyPayoff, value: f64) -> PyResult<PyMeasure> {
    Ok(PyMeasure { inner: balanced_maximizer(&payoff.inner, value).map_err(err)? })
}

/// Weighted Fréchet mean of a measure on its cloud.
#[pyfunction(name = "frechet_mean", signature = (cloud, mu, init, descent_steps=200))]
fn py_frechet_mean(
    py: Python<'_>,
    cloud: &PyCloud,
    mu: &PyMeasure,
    init: Vec<f64>,
    descent_steps: usize,
) -> PyResult<Py<PyAny>> {
    let cfg = RefinementConfig { descent_steps, ..RefinementConfig::default() };
    let fm = frechet_mean(&cloud.inner, &mu.inner, &point_from_py(init), &cfg).map_err(err)?;
    let d = PyDict::new(py);
    d.set_item("point", point_to_py(&fm.point))?;
    d.set_item("gradient_norm", fm.gradient_norm)?;
    d.set_item("iterations", fm.iterations)?;
    d.set_item("objective", fm.objective)?;
    d.set_item("converged", fm.converged)?;
    Ok(d.into_any().unbind())
}

/// Candidate refinement: grow Y toward the barycenters of maximizers.
#[pyfunction(name = "refine_candidates", signature = (x, y, squared=true, max_rounds=20, value_tol=1e-6))]
fn py_refine_candidates(
    py: Python<'_>,
    x: &PyCloud,
    y: &PyCloud,
    squared: bool,
    max_rounds: usize,
    value_tol: f64,
) -> PyResult<Py<PyAny>> {
    let cfg = RefinementConfig { max_rounds, value_tol, ..RefinementConfig::default() };
    let kind = if squared { PayoffKind::SquaredDistance } else { PayoffKind::Distance };
    let r = refine_candidates(&x.inner, &y.inner, kind, &cfg).map_err(err)?;
    let d = PyDict::new(py);
    d.set_item("y_cloud", PyCloud { inner: r.y_cloud.clone() })?;
    d.set_item("history", r.history.clone())?;
    d.set_item("solution", solution_to_dict(py, &r.solution)?)?;
    Ok(d.into_any().unbind())
}

/// Brute-force circumball over a candidate grid.
#[pyfunction(name = "discrete_circumball")]
fn py_discrete_circumball(py: Python<'_>, x: &PyCloud, y: &PyCloud) -> PyResult<Py<PyAny>> {
    let ball = circum::discrete_circumball(&x.inner, &y.inner).map_err(err)?;
    ball_to_dict(py, &ball)
}

/// Exact Euclidean minimal enclosing ball (dimension at most 6).
#[pyfunction(name = "welzl_meb")]
fn py_welzl_meb(py: Python<'_>, cloud: &PyCloud) -> PyResult<Py<PyAny>> {
    let ball = circum::welzl_meb(&cloud.inner).map_err(err)?;
    ball_to_dict(py, &ball)
}

fn ball_to_dict(py: Python<'_>, ball: &circum::CircumballResult) -> PyResult<Py<PyAny>> {
    let d = PyDict::new(py);
    d.set_item("center", point_to_py(&ball.center))?;
    d.set_item("center_index", ball.center_index)?;
    d.set_item("radius", ball.radius)?;
    d.set_item("radius_sq", ball.radius_sq)?;
    d.set_item("attaining", ball.attaining.clone())?;
    Ok(d.into_any().unbind())
}

/// Wasserstein circumcenter of the Dirac embedding and squared circumradius.
#[pyfunction(name = "wasserstein_circumradius")]
fn py_wasserstein_circumradius(payoff: &PyPayoff) -> PyResult<(PyMeasure, f64)> {
    let (nu, r2) = circum::wasserstein_circumradius(&payoff.inner).map_err(err)?;
    Ok((PyMeasure { inner: nu }, r2))
}

/// Jung bound S(R, n, k); n=None means the n -> infinity limit.
#[pyfunction(name = "jung_bound", signature = (radius, n, k))]
fn py_jung_bound(radius: f64, n: Option<u64>, k: f64) -> PyResult<f64> {
    jung::jung_bound(radius, n, k).map_err(err)
}

/// Both sides of S(R, n, k) = d_k(R, R, arccos(-1/n)) and their relative error.
#[pyfunction(name = "jung_identity_check", signature = (radius, n, k))]
fn py_jung_identity_check(radius: f64, n: Option<u64>, k: f64) -> PyResult<(f64, f64, f64)> {
    let c = jung::jung_identity_check(radius, n, k).map_err(err)?;
    Ok((c.lhs, c.rhs, c.relative_error))
}

/// Third side of a model-space triangle (law of cosines at curvature k).
#[pyfunction(name = "model_side")]
fn py_model_side(k: f64, l1: f64, l2: f64, alpha: f64) -> PyResult<f64> {
    model_side(k, l1, l2, alpha).map_err(err)
}

/// Full Jung certification of a cloud; returns the report as a dict.
#[pyfunction(name = "jung_check", signature = (cloud, max_rounds=20, value_tol=1e-6))]
fn py_jung_check(
    py: Python<'_>,
    cloud: &PyCloud,
    max_rounds: usize,
    value_tol: f64,
) -> PyResult<Py<PyAny>> {
    let cfg = RefinementConfig { max_rounds, value_tol, ..RefinementConfig::default() };
    let report = jung::jung_check(&cloud.inner, &cfg).map_err(err)?;
    let d = PyDict::new(py);
    d.set_item("D", report.diameter)?;
    d.set_item("R", report.radius)?;
    d.set_item("k", report.curvature)?;
    d.set_item("m", report.support_size)?;
    d.set_item("S_inf", report.bound_infinity)?;
    d.set_item("S_support", report.bound_support)?;
    d.set_item("pass_inf", report.pass_infinity)?;
    d.set_item("pass_support", report.pass_support)?;
    if let Some(a) = &report.angles {
        let angles = PyDict::new(py);
        angles.set_item("cosines", a.cosines.clone())?;
        angles.set_item("weighted_sum", a.weighted_sum)?;
        angles.set_item("C", a.min_cosine)?;
        angles.set_item("n_bound", a.n_bound)?;
        d.set_item("angles", angles)?;
    } else {
        d.set_item("angles", py.None())?;
    }
    d.set_item("history", report.history.clone())?;
    Ok(d.into_any().unbind())
}

/// Runs a scenario given as JSON text; returns the result JSON as a string.
#[pyfunction(name = "run_scenario_json")]
fn py_run_scenario_json(text: &str) -> PyResult<String> {
    let scenario = scenario::parse_scenario(text).map_err(err)?;
    let artifacts = scenario::run_scenario(scenario).map_err(err)?;
    serde_json::to_string_pretty(&artifacts.result).map_err(|e| err(Error::Json(e)))
}

/// Runs a built-in demo; returns the result JSON as a string.
#[pyfunction(name = "run_demo_json")]
fn py_run_demo_json(name: &str) -> PyResult<String> {
    let artifacts = scenario::run_demo(name).map_err(err)?;
    serde_json::to_string_pretty(&artifacts.result).map_err(|e| err(Error::Json(e)))
}

#[pymodule]
fn maxvar_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PySpace>()?;
    m.add_class::<PyCloud>()?;
    m.add_class::<PyMeasure>()?;
    m.add_class::<PyPayoff>()?;
    m.add_function(wrap_pyfunction!(py_solve_lp, m)?)?;
    m.add_function(wrap_pyfunction!(py_solve_fictitious, m)?)?;
    m.add_function(wrap_pyfunction!(py_certify_saddle, m)?)?;
    m.add_function(wrap_pyfunction!(py_balanced_maximizer, m)?)?;
    m.add_function(wrap_pyfunction!(py_frechet_mean, m)?)?;
    m.add_function(wrap_pyfunction!(py_refine_candidates, m)?)?;
    m.add_function(wrap_pyfunction!(py_discrete_circumball, m)?)?;
    m.add_function(wrap_pyfunction!(py_welzl_meb, m)?)?;
    m.add_function(wrap_pyfunction!(py_wasserstein_circumradius, m)?)?;
    m.add_function(wrap_pyfunction!(py_jung_bound, m)?)?;
    m.add_function(wrap_pyfunction!(py_jung_identity_check, m)?)?;
    m.add_function(wrap_pyfunction!(py_model_side, m)?)?;
    m.add_function(wrap_pyfunction!(py_jung_check, m)?)?;
    m.add_function(wrap_pyfunction!(py_run_scenario_json, m)?)?;
    m.add_function(wrap_pyfunction!(py_run_demo_json, m)?)?;
    Ok(())
}
