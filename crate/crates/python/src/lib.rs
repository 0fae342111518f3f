use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

use torricelli_core as core;
use torricelli_core::{Case, Dim, Point, SolverOptions, VertexVerdict};

fn err(e: core::Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn options(tolerance: f64, max_iterations: usize) -> PyResult<SolverOptions> {
    let opts = SolverOptions::default()
        .with_tolerance(tolerance)
        .with_max_iterations(max_iterations);
    opts.validate().map_err(err)?;
    Ok(opts)
}

fn point(x: Vec<f64>) -> PyResult<Point> {
    Point::new(&x).map_err(err)
}

fn sphere_point(x: [f64; 3]) -> PyResult<core::SpherePoint> {
    core::SpherePoint::from_vector(x).map_err(err)
}

/// Weighted anchors in the plane or in space.
#[pyclass(frozen)]
struct Configuration {
    inner: core::Configuration,
}

#[pymethods]
impl Configuration {
    #[new]
    fn new(coords: Vec<Vec<f64>>, weights: Vec<f64>) -> PyResult<Self> {
        let inner = core::Configuration::from_coords(&coords, &weights).map_err(err)?;
        Ok(Configuration { inner })
    }

    #[getter]
    fn dim(&self) -> usize {
        self.inner.dim().get()
    }

    #[getter]
    fn coords(&self) -> Vec<Vec<f64>> {
        self.inner
            .points()
            .iter()
            .map(|p| p.position.to_vec())
            .collect()
    }

    #[getter]
    fn weights(&self) -> Vec<f64> {
        self.inner.points().iter().map(|p| p.weight).collect()
    }

    #[getter]
    fn total_weight(&self) -> f64 {
        self.inner.total_weight()
    }

    #[getter]
    fn diameter(&self) -> f64 {
        self.inner.diameter()
    }

    fn objective(&self, x: Vec<f64>) -> PyResult<f64> {
        core::objective(&self.inner, &point(x)?).map_err(err)
    }

    fn gradient(&self, x: Vec<f64>) -> PyResult<Vec<f64>> {
        Ok(core::gradient(&self.inner, &point(x)?)
            .map_err(err)?
            .to_vec())
    }

    fn balancing_residual(&self, x: Vec<f64>) -> PyResult<Vec<f64>> {
        Ok(core::balancing_residual(&self.inner, &point(x)?)
            .map_err(err)?
            .to_vec())
    }

    fn __len__(&self) -> usize {
        self.inner.len()
    }

    fn __repr__(&self) -> String {
        format!(
            "Configuration(dim={}, anchors={})",
            self.inner.dim().get(),
            self.inner.len()
        )
    }
}

/// Result of `solve` or `sphere_solve`.
#[pyclass(frozen, get_all)]
struct SolverOutcome {
    minimizer: Vec<f64>,
    /// "floating" or "absorbed"
    case: String,
    index: Option<usize>,
    residual_norm: f64,
    objective_value: f64,
    iterations: usize,
    converged: bool,
    warnings: Vec<String>,
}

#[pymethods]
impl SolverOutcome {
    fn __repr__(&self) -> String {
        format!(
            "SolverOutcome(case={:?}, minimizer={:?}, converged={})",
            self.case, self.minimizer, self.converged
        )
    }
}

fn case_fields(case: Case) -> (String, Option<usize>) {
    match case {
        Case::Floating => ("floating".into(), None),
        Case::AbsorbedAt(i) => ("absorbed".into(), Some(i)),
    }
}

fn warning_strings(w: &[core::Warning]) -> Vec<String> {
    w.iter().map(|w| w.as_str().to_string()).collect()
}

/// Certificates evaluated at a point.
#[pyclass(frozen, get_all)]
struct BalanceReport {
    point: Vec<f64>,
    residual: Vec<f64>,
    residual_norm: f64,
    tolerance: f64,
    total_weight: f64,
    /// Per active anchor: (index, cos_sum, sin_sum or s2/s3 components).
    components: Vec<(usize, Vec<f64>)>,
    passed: bool,
}

#[pymethods]
impl BalanceReport {
    fn __repr__(&self) -> String {
        format!(
            "BalanceReport(residual_norm={:e}, passed={})",
            self.residual_norm, self.passed
        )
    }
}

#[pyfunction]
#[pyo3(signature = (config, tolerance=1e-9, max_iterations=10_000))]
fn solve(config: &Configuration, tolerance: f64, max_iterations: usize) -> PyResult<SolverOutcome> {
    let out = core::solve(&config.inner, &options(tolerance, max_iterations)?).map_err(err)?;
    let (case, index) = case_fields(out.case);
    Ok(SolverOutcome {
        minimizer: out.minimizer.to_vec(),
        case,
        index,
        residual_norm: out.residual_norm,
        objective_value: out.objective_value,
        iterations: out.iterations,
        converged: out.converged,
        warnings: warning_strings(&out.warnings),
    })
}

#[pyfunction]
#[pyo3(signature = (config, x, tolerance=core::DEFAULT_VERIFY_TOLERANCE))]
fn verify(config: &Configuration, x: Vec<f64>, tolerance: f64) -> PyResult<BalanceReport> {
    let r = core::verify(&config.inner, &point(x)?, tolerance).map_err(err)?;
    Ok(BalanceReport {
        point: r.point.to_vec(),
        residual: r.residual.to_vec(),
        residual_norm: r.residual_norm,
        tolerance: r.tolerance,
        total_weight: r.total_weight,
        components: r
            .per_direction
            .iter()
            .map(|d| {
                let c = match (d.sin_sum, d.triple) {
                    (Some(s), _) => vec![d.cos_sum, s],
                    (None, Some(t)) => t.to_vec(),
                    (None, None) => vec![d.cos_sum],
                };
                (d.index, c)
            })
            .collect(),
        passed: r.passed,
    })
}

#[pyfunction]
fn vertex_pull(config: &Configuration, i: usize) -> PyResult<f64> {
    core::vertex_pull(&config.inner, i).map_err(err)
}

/// `(index, vertex_pull, weight, verdict)` for every positive-weight anchor,
/// with verdict "absorbed" or "floating possible".
#[pyfunction]
fn classify(config: &Configuration) -> PyResult<Vec<(usize, f64, f64, String)>> {
    let opts = SolverOptions::default();
    config
        .inner
        .active_indices()
        .map(|i| {
            let pull = core::vertex_pull(&config.inner, i).map_err(err)?;
            let verdict = match core::classify_vertex(&config.inner, i, &opts).map_err(err)? {
                VertexVerdict::Absorbed => "absorbed",
                VertexVerdict::Excluded => "floating possible",
            };
            Ok((
                i,
                pull,
                config.inner.weight(i).map_err(err)?,
                verdict.into(),
            ))
        })
        .collect()
}

/// Returns `(argmin, min_value, resolution)`.
#[pyfunction]
#[pyo3(signature = (config, levels=6, per_level=16))]
fn grid_refine_minimize(
    config: &Configuration,
    levels: usize,
    per_level: usize,
) -> PyResult<(Vec<f64>, f64, f64)> {
    let r = core::grid_refine_minimize(&config.inner, levels, per_level).map_err(err)?;
    Ok((r.argmin.to_vec(), r.min_value, r.resolution))
}

#[pyfunction]
#[pyo3(signature = (seed, m, dim, weight_low=0.5, weight_high=2.0))]
fn random_configuration(
    seed: u64,
    m: usize,
    dim: usize,
    weight_low: f64,
    weight_high: f64,
) -> PyResult<Configuration> {
    let dim = Dim::from_usize(dim).map_err(err)?;
    let inner = core::random_configuration(seed, m, dim, weight_low, weight_high).map_err(err)?;
    Ok(Configuration { inner })
}

/// Weighted anchors on the unit sphere; vectors are normalized on input.
#[pyclass(frozen)]
struct SphereConfiguration {
    inner: core::SphereConfiguration,
}

#[pymethods]
impl SphereConfiguration {
    #[new]
    fn new(points: Vec<[f64; 3]>, weights: Vec<f64>) -> PyResult<Self> {
        if points.len() != weights.len() {
            return Err(PyValueError::new_err(format!(
                "{} points but {} weights",
                points.len(),
                weights.len()
            )));
        }
        let pts = points
            .into_iter()
            .zip(weights)
            .map(|(p, w)| Ok((sphere_point(p)?, w)))
            .collect::<PyResult<Vec<_>>>()?;
        let inner = core::SphereConfiguration::new(pts).map_err(err)?;
        Ok(SphereConfiguration { inner })
    }

    #[staticmethod]
    fn from_lat_lon(points: Vec<(f64, f64)>, weights: Vec<f64>) -> PyResult<Self> {
        let vectors = points
            .into_iter()
            .map(|(lat, lon)| {
                Ok(*core::SpherePoint::from_lat_lon_deg(lat, lon)
                    .map_err(err)?
                    .coords())
            })
            .collect::<PyResult<Vec<_>>>()?;
        Self::new(vectors, weights)
    }

    #[getter]
    fn points(&self) -> Vec<[f64; 3]> {
        self.inner
            .points()
            .iter()
            .map(|(p, _)| *p.coords())
            .collect()
    }

    #[getter]
    fn in_hemisphere(&self) -> bool {
        self.inner.in_hemisphere()
    }

    fn objective(&self, x: [f64; 3]) -> PyResult<f64> {
        Ok(core::geodesic_objective(&self.inner, &sphere_point(x)?))
    }

    fn balancing_residual(&self, x: [f64; 3]) -> PyResult<[f64; 3]> {
        let r = core::geodesic_balancing_residual(&self.inner, &sphere_point(x)?).map_err(err)?;
        Ok(*r.vec())
    }

    fn __len__(&self) -> usize {
        self.inner.len()
    }
}

#[pyfunction]
#[pyo3(signature = (config, tolerance=1e-9, max_iterations=10_000))]
fn sphere_solve(
    config: &SphereConfiguration,
    tolerance: f64,
    max_iterations: usize,
) -> PyResult<SolverOutcome> {
    let out =
        core::solve_on_sphere(&config.inner, &options(tolerance, max_iterations)?).map_err(err)?;
    let (case, index) = case_fields(out.case);
    Ok(SolverOutcome {
        minimizer: out.minimizer.coords().to_vec(),
        case,
        index,
        residual_norm: out.residual_norm,
        objective_value: out.objective_value,
        iterations: out.iterations,
        converged: out.converged,
        warnings: warning_strings(&out.warnings),
    })
}

#[pyfunction]
fn exp_map(base: [f64; 3], v: [f64; 3]) -> PyResult<[f64; 3]> {
    let base = sphere_point(base)?;
    let t = core::TangentVector::new(base, v).map_err(err)?;
    Ok(*core::exp_map(&base, &t).map_err(err)?.coords())
}

#[pyfunction]
fn log_map(base: [f64; 3], target: [f64; 3]) -> PyResult<[f64; 3]> {
    let v = core::log_map(&sphere_point(base)?, &sphere_point(target)?).map_err(err)?;
    Ok(*v.vec())
}

/// Returns `(argmin, min_value, resolution_radians)`.
#[pyfunction]
#[pyo3(signature = (config, resolution_degrees=0.5))]
fn spherical_grid_minimize(
    config: &SphereConfiguration,
    resolution_degrees: f64,
) -> PyResult<([f64; 3], f64, f64)> {
    let r = core::spherical_grid_minimize(&config.inner, resolution_degrees).map_err(err)?;
    Ok((*r.argmin.coords(), r.min_value, r.resolution))
}

#[pymodule]
fn torricelli(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<Configuration>()?;
    m.add_class::<SolverOutcome>()?;
    m.add_class::<BalanceReport>()?;
    m.add_class::<SphereConfiguration>()?;
    m.add_function(wrap_pyfunction!(solve, m)?)?;
    m.add_function(wrap_pyfunction!(verify, m)?)?;
    m.add_function(wrap_pyfunction!(vertex_pull, m)?)?;
    m.add_function(wrap_pyfunction!(classify, m)?)?;
    m.add_function(wrap_pyfunction!(grid_refine_minimize, m)?)?;
    m.add_function(wrap_pyfunction!(random_configuration, m)?)?;
    m.add_function(wrap_pyfunction!(sphere_solve, m)?)?;
    m.add_function(wrap_pyfunction!(exp_map, m)?)?;
    m.add_function(wrap_pyfunction!(log_map, m)?)?;
    m.add_function(wrap_pyfunction!(spherical_grid_minimize, m)?)?;
    Ok(())
}
