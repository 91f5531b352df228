//! Scenario-driven pipelines: parse a scenario description, run
//! solve / circumradius / jung / certificate stages, and emit a single
//! machine-readable result plus plot-ready CSV tables.
//!
//! The scenario schema is strict: unknown fields are rejected so that typos
//! fail loudly instead of silently running defaults.

use std::path::Path;
use std::sync::Arc;

use rand::prelude::*;
use rand_chacha::ChaCha8Rng;
use serde::Deserialize;
use serde_json::{json, Map, Value};

use crate::barycenter::{refine_candidates, RefinementConfig};
use crate::circum::radii_report;
use crate::error::{Error, Result};
use crate::jung::{jung_check, JungReport};
use crate::measures::DiscreteMeasure;
use crate::minimax::{
    balanced_maximizer, certify_saddle, solve_fictitious, solve_lp, v_anti_variance, v_variance,
    PayoffKind, PayoffMatrix, SaddleSolution,
};
use crate::spaces::{coords, sample_grid, ModelSpace, Point, PointCloud, Region};

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    pub space: SpaceSpec,
    pub x: SetSpec,
    #[serde(default)]
    pub y: YSpec,
    #[serde(default)]
    pub payoff: PayoffSpec,
    #[serde(default)]
    pub solver: SolverSpec,
    #[serde(default = "default_outputs")]
    pub outputs: Vec<OutputKind>,
}

fn default_outputs() -> Vec<OutputKind> {
    vec![OutputKind::Solution]
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpaceSpec {
    pub kind: String,
    #[serde(default)]
    pub curvature: Option<f64>,
    #[serde(default)]
    pub dim: Option<usize>,
    #[serde(default)]
    pub distance_table: Option<Vec<Vec<f64>>>,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(untagged, deny_unknown_fields)]
pub enum SetSpec {
    Explicit {
        points: Vec<Vec<f64>>,
        #[serde(default)]
        labels: Option<Vec<String>>,
    },
    Generated {
        generator: GeneratorSpec,
    },
    Indices {
        indices: Vec<usize>,
    },
}

#[derive(Clone, Debug, Deserialize)]
#[serde(tag = "name", rename_all = "snake_case", deny_unknown_fields)]
pub enum GeneratorSpec {
    /// Vertices of the regular unit-diameter simplex in R^n.
    Simplex { n: usize },
    /// Equally spaced points on a circle (1-sphere).
    Circle { count: usize },
    /// Fibonacci points on a spherical cap around the north pole.
    Cap { radius: f64, count: usize },
    /// Seeded uniform points in a euclidean box.
    Random { seed: u64, count: usize, box_min: Vec<f64>, box_max: Vec<f64> },
}

#[derive(Clone, Debug, Deserialize)]
#[serde(tag = "mode", rename_all = "snake_case", deny_unknown_fields)]
pub enum YSpec {
    /// Y given point by point.
    Explicit { points: Vec<Vec<f64>> },
    /// Deterministic grid; the region defaults to one derived from X.
    Grid {
        resolution: usize,
        #[serde(default)]
        region: Option<Region>,
    },
    /// Start from X and append Fréchet means of successive maximizers.
    AutoRefine {
        #[serde(default)]
        max_rounds: Option<usize>,
        #[serde(default)]
        value_tol: Option<f64>,
        #[serde(default)]
        descent_steps: Option<usize>,
    },
}

impl Default for YSpec {
    fn default() -> Self {
        YSpec::AutoRefine { max_rounds: None, value_tol: None, descent_steps: None }
    }
}

#[derive(Clone, Debug, Deserialize, Default)]
#[serde(deny_unknown_fields)]
pub struct PayoffSpec {
    #[serde(default)]
    pub kind: PayoffKindSpec,
    #[serde(default)]
    pub matrix: Option<Vec<Vec<f64>>>,
}

#[derive(Clone, Copy, Debug, Deserialize, Default, PartialEq, Eq)]
#[serde(rename_all = "snake_case")]
pub enum PayoffKindSpec {
    #[default]
    SquaredDistance,
    Distance,
    Custom,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SolverSpec {
    #[serde(default)]
    pub method: SolverMethodSpec,
    /// Target gap for fictitious play; certificate tolerance elsewhere.
    #[serde(default = "default_tol")]
    pub tol: f64,
    #[serde(default = "default_max_iters")]
    pub max_iters: usize,
    /// When set, replace the reported maximizer by the most balanced
    /// optimal measure (largest minimum weight over the optimal face).
    #[serde(default)]
    pub balance: bool,
}

fn default_tol() -> f64 {
    1e-8
}

fn default_max_iters() -> usize {
    100_000
}

impl Default for SolverSpec {
    fn default() -> Self {
        SolverSpec {
            method: SolverMethodSpec::Lp,
            tol: default_tol(),
            max_iters: default_max_iters(),
            balance: false,
        }
    }
}

#[derive(Clone, Copy, Debug, Deserialize, Default, PartialEq, Eq)]
#[serde(rename_all = "snake_case")]
pub enum SolverMethodSpec {
    #[default]
    Lp,
    Fictitious,
}

#[derive(Clone, Copy, Debug, Deserialize, PartialEq, Eq)]
#[serde(rename_all = "snake_case")]
pub enum OutputKind {
    Solution,
    Circumradius,
    Jung,
    Certificate,
}

/// Everything a finished scenario run carries.
pub struct RunArtifacts {
    pub scenario: Scenario,
    pub x_cloud: Arc<PointCloud>,
    pub y_cloud: Arc<PointCloud>,
    pub payoff: PayoffMatrix,
    pub solution: SaddleSolution,
    pub history: Vec<f64>,
    pub refined: bool,
    pub jung: Option<JungReport>,
    pub result: Value,
}

fn build_space(spec: &SpaceSpec) -> Result<ModelSpace> {
    match spec.kind.as_str() {
        "euclidean" => {
            let dim = spec
                .dim
                .ok_or_else(|| Error::Scenario("euclidean space needs a dim".into()))?;
            if let Some(k) = spec.curvature {
                if k != 0.0 {
                    return Err(Error::Scenario("euclidean curvature must be 0".into()));
                }
            }
            ModelSpace::euclidean(dim)
        }
        "sphere" => {
            let dim =
                spec.dim.ok_or_else(|| Error::Scenario("sphere space needs a dim".into()))?;
            let k = spec
                .curvature
                .ok_or_else(|| Error::Scenario("sphere space needs a curvature".into()))?;
            ModelSpace::sphere(k, dim)
        }
        "hyperbolic" => {
            let dim = spec
                .dim
                .ok_or_else(|| Error::Scenario("hyperbolic space needs a dim".into()))?;
            let k = spec
                .curvature
                .ok_or_else(|| Error::Scenario("hyperbolic space needs a curvature".into()))?;
            ModelSpace::hyperbolic(k, dim)
        }
        "finite" => {
            let table = spec
                .distance_table
                .clone()
                .ok_or_else(|| Error::Scenario("finite space needs a distance_table".into()))?;
            ModelSpace::finite(table)
        }
        other => Err(Error::Scenario(format!("unknown space kind '{other}'"))),
    }
}

/// Vertices of the regular simplex with unit side length in R^n.
pub fn simplex_vertices(n: usize) -> Result<PointCloud> {
    if n == 0 {
        return Err(Error::Scenario("simplex dimension must be positive".into()));
    }
    let mut verts: Vec<Vec<f64>> = vec![vec![0.0; n]];
    for k in 1..=n {
        let mut centroid = vec![0.0; n];
        for v in &verts {
            for (c, x) in centroid.iter_mut().zip(v.iter()) {
                *c += x / verts.len() as f64;
            }
        }
        let d2: f64 = verts[0]
            .iter()
            .zip(centroid.iter())
            .map(|(a, b)| (a - b) * (a - b))
            .sum();
        let mut vertex = centroid;
        vertex[k - 1] = (1.0 - d2).max(0.0).sqrt();
        verts.push(vertex);
    }
    PointCloud::new(ModelSpace::euclidean(n)?, verts.into_iter().map(Point::Coords).collect())
}

/// Equally spaced points on the circle of circumference 2 (metric diameter
/// 1), the running example for the sphere gap.
pub fn unit_diameter_circle(count: usize) -> Result<PointCloud> {
    let k = std::f64::consts::PI.powi(2);
    let space = ModelSpace::sphere(k, 1)?;
    sample_grid(&space, &Region::FullSphere, count)
}

fn build_x(space: &ModelSpace, spec: &SetSpec) -> Result<Arc<PointCloud>> {
    let cloud = match spec {
        SetSpec::Explicit { points, labels } => {
            let pts = points.iter().map(|c| Point::Coords(c.clone())).collect();
            let cloud = PointCloud::new(space.clone(), pts)?;
            match labels {
                Some(l) => cloud.with_labels(l.clone())?,
                None => cloud,
            }
        }
        SetSpec::Indices { indices } => {
            let pts = indices.iter().map(|&i| Point::Index(i)).collect();
            PointCloud::new(space.clone(), pts)?
        }
        SetSpec::Generated { generator } => match generator {
            GeneratorSpec::Simplex { n } => {
                let cloud = simplex_vertices(*n)?;
                if cloud.space() != space {
                    return Err(Error::Scenario(
                        "simplex generator needs the matching euclidean space".into(),
                    ));
                }
                cloud
            }
            GeneratorSpec::Circle { count } => {
                if !matches!(space, ModelSpace::Sphere { dim: 1, .. }) {
                    return Err(Error::Scenario(
                        "circle generator needs a sphere space of dim 1".into(),
                    ));
                }
                sample_grid(space, &Region::FullSphere, *count)?
            }
            GeneratorSpec::Cap { radius, count } => match space {
                ModelSpace::Sphere { dim: 2, curvature } => {
                    let r = 1.0 / curvature.sqrt();
                    let center = vec![0.0, 0.0, r];
                    sample_grid(space, &Region::Cap { center, radius: *radius }, *count)?
                }
                _ => {
                    return Err(Error::Scenario(
                        "cap generator needs a sphere space of dim 2".into(),
                    ))
                }
            },
            GeneratorSpec::Random { seed, count, box_min, box_max } => {
                let dim = match space {
                    ModelSpace::Euclidean { dim } => *dim,
                    _ => {
                        return Err(Error::Scenario(
                            "random generator needs a euclidean space".into(),
                        ))
                    }
                };
                if box_min.len() != dim || box_max.len() != dim {
                    return Err(Error::Scenario("random box must match the dimension".into()));
                }
                if *count == 0 {
                    return Err(Error::Scenario("random count must be positive".into()));
                }
                let mut rng = ChaCha8Rng::seed_from_u64(*seed);
                let pts = (0..*count)
                    .map(|_| {
                        Point::Coords(
                            box_min
                                .iter()
                                .zip(box_max.iter())
                                .map(|(&a, &b)| rng.random_range(a..=b))
                                .collect(),
                        )
                    })
                    .collect();
                PointCloud::new(space.clone(), pts)?
            }
        },
    };
    Ok(Arc::new(cloud))
}

/// Default grid region derived from X: the bounding box in euclidean
/// spaces, the full sphere, or a metric ball of radius diameter(X) around
/// the first point in hyperbolic spaces.
fn default_region(space: &ModelSpace, x: &PointCloud) -> Result<Region> {
    match space {
        ModelSpace::Euclidean { dim } => {
            let mut min = vec![f64::INFINITY; *dim];
            let mut max = vec![f64::NEG_INFINITY; *dim];
            for p in x.points() {
                for (i, &c) in coords(p).iter().enumerate() {
                    min[i] = min[i].min(c);
                    max[i] = max[i].max(c);
                }
            }
            Ok(Region::Box { min, max })
        }
        ModelSpace::Sphere { .. } => Ok(Region::FullSphere),
        ModelSpace::Hyperbolic { .. } => {
            let radius = x.diameter()?.max(1e-6);
            Ok(Region::Ball { center: coords(x.point(0)).to_vec(), radius })
        }
        ModelSpace::Finite { .. } => Err(Error::FiniteUnsupported),
    }
}

fn refinement_config(y: &YSpec) -> RefinementConfig {
    let mut cfg = RefinementConfig::default();
    if let YSpec::AutoRefine { max_rounds, value_tol, descent_steps } = y {
        if let Some(r) = max_rounds {
            cfg.max_rounds = *r;
        }
        if let Some(t) = value_tol {
            cfg.value_tol = *t;
        }
        if let Some(d) = descent_steps {
            cfg.descent_steps = *d;
        }
    }
    cfg
}

fn payoff_kind(spec: &PayoffSpec) -> Result<PayoffKind> {
    match spec.kind {
        PayoffKindSpec::SquaredDistance => Ok(PayoffKind::SquaredDistance),
        PayoffKindSpec::Distance => Ok(PayoffKind::Distance),
        PayoffKindSpec::Custom => {
            if spec.matrix.is_none() {
                return Err(Error::Scenario("custom payoff needs a matrix".into()));
            }
            Ok(PayoffKind::Custom)
        }
    }
}

fn build_payoff(
    x: &Arc<PointCloud>,
    y: &Arc<PointCloud>,
    spec: &PayoffSpec,
) -> Result<PayoffMatrix> {
    match payoff_kind(spec)? {
        PayoffKind::SquaredDistance => PayoffMatrix::squared_distance(x.clone(), y.clone()),
        PayoffKind::Distance => PayoffMatrix::distance(x.clone(), y.clone()),
        PayoffKind::Custom => {
            PayoffMatrix::custom(x.clone(), y.clone(), spec.matrix.clone().unwrap())
        }
    }
}

/// Parses a scenario from JSON text.
pub fn parse_scenario(text: &str) -> Result<Scenario> {
    Ok(serde_json::from_str(text)?)
}

/// Reads and parses a scenario file.
pub fn load_scenario(path: &Path) -> Result<Scenario> {
    parse_scenario(&std::fs::read_to_string(path)?)
}

/// Runs the full pipeline for a scenario: materialize X and Y, solve the
/// game, then produce the requested report sections. Deterministic for fixed
/// input, including generator seeds.
pub fn run_scenario(scenario: Scenario) -> Result<RunArtifacts> {
    let space = build_space(&scenario.space)?;
    let x_cloud = build_x(&space, &scenario.x)?;
    let cfg = refinement_config(&scenario.y);
    cfg.validate()?;

    let mut history = Vec::new();
    let mut refined = false;

    let (y_cloud, payoff, mut solution) = match &scenario.y {
        YSpec::Explicit { points } => {
            let pts = points.iter().map(|c| Point::Coords(c.clone())).collect();
            let y = Arc::new(PointCloud::new(space.clone(), pts)?);
            let payoff = build_payoff(&x_cloud, &y, &scenario.payoff)?;
            let sol = solve_with(&payoff, &scenario.solver)?;
            (y, payoff, sol)
        }
        YSpec::Grid { resolution, region } => {
            let region = match region {
                Some(r) => r.clone(),
                None => default_region(&space, &x_cloud)?,
            };
            let y = Arc::new(sample_grid(&space, &region, *resolution)?);
            let payoff = build_payoff(&x_cloud, &y, &scenario.payoff)?;
            let sol = solve_with(&payoff, &scenario.solver)?;
            (y, payoff, sol)
        }
        YSpec::AutoRefine { .. } => {
            let kind = payoff_kind(&scenario.payoff)?;
            if kind == PayoffKind::Custom {
                return Err(Error::Scenario(
                    "auto_refine needs a distance-derived payoff".into(),
                ));
            }
            refined = !space.is_finite_kind();
            let r = refine_candidates(&x_cloud, &x_cloud, kind, &cfg)?;
            history = r.history.clone();
            let payoff = build_payoff(&x_cloud, &r.y_cloud, &scenario.payoff)?;
            let solution = match scenario.solver.method {
                SolverMethodSpec::Lp => r.solution,
                SolverMethodSpec::Fictitious => solve_with(&payoff, &scenario.solver)?,
            };
            (r.y_cloud, payoff, solution)
        }
    };

    if scenario.solver.balance {
        let balanced = balanced_maximizer(&payoff, solution.value)?;
        let (var, _) = v_variance(&payoff, &balanced)?;
        solution.primal_residual = solution.value - var;
        solution.mu = balanced;
        solution.gap = solution.primal_residual + solution.dual_residual;
    }

    let mut jung = None;
    let mut result = Map::new();
    result.insert("space".into(), space_summary(&space, &x_cloud, &y_cloud));
    for output in &scenario.outputs {
        match output {
            OutputKind::Solution => {
                result.insert("solution".into(), solution_json(&solution, &history));
            }
            OutputKind::Circumradius => {
                let report = radii_report(&payoff, &solution, refined, 1e-6)?;
                result.insert("circumradius".into(), circumradius_json(&report));
            }
            OutputKind::Jung => {
                let report = jung_check(&x_cloud, &cfg)?;
                result.insert("jung".into(), jung_json(&report));
                jung = Some(report);
            }
            OutputKind::Certificate => {
                let cert = certify_saddle(&payoff, &solution.mu, &solution.nu, 1e-7)?;
                result.insert("certificate".into(), certificate_json(&cert));
            }
        }
    }

    Ok(RunArtifacts {
        scenario,
        x_cloud,
        y_cloud,
        payoff,
        solution,
        history,
        refined,
        jung,
        result: Value::Object(result),
    })
}

fn solve_with(payoff: &PayoffMatrix, solver: &SolverSpec) -> Result<SaddleSolution> {
    match solver.method {
        SolverMethodSpec::Lp => solve_lp(payoff),
        SolverMethodSpec::Fictitious => {
            solve_fictitious(payoff, solver.max_iters, solver.tol.max(0.0))
        }
    }
}

fn space_summary(space: &ModelSpace, x: &PointCloud, y: &PointCloud) -> Value {
    json!({
        "kind": space.kind_name(),
        "curvature": space.curvature(),
        "dim": space.dim(),
        "x_size": x.len(),
        "y_size": y.len(),
    })
}

fn solution_json(sol: &SaddleSolution, history: &[f64]) -> Value {
    let mut obj = Map::new();
    obj.insert("value".into(), json!(sol.value));
    obj.insert("mu".into(), json!(sol.mu.weights()));
    obj.insert("nu".into(), json!(sol.nu.weights()));
    obj.insert("primal_residual".into(), json!(sol.primal_residual));
    obj.insert("dual_residual".into(), json!(sol.dual_residual));
    obj.insert("gap".into(), json!(sol.gap));
    obj.insert("method".into(), json!(sol.method.name()));
    obj.insert("iterations".into(), json!(sol.iterations));
    if !history.is_empty() {
        obj.insert("history".into(), json!(history));
    }
    Value::Object(obj)
}

fn circumradius_json(report: &crate::circum::RadiiReport) -> Value {
    let mut obj = Map::new();
    obj.insert("wasserstein_sq".into(), json!(report.wasserstein_sq));
    obj.insert("metric_sq".into(), json!(report.metric_sq));
    if let Some(w) = report.welzl_sq {
        obj.insert("welzl_sq".into(), json!(w));
    }
    obj.insert("gap".into(), json!(report.gap));
    obj.insert("unique_barycenter_regime".into(), json!(report.unique_barycenter_regime));
    Value::Object(obj)
}

fn jung_json(report: &JungReport) -> Value {
    json!({
        "D": report.diameter,
        "R": report.radius,
        "k": report.curvature,
        "m": report.support_size,
        "S_inf": report.bound_infinity,
        "S_support": report.bound_support,
        "pass_inf": report.pass_infinity,
        "pass_support": report.pass_support,
        "angles": report.angles.as_ref().map(|a| json!({
            "cosines": a.cosines,
            "weighted_sum": a.weighted_sum,
            "C": a.min_cosine,
        })),
    })
}

fn certificate_json(cert: &crate::minimax::SaddleCertificate) -> Value {
    json!({
        "value": cert.value,
        "pass": cert.pass(),
        "barycenter_ok": cert.barycenter_ok,
        "anti_barycenter_ok": cert.anti_barycenter_ok,
        "worst_column_violation": cert.worst_column_violation,
        "worst_row_violation": cert.worst_row_violation,
        "tol": cert.tol,
    })
}

/// Certifies a user-provided measure pair against a scenario's payoff. Y is
/// materialized exactly the way `run_scenario` would (re-running the
/// refinement when Y is auto-refined).
pub fn certify_scenario(
    scenario: Scenario,
    mu_weights: Vec<f64>,
    nu_weights: Vec<f64>,
    tol: f64,
) -> Result<Value> {
    let artifacts = run_scenario(scenario)?;
    let mu = DiscreteMeasure::new(artifacts.x_cloud.clone(), mu_weights)?;
    let nu = DiscreteMeasure::new(artifacts.y_cloud.clone(), nu_weights)?;
    let cert = certify_saddle(&artifacts.payoff, &mu, &nu, tol)?;
    let (var, _) = v_variance(&artifacts.payoff, &mu)?;
    let (avar, _) = v_anti_variance(&artifacts.payoff, &nu)?;
    Ok(json!({
        "certificate": certificate_json(&cert),
        "v_variance": var,
        "v_anti_variance": avar,
        "game_value": artifacts.solution.value,
    }))
}

// ---------------------------------------------------------------------------
// Built-in demos
// ---------------------------------------------------------------------------

pub const DEMO_NAMES: &[&str] = &[
    "popoviciu",
    "simplex(n)",
    "circle(N)",
    "sphere_gap",
    "jung_euclidean",
    "jung_spherical",
];

/// Builds the scenario behind a demo name such as `popoviciu`, `simplex(3)`
/// or `circle(200)`.
pub fn demo_scenario(name: &str) -> Result<Scenario> {
    let (head, arg) = split_demo_name(name)?;
    let value = match (head, arg) {
        ("popoviciu", None) => json!({
            // X = {0, 1} on the line; the candidate set brackets the midpoint
            // tightly so the optimal face collapses onto mu = (1/2, 1/2)
            "space": {"kind": "euclidean", "dim": 1},
            "x": {"points": [[0.0], [1.0]]},
            "y": {"mode": "explicit",
                  "points": [[0.0], [0.4999995], [0.5], [0.5000005], [1.0]]},
            "solver": {"balance": true},
            "outputs": ["solution", "circumradius", "certificate"],
        }),
        ("simplex", Some(n)) => {
            if !(1..=6).contains(&n) {
                return Err(Error::Scenario("simplex demo supports n in 1..=6".into()));
            }
            json!({
                "space": {"kind": "euclidean", "dim": n},
                "x": {"generator": {"name": "simplex", "n": n}},
                "y": {"mode": "auto_refine"},
                "solver": {"balance": true},
                "outputs": ["solution", "circumradius", "certificate"],
            })
        }
        ("circle", Some(n)) => {
            if n < 2 {
                return Err(Error::Scenario("circle demo needs at least 2 points".into()));
            }
            json!({
                "space": {"kind": "sphere", "curvature": std::f64::consts::PI * std::f64::consts::PI, "dim": 1},
                "x": {"generator": {"name": "circle", "count": n}},
                "y": {"mode": "grid", "resolution": n},
                "outputs": ["solution", "circumradius", "certificate"],
            })
        }
        ("sphere_gap", None) => json!({
            // the round sphere of metric diameter 1 (here S^1), where the
            // Wasserstein circumradius is strictly below the metric one
            "space": {"kind": "sphere", "curvature": std::f64::consts::PI * std::f64::consts::PI, "dim": 1},
            "x": {"generator": {"name": "circle", "count": 200}},
            "y": {"mode": "grid", "resolution": 200},
            "outputs": ["solution", "circumradius"],
        }),
        ("jung_euclidean", None) => {
            let h = 3.0_f64.sqrt() / 2.0;
            json!({
                "space": {"kind": "euclidean", "dim": 2},
                "x": {"points": [[0.0, 0.0], [1.0, 0.0], [0.5, h]]},
                "y": {"mode": "auto_refine"},
                "solver": {"balance": true},
                "outputs": ["solution", "jung"],
            })
        }
        ("jung_spherical", None) => {
            let theta = 0.5_f64;
            let pts: Vec<Vec<f64>> = (0..3)
                .map(|i| {
                    let phi = 2.0 * std::f64::consts::PI * i as f64 / 3.0;
                    vec![theta.sin() * phi.cos(), theta.sin() * phi.sin(), theta.cos()]
                })
                .collect();
            json!({
                "space": {"kind": "sphere", "curvature": 1.0, "dim": 2},
                "x": {"points": pts},
                "y": {"mode": "auto_refine"},
                "solver": {"balance": true},
                "outputs": ["solution", "jung"],
            })
        }
        _ => {
            return Err(Error::Scenario(format!(
                "unknown demo '{name}'; available: {}",
                DEMO_NAMES.join(", ")
            )))
        }
    };
    Ok(serde_json::from_value(value)?)
}

fn split_demo_name(name: &str) -> Result<(&str, Option<usize>)> {
    match name.find('(') {
        None => Ok((name, None)),
        Some(open) => {
            let close = name
                .rfind(')')
                .ok_or_else(|| Error::Scenario(format!("malformed demo name '{name}'")))?;
            let arg = name[open + 1..close]
                .trim()
                .parse::<usize>()
                .map_err(|_| Error::Scenario(format!("malformed demo argument in '{name}'")))?;
            Ok((&name[..open], Some(arg)))
        }
    }
}

/// Runs a built-in demo and returns its artifacts.
pub fn run_demo(name: &str) -> Result<RunArtifacts> {
    run_scenario(demo_scenario(name)?)
}

/// One-line human summary for a demo run.
pub fn summarize(artifacts: &RunArtifacts) -> String {
    let mut lines = vec![format!(
        "game value {:.12} (gap {:.3e}, method {})",
        artifacts.solution.value,
        artifacts.solution.gap,
        artifacts.solution.method.name()
    )];
    if let Some(c) = artifacts.result.get("circumradius") {
        lines.push(format!(
            "circumradius^2: wasserstein {} vs metric {} (unique barycenter regime: {})",
            c["wasserstein_sq"], c["metric_sq"], c["unique_barycenter_regime"]
        ));
    }
    if let Some(j) = artifacts.result.get("jung") {
        lines.push(format!(
            "jung: D {} R {} m {} S_inf {} pass_inf {} pass_support {}",
            j["D"], j["R"], j["m"], j["S_inf"], j["pass_inf"], j["pass_support"]
        ));
    }
    lines.join("\n")
}

// ---------------------------------------------------------------------------
// CSV export
// ---------------------------------------------------------------------------

/// Formats a float with 17 significant digits, enough to round-trip f64.
fn fmt_f64(v: f64) -> String {
    format!("{v:.16e}")
}

/// Writes `measures.csv`, `certificate.csv` and `history.csv` under `dir`.
///
/// `measures.csv` lists the X rows (with mu weights) and the Y rows (with nu
/// weights); when X and Y are the same cloud the rows are merged. Files use
/// UTF-8 with LF line endings and full float precision.
pub fn export_csv(artifacts: &RunArtifacts, dir: &Path) -> Result<()> {
    std::fs::create_dir_all(dir)?;
    let x = &artifacts.x_cloud;
    let y = &artifacts.y_cloud;
    let sol = &artifacts.solution;

    let dim = x
        .space()
        .ambient_dim()
        .unwrap_or(1);
    let mut measures = String::new();
    measures.push_str("cloud,index");
    for i in 0..dim {
        measures.push_str(&format!(",x{i}"));
    }
    measures.push_str(",mu_weight,nu_weight\n");
    let merged = Arc::ptr_eq(x, y) || **x == **y;
    let point_cells = |p: &Point| -> String {
        match p {
            Point::Coords(c) => c.iter().map(|v| fmt_f64(*v)).collect::<Vec<_>>().join(","),
            Point::Index(i) => {
                let mut cells = vec![i.to_string()];
                cells.resize(dim, String::new());
                cells.join(",")
            }
        }
    };
    if merged {
        for (i, p) in x.points().iter().enumerate() {
            measures.push_str(&format!(
                "xy,{i},{},{},{}\n",
                point_cells(p),
                fmt_f64(sol.mu.weights()[i]),
                fmt_f64(sol.nu.weights()[i]),
            ));
        }
    } else {
        for (i, p) in x.points().iter().enumerate() {
            measures.push_str(&format!(
                "x,{i},{},{},\n",
                point_cells(p),
                fmt_f64(sol.mu.weights()[i]),
            ));
        }
        for (j, p) in y.points().iter().enumerate() {
            measures.push_str(&format!(
                "y,{j},{},,{}\n",
                point_cells(p),
                fmt_f64(sol.nu.weights()[j]),
            ));
        }
    }
    std::fs::write(dir.join("measures.csv"), measures)?;

    // slacks of the saddle inequalities per row and column
    let cols = artifacts.payoff.column_values(&sol.mu)?;
    let rows = artifacts.payoff.row_values(&sol.nu)?;
    let col_min = cols.iter().cloned().fold(f64::INFINITY, f64::min);
    let row_max = rows.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let mut certificate = String::from("side,index,slack\n");
    for (i, r) in rows.iter().enumerate() {
        certificate.push_str(&format!("row,{i},{}\n", fmt_f64(row_max - r)));
    }
    for (j, c) in cols.iter().enumerate() {
        certificate.push_str(&format!("col,{j},{}\n", fmt_f64(c - col_min)));
    }
    std::fs::write(dir.join("certificate.csv"), certificate)?;

    let mut history = String::from("round,value\n");
    if artifacts.history.is_empty() {
        history.push_str(&format!("0,{}\n", fmt_f64(sol.value)));
    } else {
        for (round, v) in artifacts.history.iter().enumerate() {
            history.push_str(&format!("{round},{}\n", fmt_f64(*v)));
        }
    }
    std::fs::write(dir.join("history.csv"), history)?;
    Ok(())
}
