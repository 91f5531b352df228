//! V-barycenters, generalized barycenters, anti-barycenters, Fréchet means
//! on model spaces, and adaptive refinement of the candidate set Y.
//!
//! Refinement alternates exact game solves with Fréchet-mean computation:
//! each round appends the barycenter of the current maximizer to Y, so the
//! value history is nonincreasing and the candidate set grows toward the
//! barycenters the equality theorems need.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::measures::DiscreteMeasure;
use crate::minimax::{min_with_argset, solve_lp, PayoffKind, PayoffMatrix, SaddleSolution};
use crate::spaces::{coords, ModelSpace, Point, PointCloud};

/// Gradient norm below which the Fréchet descent is considered converged.
const GRADIENT_TOL: f64 = 1e-9;
/// New candidate points closer than this to an existing column are dropped.
const DUPLICATE_TOL: f64 = 1e-10;

/// Options for Fréchet descent and candidate refinement.
#[derive(Clone, Copy, Debug)]
pub struct RefinementConfig {
    pub max_rounds: usize,
    pub value_tol: f64,
    pub descent_steps: usize,
}

impl Default for RefinementConfig {
    fn default() -> Self {
        RefinementConfig { max_rounds: 20, value_tol: 1e-6, descent_steps: 200 }
    }
}

impl RefinementConfig {
    pub fn validate(&self) -> Result<()> {
        if self.max_rounds == 0 {
            return Err(Error::Scenario("max_rounds must be at least 1".into()));
        }
        if !(self.value_tol > 0.0) {
            return Err(Error::Scenario("value_tol must be positive".into()));
        }
        Ok(())
    }
}

/// Columns within `tol` of the minimum of mu^T V: the discrete V-barycenters
/// of mu.
pub fn v_barycenter_set(v: &PayoffMatrix, mu: &DiscreteMeasure, tol: f64) -> Result<Vec<usize>> {
    let cols = v.column_values(mu)?;
    Ok(min_with_argset(&cols, tol).1)
}

/// Rows within `tol` of the maximum of V nu: the discrete V-anti-barycenters
/// of nu.
pub fn anti_barycenter_set(v: &PayoffMatrix, nu: &DiscreteMeasure, tol: f64) -> Result<Vec<usize>> {
    let rows = v.row_values(nu)?;
    Ok(crate::minimax::max_with_argset(&rows, tol).1)
}

/// The canonical generalized V-barycenter of mu: uniform measure over the
/// argmin columns. Any measure supported inside that set minimizes
/// nu -> mu^T V nu, so the uniform representative is one deterministic
/// choice among the optima.
pub fn generalized_barycenter(v: &PayoffMatrix, mu: &DiscreteMeasure) -> Result<DiscreteMeasure> {
    let set = v_barycenter_set(v, mu, 1e-9)?;
    let mut weights = vec![0.0; v.cols()];
    for j in &set {
        weights[*j] = 1.0;
    }
    DiscreteMeasure::new(v.y_cloud().clone(), weights)
}

/// Result of a Fréchet-mean computation.
#[derive(Clone, Debug)]
pub struct FrechetMean {
    pub point: Point,
    /// Norm of the Riemannian gradient of y -> sum_i mu_i d^2(x_i, y) at the
    /// returned point (0 for the Euclidean closed form).
    pub gradient_norm: f64,
    pub iterations: usize,
    pub objective: f64,
    pub converged: bool,
}

fn weighted_objective(
    space: &ModelSpace,
    cloud: &PointCloud,
    mu: &DiscreteMeasure,
    y: &Point,
) -> Result<f64> {
    let mut acc = 0.0;
    for (p, &w) in cloud.points().iter().zip(mu.weights()) {
        if w == 0.0 {
            continue;
        }
        let d = space.distance(p, y)?;
        acc += w * d * d;
    }
    Ok(acc)
}

/// Weighted Fréchet mean of `mu` on its cloud.
///
/// Euclidean spaces use the exact coordinate mean. Spheres and hyperbolic
/// spaces run Riemannian gradient descent from `init` with a fixed step and
/// halving on non-decrease, stopping when the tangent gradient norm drops
/// below 1e-9 or after `descent_steps` iterations. On spheres the cloud must
/// lie strictly within a ball of radius pi/(2 sqrt k) around `init`.
pub fn frechet_mean(
    cloud: &PointCloud,
    mu: &DiscreteMeasure,
    init: &Point,
    config: &RefinementConfig,
) -> Result<FrechetMean> {
    if mu.len() != cloud.len() {
        return Err(Error::CloudMismatch);
    }
    let space = cloud.space();
    match space {
        ModelSpace::Finite { .. } => Err(Error::FiniteUnsupported),
        ModelSpace::Euclidean { dim } => {
            let mut mean = vec![0.0; *dim];
            for (p, &w) in cloud.points().iter().zip(mu.weights()) {
                for (m, c) in mean.iter_mut().zip(coords(p)) {
                    *m += w * c;
                }
            }
            let point = Point::Coords(mean);
            let objective = weighted_objective(space, cloud, mu, &point)?;
            Ok(FrechetMean { point, gradient_norm: 0.0, iterations: 0, objective, converged: true })
        }
        ModelSpace::Sphere { curvature, .. } | ModelSpace::Hyperbolic { curvature, .. } => {
            let mut y = space.normalize_point(init)?;
            if *curvature > 0.0 {
                let bound = std::f64::consts::FRAC_PI_2 / curvature.sqrt();
                for p in cloud.points() {
                    let d = space.distance(&y, p)?;
                    if d >= bound {
                        return Err(Error::Hypothesis(format!(
                            "cloud point at distance {d} from the initial point exceeds \
                             pi/(2 sqrt k) = {bound}"
                        )));
                    }
                }
            }
            let mut objective = weighted_objective(space, cloud, mu, &y)?;
            let mut gradient_norm = f64::INFINITY;
            let mut converged = false;
            let mut iterations = 0;
            for _ in 0..config.descent_steps {
                // T = sum_i mu_i log_y(x_i); the gradient is -2T
                let mut tangent = vec![0.0; coords(&y).len()];
                for (p, &w) in cloud.points().iter().zip(mu.weights()) {
                    if w == 0.0 {
                        continue;
                    }
                    let l = space.log_map(&y, p)?;
                    for (t, v) in tangent.iter_mut().zip(l.iter()) {
                        *t += w * v;
                    }
                }
                gradient_norm = 2.0 * space.tangent_norm(&tangent);
                if gradient_norm <= GRADIENT_TOL {
                    converged = true;
                    break;
                }
                iterations += 1;
                let mut step = 1.0;
                loop {
                    let scaled: Vec<f64> = tangent.iter().map(|t| t * step).collect();
                    let candidate = space.exp_map(&y, &scaled)?;
                    let cand_obj = weighted_objective(space, cloud, mu, &candidate)?;
                    if cand_obj <= objective {
                        y = candidate;
                        objective = cand_obj;
                        break;
                    }
                    step *= 0.5;
                    if step < 1e-12 {
                        break;
                    }
                }
            }
            Ok(FrechetMean { point: y, gradient_norm, iterations, objective, converged })
        }
    }
}

/// Output of candidate refinement: the grown candidate set, the final game
/// solution on it, and the (nonincreasing) value history.
#[derive(Clone, Debug)]
pub struct Refinement {
    pub y_cloud: Arc<PointCloud>,
    pub solution: SaddleSolution,
    pub history: Vec<f64>,
}

fn build_payoff(x: &Arc<PointCloud>, y: &Arc<PointCloud>, kind: PayoffKind) -> Result<PayoffMatrix> {
    match kind {
        PayoffKind::SquaredDistance => PayoffMatrix::squared_distance(x.clone(), y.clone()),
        PayoffKind::Distance => PayoffMatrix::distance(x.clone(), y.clone()),
        PayoffKind::Custom => Err(Error::InvalidPayoff(
            "refinement needs a distance-derived payoff kind".into(),
        )),
    }
}

/// Grows Y toward the barycenters of optimal measures: solve the game,
/// append the Fréchet mean of the current maximizer (initialized at its best
/// column), re-solve; stop when the value decrease falls below `value_tol`
/// or after `max_rounds`. Finite-kind spaces skip refinement and return the
/// solve on the initial Y.
pub fn refine_candidates(
    x: &Arc<PointCloud>,
    y0: &Arc<PointCloud>,
    kind: PayoffKind,
    config: &RefinementConfig,
) -> Result<Refinement> {
    config.validate()?;
    if !x.same_space(y0) {
        return Err(Error::CloudMismatch);
    }
    let mut y = y0.clone();
    let mut payoff = build_payoff(x, &y, kind)?;
    let mut solution = solve_lp(&payoff)?;
    let mut history = vec![solution.value];
    if x.space().is_finite_kind() {
        return Ok(Refinement { y_cloud: y, solution, history });
    }
    for _ in 0..config.max_rounds {
        let cols = payoff.column_values(&solution.mu)?;
        let best_col = min_with_argset(&cols, 0.0).1[0];
        let init = y.point(best_col).clone();
        let mean = frechet_mean(x, &solution.mu, &init, config)?;
        let mut duplicate = false;
        for p in y.points() {
            if x.space().distance(p, &mean.point)? < DUPLICATE_TOL {
                duplicate = true;
                break;
            }
        }
        if duplicate {
            break;
        }
        let mut grown = (*y).clone();
        grown.push(mean.point)?;
        let next_y = Arc::new(grown);
        let next_payoff = build_payoff(x, &next_y, kind)?;
        let next_solution = solve_lp(&next_payoff)?;
        let decrease = history.last().unwrap() - next_solution.value;
        y = next_y;
        payoff = next_payoff;
        solution = next_solution;
        history.push(solution.value);
        if decrease < config.value_tol {
            break;
        }
    }
    Ok(Refinement { y_cloud: y, solution, history })
}
