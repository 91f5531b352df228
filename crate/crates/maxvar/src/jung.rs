//! Jung-type diameter bounds on spaces with curvature bounded above: the
//! bound S(R, n, k), its identity with the model-space law of cosines, and
//! end-to-end certification comparing the diameter of a cloud against the
//! bound derived from its computed circumradius, with first-variation angle
//! certificates at the circumcenter.

use std::sync::Arc;

use crate::barycenter::{frechet_mean, refine_candidates, v_barycenter_set, RefinementConfig};
use crate::error::{Error, Result};
use crate::measures::{DiscreteMeasure, SUPPORT_EPS};
use crate::minimax::{balanced_maximizer, PayoffKind, PayoffMatrix};
use crate::spaces::{model_side, Point, PointCloud};

/// Slack for the D >= S(R, n, k) comparisons.
const PASS_TOL: f64 = 1e-9;

/// The Jung bound S(R, n, k): the diameter a set of circumradius R must have
/// when some variance maximizer is supported on n + 1 points. `n = None`
/// denotes the limit n -> infinity, whose factor is 1/sqrt(2).
pub fn jung_bound(radius: f64, n: Option<u64>, k: f64) -> Result<f64> {
    if !radius.is_finite() || radius < 0.0 {
        return Err(Error::Hypothesis("radius must be finite and nonnegative".into()));
    }
    let factor = match n {
        None => std::f64::consts::FRAC_1_SQRT_2,
        Some(0) => return Err(Error::Hypothesis("n must be a positive integer".into())),
        Some(n) => ((n as f64 + 1.0) / (2.0 * n as f64)).sqrt(),
    };
    if k == 0.0 {
        return Ok(2.0 * radius * factor);
    }
    let s = k.abs().sqrt();
    if k > 0.0 {
        let limit = std::f64::consts::FRAC_PI_2 / s;
        if radius > limit + 1e-12 {
            return Err(Error::Hypothesis(format!(
                "radius {radius} exceeds pi/(2 sqrt k) = {limit}"
            )));
        }
        // asin(x) written as atan2(x, sqrt(1 - x^2)) with the complement
        // assembled cancellation-free from 1 - f^2 >= 0
        let x = factor * (s * radius).sin();
        let complement_sq = (1.0 - factor * factor)
            + factor * factor * (s * radius).cos() * (s * radius).cos();
        Ok(2.0 * x.atan2(complement_sq.max(0.0).sqrt()) / s)
    } else {
        Ok(2.0 * (factor * (s * radius).sinh()).asinh() / s)
    }
}

/// Both sides of the identity S(R, n, k) = d_k(R, R, arccos(-1/n)), with
/// pi/2 standing in for the angle at n = infinity.
#[derive(Clone, Copy, Debug)]
pub struct IdentityCheck {
    pub lhs: f64,
    pub rhs: f64,
    pub relative_error: f64,
}

pub fn jung_identity_check(radius: f64, n: Option<u64>, k: f64) -> Result<IdentityCheck> {
    let alpha = match n {
        None => std::f64::consts::FRAC_PI_2,
        Some(0) => return Err(Error::Hypothesis("n must be a positive integer".into())),
        Some(n) => (-1.0 / n as f64).acos(),
    };
    let lhs = model_side(k, radius, radius, alpha)?;
    let rhs = jung_bound(radius, n, k)?;
    let relative_error = (lhs - rhs).abs() / rhs.abs().max(1e-30);
    Ok(IdentityCheck { lhs, rhs, relative_error })
}

/// Cosines of the angles at a circumcenter between the geodesic toward the
/// apex support point and the geodesics toward every support point, plus the
/// first-variation aggregate.
#[derive(Clone, Debug)]
pub struct AngleCertificate {
    pub circumcenter: Point,
    pub cosines: Vec<f64>,
    /// sum_i lambda_i cos(alpha_i); nonpositive (up to tolerance) when the
    /// circumcenter is a barycenter of the weights.
    pub weighted_sum: f64,
    /// C = min_i cos(alpha_i).
    pub min_cosine: f64,
    /// floor(-1/C) when C < 0.
    pub n_bound: Option<u64>,
}

/// Evaluates the angle certificate at `center` for the weighted support
/// points, with the apex geodesic pointing toward `apex_index`.
pub fn angle_certificate(
    center: &Point,
    support: &PointCloud,
    lambda: &DiscreteMeasure,
    apex_index: usize,
) -> Result<AngleCertificate> {
    let space = support.space();
    if space.is_finite_kind() {
        return Err(Error::FiniteUnsupported);
    }
    if lambda.len() != support.len() {
        return Err(Error::CloudMismatch);
    }
    if apex_index >= support.len() {
        return Err(Error::Hypothesis(format!("apex index {apex_index} out of range")));
    }
    let k = space.curvature();
    for p in support.points() {
        let d = space.distance(center, p)?;
        if d < 1e-12 {
            return Err(Error::CoincidentPoints);
        }
        if k > 0.0 {
            let bound = std::f64::consts::FRAC_PI_2 / k.sqrt();
            if d >= bound {
                return Err(Error::Hypothesis(format!(
                    "support point at distance {d} from the center violates the \
                     pi/(2 sqrt k) hypothesis"
                )));
            }
        }
    }
    let apex_log = space.log_map(center, support.point(apex_index))?;
    let apex_norm = space.tangent_norm(&apex_log);
    let mut cosines = Vec::with_capacity(support.len());
    for (i, p) in support.points().iter().enumerate() {
        if i == apex_index {
            cosines.push(1.0);
            continue;
        }
        let l = space.log_map(center, p)?;
        let n = space.tangent_norm(&l);
        cosines.push(
            (space.tangent_inner(&apex_log, &l) / (apex_norm * n)).clamp(-1.0, 1.0),
        );
    }
    let weighted_sum = cosines.iter().zip(lambda.weights()).map(|(c, w)| c * w).sum();
    let min_cosine = cosines.iter().cloned().fold(f64::INFINITY, f64::min);
    // floor(-1/C), guarded so that C sitting a rounding error past an exact
    // -1/n still reports n
    let n_bound =
        if min_cosine < 0.0 { Some((-1.0 / min_cosine + 1e-9).floor() as u64) } else { None };
    Ok(AngleCertificate {
        circumcenter: center.clone(),
        cosines,
        weighted_sum,
        min_cosine,
        n_bound,
    })
}

/// Full Jung certification of a point cloud.
#[derive(Clone, Debug)]
pub struct JungReport {
    pub diameter: f64,
    pub radius: f64,
    pub curvature: f64,
    /// Support size m of the computed maximizer.
    pub support_size: usize,
    /// S(R, infinity, k).
    pub bound_infinity: f64,
    /// S(R, m - 1, k) when m >= 2.
    pub bound_support: Option<f64>,
    pub pass_infinity: bool,
    /// None when the unique-barycenter regime could not be certified, in
    /// which case the support bound's hypothesis is unverified rather than
    /// violated.
    pub pass_support: Option<bool>,
    pub angles: Option<AngleCertificate>,
    /// Game values along the refinement rounds.
    pub history: Vec<f64>,
}

/// Pipeline: refine Y from X, solve the squared-distance game, take R^2 as
/// the game value, select the most balanced maximizer, locate its Fréchet
/// mean, and evaluate the Jung bounds together with the angle certificate
/// whose apex is the largest-weight support point.
pub fn jung_check(x: &Arc<PointCloud>, config: &RefinementConfig) -> Result<JungReport> {
    let space = x.space().clone();
    if space.is_finite_kind() {
        return Err(Error::FiniteUnsupported);
    }
    let k = space.curvature();
    if k > 0.0 {
        // witness check for the small-ball hypothesis, with the candidate
        // centers drawn from X itself
        let bound = std::f64::consts::FRAC_PI_2 / k.sqrt();
        let mut best = f64::INFINITY;
        for c in x.points() {
            let mut worst = 0.0_f64;
            for p in x.points() {
                worst = worst.max(space.distance(c, p)?);
            }
            best = best.min(worst);
        }
        if best >= bound {
            return Err(Error::Hypothesis(format!(
                "cloud is not contained in a ball of radius below pi/(2 sqrt k) = {bound} \
                 (best witness radius {best})"
            )));
        }
    }
    let diameter = x.diameter()?;
    let refinement = refine_candidates(x, x, PayoffKind::SquaredDistance, config)?;
    let value = refinement.solution.value.max(0.0);
    let radius = value.sqrt();
    let payoff = PayoffMatrix::squared_distance(x.clone(), refinement.y_cloud.clone())?;
    let maximizer = balanced_maximizer(&payoff, refinement.solution.value)?;
    let support = maximizer.support(SUPPORT_EPS);
    let m = support.len();
    let barycenter_columns = v_barycenter_set(&payoff, &maximizer, 1e-9)?;
    let unique_regime = barycenter_columns.len() == 1;

    let bound_infinity = jung_bound(radius, None, k)?;
    let pass_infinity = diameter >= bound_infinity - PASS_TOL;
    let bound_support =
        if m >= 2 { Some(jung_bound(radius, Some(m as u64 - 1), k)?) } else { None };
    let pass_support = match bound_support {
        Some(b) if unique_regime => Some(diameter >= b - PASS_TOL),
        _ => None,
    };

    let angles = if m >= 2 && radius > 1e-9 {
        let init = refinement.y_cloud.point(barycenter_columns[0]).clone();
        let mean = frechet_mean(x, &maximizer, &init, config)?;
        let support_points: Vec<Point> =
            support.iter().map(|&i| x.point(i).clone()).collect();
        let support_cloud = Arc::new(PointCloud::new(space.clone(), support_points)?);
        let weights: Vec<f64> = support.iter().map(|&i| maximizer.weights()[i]).collect();
        let lambda = DiscreteMeasure::new(support_cloud.clone(), weights)?;
        // apex: the largest-weight support point, lowest index on ties
        let apex = lambda
            .weights()
            .iter()
            .enumerate()
            .fold(0usize, |best, (i, &w)| if w > lambda.weights()[best] { i } else { best });
        Some(angle_certificate(&mean.point, &support_cloud, &lambda, apex)?)
    } else {
        None
    };

    Ok(JungReport {
        diameter,
        radius,
        curvature: k,
        support_size: m,
        bound_infinity,
        bound_support,
        pass_infinity,
        pass_support,
        angles,
        history: refinement.history,
    })
}
