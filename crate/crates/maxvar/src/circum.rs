//! Circumradii and circumcenters: brute-force minimax over a candidate grid,
//! an exact Euclidean oracle (Welzl's recursion), and the circumradius of the
//! Dirac embedding of X in Wasserstein space, which the duality machinery
//! identifies with the minimal anti-variance.

use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::barycenter::v_barycenter_set;
use crate::error::{Error, Result};
use crate::measures::DiscreteMeasure;
use crate::minimax::{solve_lp, PayoffKind, PayoffMatrix, SaddleSolution};
use crate::spaces::{coords, ModelSpace, Point, PointCloud};

/// Fixed permutation seed: Welzl's recursion shuffles its input once, so the
/// result is deterministic run to run.
const WELZL_SHUFFLE_SEED: u64 = 0x7e1_21;

/// Points within this of the radius count as attaining it.
const ATTAIN_TOL: f64 = 1e-9;

/// A metric circumball: center, radius and the indices of X on the boundary.
#[derive(Clone, Debug)]
pub struct CircumballResult {
    pub center: Point,
    /// Index of the center in the candidate cloud, for grid-based searches.
    pub center_index: Option<usize>,
    pub radius: f64,
    pub radius_sq: f64,
    pub attaining: Vec<usize>,
}

/// Brute-force minimax circumball: the candidate y in Y minimizing
/// max_x d(x, y), ties broken by lowest index.
pub fn discrete_circumball(x: &PointCloud, y: &PointCloud) -> Result<CircumballResult> {
    if !x.same_space(y) {
        return Err(Error::CloudMismatch);
    }
    let space = x.space();
    let mut best: Option<(usize, f64)> = None;
    for j in 0..y.len() {
        let mut worst = 0.0_f64;
        for i in 0..x.len() {
            worst = worst.max(space.distance(x.point(i), y.point(j))?);
        }
        if best.map_or(true, |(_, r)| worst < r - 0.0) {
            best = Some((j, worst));
        }
    }
    let (center_index, radius) = best.expect("clouds are nonempty");
    let mut attaining = Vec::new();
    for i in 0..x.len() {
        if space.distance(x.point(i), y.point(center_index))? >= radius - ATTAIN_TOL {
            attaining.push(i);
        }
    }
    Ok(CircumballResult {
        center: y.point(center_index).clone(),
        center_index: Some(center_index),
        radius,
        radius_sq: radius * radius,
        attaining,
    })
}

#[derive(Clone, Debug)]
struct Ball {
    center: Vec<f64>,
    radius_sq: f64,
}

impl Ball {
    fn empty(dim: usize) -> Self {
        Ball { center: vec![0.0; dim], radius_sq: -1.0 }
    }

    fn contains(&self, p: &[f64]) -> bool {
        if self.radius_sq < 0.0 {
            return false;
        }
        let d2: f64 = self.center.iter().zip(p.iter()).map(|(c, v)| (c - v) * (c - v)).sum();
        d2 <= self.radius_sq + 1e-10 * (1.0 + self.radius_sq)
    }
}

/// Circumsphere of an affinely independent boundary set, with center in its
/// affine hull. Returns an empty ball when the linear system is rank
/// deficient rather than perturbing the input.
fn ball_from_boundary(boundary: &[usize], pts: &[Vec<f64>], dim: usize) -> Ball {
    match boundary.len() {
        0 => Ball::empty(dim),
        1 => Ball { center: pts[boundary[0]].clone(), radius_sq: 0.0 },
        k => {
            let b0 = &pts[boundary[0]];
            let rows = k - 1;
            // Gram system: 2 (b_i - b0) . (b_j - b0) alpha_j = |b_i - b0|^2
            let diffs: Vec<Vec<f64>> = boundary[1..]
                .iter()
                .map(|&i| pts[i].iter().zip(b0.iter()).map(|(a, b)| a - b).collect())
                .collect();
            let mut a = vec![vec![0.0; rows + 1]; rows];
            for i in 0..rows {
                for j in 0..rows {
                    a[i][j] =
                        2.0 * diffs[i].iter().zip(diffs[j].iter()).map(|(x, y)| x * y).sum::<f64>();
                }
                a[i][rows] = diffs[i].iter().map(|x| x * x).sum();
            }
            let scale = a
                .iter()
                .flat_map(|r| r[..rows].iter())
                .fold(0.0_f64, |acc, v| acc.max(v.abs()));
            // Gaussian elimination with partial pivoting
            for col in 0..rows {
                let pivot = (col..rows)
                    .max_by(|&p, &q| a[p][col].abs().partial_cmp(&a[q][col].abs()).unwrap())
                    .unwrap();
                if a[pivot][col].abs() <= 1e-12 * scale.max(1.0) {
                    return Ball::empty(dim); // affinely dependent boundary
                }
                a.swap(col, pivot);
                for r in (col + 1)..rows {
                    let f = a[r][col] / a[col][col];
                    for c in col..=rows {
                        a[r][c] -= f * a[col][c];
                    }
                }
            }
            let mut alpha = vec![0.0; rows];
            for i in (0..rows).rev() {
                let mut v = a[i][rows];
                for j in (i + 1)..rows {
                    v -= a[i][j] * alpha[j];
                }
                alpha[i] = v / a[i][i];
            }
            let mut center = b0.clone();
            for (i, d) in diffs.iter().enumerate() {
                for (c, v) in center.iter_mut().zip(d.iter()) {
                    *c += alpha[i] * v;
                }
            }
            let radius_sq = center
                .iter()
                .zip(b0.iter())
                .map(|(c, v)| (c - v) * (c - v))
                .sum::<f64>();
            Ball { center, radius_sq }
        }
    }
}

fn welzl_recurse(
    order: &[usize],
    pts: &[Vec<f64>],
    boundary: &mut Vec<usize>,
    dim: usize,
) -> Ball {
    if order.is_empty() || boundary.len() == dim + 1 {
        return ball_from_boundary(boundary, pts, dim);
    }
    let split = order.len() - 1;
    let p = order[split];
    let ball = welzl_recurse(&order[..split], pts, boundary, dim);
    if ball.contains(&pts[p]) {
        return ball;
    }
    boundary.push(p);
    let ball = welzl_recurse(&order[..split], pts, boundary, dim);
    boundary.pop();
    ball
}

/// Exact minimal enclosing ball of a Euclidean cloud (dimension at most 6)
/// via Welzl's randomized recursion on boundary-support sets. The input
/// permutation is drawn from a fixed seed, so results are reproducible and
/// invariant under reordering of the input.
pub fn welzl_meb(cloud: &PointCloud) -> Result<CircumballResult> {
    let dim = match cloud.space() {
        ModelSpace::Euclidean { dim } => *dim,
        _ => return Err(Error::Hypothesis("welzl_meb requires a euclidean space".into())),
    };
    if dim > 6 {
        return Err(Error::Hypothesis(format!("welzl_meb supports dimension <= 6, got {dim}")));
    }
    let pts: Vec<Vec<f64>> = cloud.points().iter().map(|p| coords(p).to_vec()).collect();
    let mut order: Vec<usize> = (0..pts.len()).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(WELZL_SHUFFLE_SEED);
    order.shuffle(&mut rng);
    let mut boundary = Vec::new();
    let ball = welzl_recurse(&order, &pts, &mut boundary, dim);
    let center = if ball.radius_sq < 0.0 { pts[0].clone() } else { ball.center };
    // exact radius: the max distance from the computed center
    let mut radius_sq = 0.0_f64;
    for p in &pts {
        let d2: f64 = center.iter().zip(p.iter()).map(|(c, v)| (c - v) * (c - v)).sum();
        radius_sq = radius_sq.max(d2);
    }
    let radius = radius_sq.sqrt();
    let attaining = pts
        .iter()
        .enumerate()
        .filter(|(_, p)| {
            let d: f64 = center
                .iter()
                .zip(p.iter())
                .map(|(c, v)| (c - v) * (c - v))
                .sum::<f64>()
                .sqrt();
            d >= radius - ATTAIN_TOL
        })
        .map(|(i, _)| i)
        .collect();
    Ok(CircumballResult {
        center: Point::Coords(center),
        center_index: None,
        radius,
        radius_sq,
        attaining,
    })
}

/// Circumcenter of the Dirac embedding i(X) in Wasserstein space and the
/// squared circumradius, computed as the minimal anti-variance via the dual
/// game solve. Requires a squared-distance payoff so that the rows of V nu
/// are W_2^2(delta_x, nu).
pub fn wasserstein_circumradius(v: &PayoffMatrix) -> Result<(DiscreteMeasure, f64)> {
    if v.kind() != PayoffKind::SquaredDistance {
        return Err(Error::InvalidPayoff(
            "wasserstein circumradius needs a squared-distance payoff".into(),
        ));
    }
    let sol = solve_lp(v)?;
    Ok((sol.nu, sol.value))
}

/// Comparison of the Wasserstein and base-space circumradii.
#[derive(Clone, Debug)]
pub struct RadiiReport {
    pub wasserstein_sq: f64,
    pub metric_sq: f64,
    /// Present when the exact Euclidean oracle applies.
    pub welzl_sq: Option<f64>,
    pub gap: f64,
    /// True when the computed maximizer has a single discrete barycenter
    /// column, the regime in which the two radii provably agree.
    pub unique_barycenter_regime: bool,
    /// wasserstein_sq <= metric_sq + 1e-8, which must hold unconditionally.
    pub one_sided_ok: bool,
    /// Equality within tolerance; only checked in the unique-barycenter
    /// regime with a refined Y.
    pub equality_ok: Option<bool>,
}

/// Builds the comparison report for a solved squared-distance game.
/// `refined` states whether Y went through candidate refinement, which is
/// required before the equality check is meaningful.
pub fn radii_report(
    v: &PayoffMatrix,
    solution: &SaddleSolution,
    refined: bool,
    tol: f64,
) -> Result<RadiiReport> {
    if v.kind() != PayoffKind::SquaredDistance {
        return Err(Error::InvalidPayoff("radii report needs a squared-distance payoff".into()));
    }
    let wasserstein_sq = solution.value;
    let x = v.x_cloud();
    let (metric_sq, welzl_sq) = match x.space() {
        ModelSpace::Euclidean { dim } if *dim <= 6 => {
            let ball = welzl_meb(x)?;
            (ball.radius_sq, Some(ball.radius_sq))
        }
        _ => {
            let ball = discrete_circumball(x, v.y_cloud())?;
            (ball.radius_sq, None)
        }
    };
    // regime detection: the corollaries ask whether SOME maximizer has a
    // unique barycenter, so probe the most balanced one rather than
    // whichever vertex the solver landed on
    let probe = crate::minimax::balanced_maximizer(v, solution.value).unwrap_or_else(|_| solution.mu.clone());
    let unique = v_barycenter_set(v, &probe, 1e-9)?.len() == 1;
    let one_sided_ok = wasserstein_sq <= metric_sq + 1e-8;
    let equality_ok = if unique && refined {
        Some((wasserstein_sq - metric_sq).abs() <= tol)
    } else {
        None
    };
    Ok(RadiiReport {
        wasserstein_sq,
        metric_sq,
        welzl_sq,
        gap: metric_sq - wasserstein_sq,
        unique_barycenter_regime: unique,
        one_sided_ok,
        equality_ok,
    })
}

/// Convenience: X embedded as its own candidate set.
pub fn self_payoff(x: &Arc<PointCloud>) -> Result<PayoffMatrix> {
    PayoffMatrix::squared_distance(x.clone(), x.clone())
}
