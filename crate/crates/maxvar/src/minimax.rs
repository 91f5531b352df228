//! The bilinear minimax core: payoff matrices V(x, y), the functional
//! mu^T V nu, V-variance and V-anti-variance, exact zero-sum solving via the
//! classical game-to-LP transformation, simultaneous fictitious play as an
//! independent cross-check, and saddle-point certification.
//!
//! The exact solver shifts the matrix to strictly positive entries and runs
//! one simplex solve per player, so the maximizing and minimizing strategies
//! come from two independent linear programs whose values must agree by
//! duality. Optimal strategies are generally not unique; downstream results
//! are therefore always validated through certificates rather than by
//! comparing strategies against canonical answers.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::measures::{DiscreteMeasure, SUPPORT_EPS};
use crate::simplex::{self, Constraint, Relation};
use crate::spaces::{Point, PointCloud};

/// How payoff entries are produced from the clouds.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PayoffKind {
    SquaredDistance,
    Distance,
    Custom,
}

impl PayoffKind {
    pub fn name(&self) -> &'static str {
        match self {
            PayoffKind::SquaredDistance => "squared_distance",
            PayoffKind::Distance => "distance",
            PayoffKind::Custom => "custom",
        }
    }
}

/// The matrix V[i][j] = V(x_i, y_j) together with the clouds it was built
/// from.
#[derive(Clone, Debug)]
pub struct PayoffMatrix {
    x_cloud: Arc<PointCloud>,
    y_cloud: Arc<PointCloud>,
    entries: Vec<f64>,
    rows: usize,
    cols: usize,
    kind: PayoffKind,
}

impl PayoffMatrix {
    /// V(x, y) = d^2(x, y).
    pub fn squared_distance(x: Arc<PointCloud>, y: Arc<PointCloud>) -> Result<Self> {
        Self::from_distances(x, y, PayoffKind::SquaredDistance)
    }

    /// V(x, y) = d(x, y).
    pub fn distance(x: Arc<PointCloud>, y: Arc<PointCloud>) -> Result<Self> {
        Self::from_distances(x, y, PayoffKind::Distance)
    }

    fn from_distances(x: Arc<PointCloud>, y: Arc<PointCloud>, kind: PayoffKind) -> Result<Self> {
        if !x.same_space(y.as_ref()) {
            return Err(Error::CloudMismatch);
        }
        let rows = x.len();
        let cols = y.len();
        let mut entries = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                let d = x.space().distance(x.point(i), y.point(j))?;
                entries.push(match kind {
                    PayoffKind::SquaredDistance => d * d,
                    _ => d,
                });
            }
        }
        Ok(PayoffMatrix { x_cloud: x, y_cloud: y, entries, rows, cols, kind })
    }

    /// Explicit row-major matrix.
    pub fn custom(x: Arc<PointCloud>, y: Arc<PointCloud>, rows: Vec<Vec<f64>>) -> Result<Self> {
        if rows.len() != x.len() {
            return Err(Error::InvalidPayoff(format!(
                "matrix has {} rows, cloud X has {} points",
                rows.len(),
                x.len()
            )));
        }
        let mut entries = Vec::with_capacity(x.len() * y.len());
        for row in &rows {
            if row.len() != y.len() {
                return Err(Error::InvalidPayoff(format!(
                    "matrix row has {} entries, cloud Y has {} points",
                    row.len(),
                    y.len()
                )));
            }
            for &v in row {
                if !v.is_finite() {
                    return Err(Error::InvalidPayoff("non-finite payoff entry".into()));
                }
                entries.push(v);
            }
        }
        let (rows_n, cols_n) = (x.len(), y.len());
        Ok(PayoffMatrix {
            x_cloud: x,
            y_cloud: y,
            entries,
            rows: rows_n,
            cols: cols_n,
            kind: PayoffKind::Custom,
        })
    }

    /// Entries from an arbitrary valuation rule on point pairs.
    pub fn from_rule(
        x: Arc<PointCloud>,
        y: Arc<PointCloud>,
        rule: impl Fn(&Point, &Point) -> f64,
    ) -> Result<Self> {
        let matrix: Vec<Vec<f64>> = (0..x.len())
            .map(|i| (0..y.len()).map(|j| rule(x.point(i), y.point(j))).collect())
            .collect();
        Self::custom(x, y, matrix)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn entry(&self, i: usize, j: usize) -> f64 {
        self.entries[i * self.cols + j]
    }

    pub fn kind(&self) -> PayoffKind {
        self.kind
    }

    pub fn x_cloud(&self) -> &Arc<PointCloud> {
        &self.x_cloud
    }

    pub fn y_cloud(&self) -> &Arc<PointCloud> {
        &self.y_cloud
    }

    pub(crate) fn check_mu(&self, mu: &DiscreteMeasure) -> Result<()> {
        if mu.len() != self.rows || !(Arc::ptr_eq(mu.cloud(), &self.x_cloud) || *mu.cloud() == self.x_cloud) {
            return Err(Error::CloudMismatch);
        }
        Ok(())
    }

    pub(crate) fn check_nu(&self, nu: &DiscreteMeasure) -> Result<()> {
        if nu.len() != self.cols || !(Arc::ptr_eq(nu.cloud(), &self.y_cloud) || *nu.cloud() == self.y_cloud) {
            return Err(Error::CloudMismatch);
        }
        Ok(())
    }

    /// Row vector mu^T V over the columns.
    pub fn column_values(&self, mu: &DiscreteMeasure) -> Result<Vec<f64>> {
        self.check_mu(mu)?;
        let w = mu.weights();
        let mut out = vec![0.0; self.cols];
        for i in 0..self.rows {
            let wi = w[i];
            if wi == 0.0 {
                continue;
            }
            let row = &self.entries[i * self.cols..(i + 1) * self.cols];
            for (o, &v) in out.iter_mut().zip(row.iter()) {
                *o += wi * v;
            }
        }
        Ok(out)
    }

    /// Column vector V nu over the rows.
    pub fn row_values(&self, nu: &DiscreteMeasure) -> Result<Vec<f64>> {
        self.check_nu(nu)?;
        let w = nu.weights();
        let mut out = vec![0.0; self.rows];
        for i in 0..self.rows {
            let row = &self.entries[i * self.cols..(i + 1) * self.cols];
            out[i] = row.iter().zip(w.iter()).map(|(v, q)| v * q).sum();
        }
        Ok(out)
    }
}

/// The bilinear pairing mu^T V nu.
pub fn bilinear_value(v: &PayoffMatrix, mu: &DiscreteMeasure, nu: &DiscreteMeasure) -> Result<f64> {
    v.check_nu(nu)?;
    let cols = v.column_values(mu)?;
    Ok(cols.iter().zip(nu.weights().iter()).map(|(c, q)| c * q).sum())
}

/// V-variance of mu: the minimum over columns of mu^T V, with every column
/// within 1e-9 of the minimum.
pub fn v_variance(v: &PayoffMatrix, mu: &DiscreteMeasure) -> Result<(f64, Vec<usize>)> {
    let cols = v.column_values(mu)?;
    Ok(min_with_argset(&cols, 1e-9))
}

/// V-anti-variance of nu: the maximum over rows of V nu, with the rows
/// within 1e-9 of the maximum.
pub fn v_anti_variance(v: &PayoffMatrix, nu: &DiscreteMeasure) -> Result<(f64, Vec<usize>)> {
    let rows = v.row_values(nu)?;
    Ok(max_with_argset(&rows, 1e-9))
}

pub(crate) fn min_with_argset(values: &[f64], tol: f64) -> (f64, Vec<usize>) {
    let best = values.iter().cloned().fold(f64::INFINITY, f64::min);
    let set = values
        .iter()
        .enumerate()
        .filter(|(_, &v)| v <= best + tol)
        .map(|(i, _)| i)
        .collect();
    (best, set)
}

pub(crate) fn max_with_argset(values: &[f64], tol: f64) -> (f64, Vec<usize>) {
    let best = values.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let set = values
        .iter()
        .enumerate()
        .filter(|(_, &v)| v >= best - tol)
        .map(|(i, _)| i)
        .collect();
    (best, set)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SolveMethod {
    Lp,
    Fictitious,
}

impl SolveMethod {
    pub fn name(&self) -> &'static str {
        match self {
            SolveMethod::Lp => "lp",
            SolveMethod::Fictitious => "fictitious",
        }
    }
}

/// Solved game: the value together with both strategies and residual
/// certificates.
///
/// `primal_residual` is value - min_j (mu^T V)_j and `dual_residual` is
/// max_i (V nu)_i - value; both are nonnegative up to rounding, and an exact
/// LP solve keeps them below 1e-8.
#[derive(Clone, Debug)]
pub struct SaddleSolution {
    pub value: f64,
    pub mu: DiscreteMeasure,
    pub nu: DiscreteMeasure,
    pub primal_residual: f64,
    pub dual_residual: f64,
    pub gap: f64,
    pub method: SolveMethod,
    pub iterations: usize,
}

/// Residual bound an LP solve must meet.
pub const LP_RESIDUAL_TOL: f64 = 1e-8;

/// Solves min over strategies q of the game with matrix `w` (the column
/// player of the row-maximizing game), via max sum(q) s.t. Wq <= 1 on the
/// shifted strictly positive matrix.
///
/// Returns (game value, strategy, iterations).
fn solve_min_side(
    entries: &[f64],
    rows: usize,
    cols: usize,
    cap: usize,
) -> Result<(f64, Vec<f64>, usize)> {
    let min_entry = entries.iter().cloned().fold(f64::INFINITY, f64::min);
    if !min_entry.is_finite() {
        return Err(Error::InvalidPayoff("non-finite payoff entry".into()));
    }
    let shift = 1.0 - min_entry;
    let constraints: Vec<Constraint> = (0..rows)
        .map(|i| {
            let coeffs = (0..cols).map(|j| entries[i * cols + j] + shift).collect();
            Constraint::new(coeffs, Relation::Le, 1.0)
        })
        .collect();
    let objective = vec![1.0; cols];
    let sol = simplex::maximize(&objective, &constraints, cap)?;
    let total = sol.objective; // = sum of q

    if total <= 0.0 {
        return Err(Error::Solver("degenerate game transformation".into()));
    }
    let value = 1.0 / total - shift;
    let strategy: Vec<f64> = sol.x.iter().map(|q| q / total).collect();
    Ok((value, strategy, sol.iterations))
}

fn lp_iteration_cap(rows: usize, cols: usize) -> usize {
    10_000 + 50 * (rows + cols)
}

/// Exact solve of the zero-sum game: the row player maximizes mu^T V nu over
/// mu, the column player minimizes over nu.
///
/// Each side is recovered from its own simplex solve; the reported value is
/// the midpoint of the two attained values, which agree to LP accuracy by
/// duality.
pub fn solve_lp(v: &PayoffMatrix) -> Result<SaddleSolution> {
    let cap = lp_iteration_cap(v.rows, v.cols);
    // column player of V
    let (value_nu, nu_w, it1) = solve_min_side(&v.entries, v.rows, v.cols, cap)?;
    // row player of V = column player of -V^T
    let mut transposed = vec![0.0; v.entries.len()];
    for i in 0..v.rows {
        for j in 0..v.cols {
            transposed[j * v.rows + i] = -v.entry(i, j);
        }
    }
    let (neg_value_mu, mu_w, it2) = solve_min_side(&transposed, v.cols, v.rows, cap)?;
    let value_mu = -neg_value_mu;

    let mu = DiscreteMeasure::new(v.x_cloud.clone(), mu_w)?;
    let nu = DiscreteMeasure::new(v.y_cloud.clone(), nu_w)?;
    let value = 0.5 * (value_mu + value_nu);
    let (var, _) = v_variance(v, &mu)?;
    let (avar, _) = v_anti_variance(v, &nu)?;
    let primal_residual = value - var;
    let dual_residual = avar - value;
    let gap = primal_residual + dual_residual;
    if primal_residual > LP_RESIDUAL_TOL || dual_residual > LP_RESIDUAL_TOL {
        return Err(Error::Solver(format!(
            "lp residuals out of tolerance: primal {primal_residual:.3e}, dual {dual_residual:.3e}"
        )));
    }
    Ok(SaddleSolution {
        value,
        mu,
        nu,
        primal_residual,
        dual_residual,
        gap,
        method: SolveMethod::Lp,
        iterations: it1 + it2,
    })
}

/// Fictitious play from uniform initial beliefs with alternating updates:
/// each round the row player best-responds to the column average, then the
/// column player responds with that fresh choice already counted. Ties in
/// best responses go to the lowest index. Runs until the duality gap drops
/// to `target_gap` or `max_iters` rounds.
///
/// Every round yields a lower bound Var(mu_t) and an upper bound AVar(nu_t)
/// on the game value; the solver keeps the best averaged strategy for each
/// bound independently and returns that pair, so the reported gap is
/// nonincreasing in `max_iters`.
pub fn solve_fictitious(v: &PayoffMatrix, max_iters: usize, target_gap: f64) -> Result<SaddleSolution> {
    if v.entries.iter().any(|e| !e.is_finite()) {
        return Err(Error::InvalidPayoff("non-finite payoff entry".into()));
    }
    let (m, n) = (v.rows, v.cols);
    let max_iters = max_iters.max(1);
    // accumulated (unnormalized) strategy weights, starting from uniform
    let mut row_acc = vec![1.0 / m as f64; m];
    let mut col_acc = vec![1.0 / n as f64; n];
    // row_scores = V * col_acc, col_scores = row_acc^T * V
    let mut row_scores = vec![0.0; m];
    let mut col_scores = vec![0.0; n];
    for i in 0..m {
        let row = &v.entries[i * n..(i + 1) * n];
        row_scores[i] = row.iter().sum::<f64>() / n as f64;
        for (s, &e) in col_scores.iter_mut().zip(row.iter()) {
            *s += e / m as f64;
        }
    }
    let mut total_rows = 1.0;
    let mut total_cols = 1.0;
    let mut rounds = 0usize;
    let mut best_lower = f64::NEG_INFINITY;
    let mut best_upper = f64::INFINITY;
    let mut best_mu = row_acc.clone();
    let mut best_nu = col_acc.clone();
    while rounds < max_iters {
        let best_row = argmax_lowest(&row_scores);
        row_acc[best_row] += 1.0;
        total_rows += 1.0;
        let row = &v.entries[best_row * n..(best_row + 1) * n];
        for (s, &e) in col_scores.iter_mut().zip(row.iter()) {
            *s += e;
        }
        let best_col = argmin_lowest(&col_scores);
        col_acc[best_col] += 1.0;
        total_cols += 1.0;
        for i in 0..m {
            row_scores[i] += v.entries[i * n + best_col];
        }
        rounds += 1;
        let lower = col_scores.iter().cloned().fold(f64::INFINITY, f64::min) / total_rows;
        let upper = row_scores.iter().cloned().fold(f64::NEG_INFINITY, f64::max) / total_cols;
        if lower > best_lower {
            best_lower = lower;
            best_mu.copy_from_slice(&row_acc);
        }
        if upper < best_upper {
            best_upper = upper;
            best_nu.copy_from_slice(&col_acc);
        }
        if best_upper - best_lower <= target_gap {
            break;
        }
    }
    let mu = DiscreteMeasure::new(v.x_cloud.clone(), best_mu)?;
    let nu = DiscreteMeasure::new(v.y_cloud.clone(), best_nu)?;
    let value = bilinear_value(v, &mu, &nu)?;
    let (var, _) = v_variance(v, &mu)?;
    let (avar, _) = v_anti_variance(v, &nu)?;
    Ok(SaddleSolution {
        value,
        mu,
        nu,
        primal_residual: value - var,
        dual_residual: avar - value,
        gap: avar - var,
        method: SolveMethod::Fictitious,
        iterations: rounds,
    })
}

fn argmax_lowest(values: &[f64]) -> usize {
    let mut best = 0;
    for (i, &v) in values.iter().enumerate().skip(1) {
        if v > values[best] {
            best = i;
        }
    }
    best
}

fn argmin_lowest(values: &[f64]) -> usize {
    let mut best = 0;
    for (i, &v) in values.iter().enumerate().skip(1) {
        if v < values[best] {
            best = i;
        }
    }
    best
}

/// Saddle-point certificate for a strategy pair.
///
/// Condition (a): nu-almost every column is a V-barycenter of mu, i.e. every
/// supported column of nu attains the column minimum of mu^T V within `tol`.
/// Condition (b): mu-almost every row is a V-anti-barycenter of nu.
#[derive(Clone, Debug)]
pub struct SaddleCertificate {
    pub value: f64,
    pub barycenter_ok: bool,
    pub anti_barycenter_ok: bool,
    /// Worst excess (mu^T V)_j - min_col over the support of nu.
    pub worst_column_violation: f64,
    /// Worst deficit max_row - (V nu)_i over the support of mu.
    pub worst_row_violation: f64,
    pub tol: f64,
}

impl SaddleCertificate {
    pub fn pass(&self) -> bool {
        self.barycenter_ok && self.anti_barycenter_ok
    }
}

pub fn certify_saddle(
    v: &PayoffMatrix,
    mu: &DiscreteMeasure,
    nu: &DiscreteMeasure,
    tol: f64,
) -> Result<SaddleCertificate> {
    let value = bilinear_value(v, mu, nu)?;
    let cols = v.column_values(mu)?;
    let rows = v.row_values(nu)?;
    let col_min = cols.iter().cloned().fold(f64::INFINITY, f64::min);
    let row_max = rows.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let mut worst_col = 0.0_f64;
    for j in nu.support(SUPPORT_EPS) {
        worst_col = worst_col.max(cols[j] - col_min);
    }
    let mut worst_row = 0.0_f64;
    for i in mu.support(SUPPORT_EPS) {
        worst_row = worst_row.max(row_max - rows[i]);
    }
    Ok(SaddleCertificate {
        value,
        barycenter_ok: worst_col <= tol,
        anti_barycenter_ok: worst_row <= tol,
        worst_column_violation: worst_col,
        worst_row_violation: worst_row,
        tol,
    })
}

/// Among the maximizers of the V-variance at the given optimal `value`,
/// selects the measure maximizing its smallest weight (a second, small LP
/// over the optimal face). This picks the symmetric representative on
/// symmetric instances; optimality is preserved and should be re-checked via
/// certificates downstream like any other strategy.
pub fn balanced_maximizer(v: &PayoffMatrix, value: f64) -> Result<DiscreteMeasure> {
    let m = v.rows;
    let n = v.cols;
    let slack = 1e-7 * (1.0 + value.abs());
    // variables: mu_0 .. mu_{m-1}, t
    let mut constraints = Vec::with_capacity(n + m + 1);
    let mut total = vec![0.0; m + 1];
    total[..m].iter_mut().for_each(|c| *c = 1.0);
    constraints.push(Constraint::new(total, Relation::Eq, 1.0));
    for j in 0..n {
        let mut coeffs = vec![0.0; m + 1];
        for (i, c) in coeffs[..m].iter_mut().enumerate() {
            *c = v.entry(i, j);
        }
        constraints.push(Constraint::new(coeffs, Relation::Ge, value - slack));
    }
    for i in 0..m {
        let mut coeffs = vec![0.0; m + 1];
        coeffs[i] = -1.0;
        coeffs[m] = 1.0;
        constraints.push(Constraint::new(coeffs, Relation::Le, 0.0));
    }
    let mut objective = vec![0.0; m + 1];
    objective[m] = 1.0;
    let sol = simplex::maximize(&objective, &constraints, lp_iteration_cap(m, n) + 10 * m)?;
    DiscreteMeasure::new(v.x_cloud.clone(), sol.x[..m].to_vec())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spaces::{sample_grid, ModelSpace, Region};
    use rand::prelude::*;
    use rand_chacha::ChaCha8Rng;

    pub(crate) fn line_cloud(xs: &[f64]) -> Arc<PointCloud> {
        let s = ModelSpace::euclidean(1).unwrap();
        let pts = xs.iter().map(|&x| Point::coords(vec![x])).collect();
        Arc::new(PointCloud::new(s, pts).unwrap())
    }

    /// X = {0, 1}, Y = {0, 1/2, 1} with squared distances.
    pub(crate) fn popoviciu() -> PayoffMatrix {
        PayoffMatrix::squared_distance(line_cloud(&[0.0, 1.0]), line_cloud(&[0.0, 0.5, 1.0]))
            .unwrap()
    }

    /// Circle of circumference 2 sampled at 4 points, X = Y.
    pub(crate) fn circle_four() -> PayoffMatrix {
        let s = ModelSpace::sphere(std::f64::consts::PI.powi(2), 1).unwrap();
        let g = Arc::new(sample_grid(&s, &Region::FullSphere, 4).unwrap());
        PayoffMatrix::squared_distance(g.clone(), g).unwrap()
    }

    #[test]
    fn assemble_squared_and_plain_distance() {
        let v = popoviciu();
        let expect = [[0.0, 0.25, 1.0], [1.0, 0.25, 0.0]];
        for i in 0..2 {
            for j in 0..3 {
                assert!((v.entry(i, j) - expect[i][j]).abs() < 1e-15);
            }
        }
        let v = PayoffMatrix::distance(line_cloud(&[0.0, 1.0]), line_cloud(&[0.0, 0.5, 1.0]))
            .unwrap();
        assert!((v.entry(0, 1) - 0.5).abs() < 1e-15);
        assert!((v.entry(1, 0) - 1.0).abs() < 1e-15);

        let single =
            PayoffMatrix::squared_distance(line_cloud(&[2.0]), line_cloud(&[2.0])).unwrap();
        assert_eq!((single.rows(), single.cols()), (1, 1));
        assert_eq!(single.entry(0, 0), 0.0);
    }

    #[test]
    fn assemble_rejects_mismatches() {
        let x = line_cloud(&[0.0]);
        let s2 = ModelSpace::euclidean(2).unwrap();
        let y = Arc::new(PointCloud::new(s2, vec![Point::coords(vec![0.0, 0.0])]).unwrap());
        assert!(PayoffMatrix::squared_distance(x.clone(), y).is_err());
        assert!(PayoffMatrix::custom(x.clone(), line_cloud(&[0.0, 1.0]), vec![vec![1.0]]).is_err());
        assert!(PayoffMatrix::custom(x.clone(), x, vec![vec![f64::NAN]]).is_err());
    }

    #[test]
    fn bilinear_examples() {
        let v = popoviciu();
        let mu = DiscreteMeasure::new(v.x_cloud().clone(), vec![0.5, 0.5]).unwrap();
        let nu = DiscreteMeasure::dirac(v.y_cloud().clone(), 1).unwrap();
        assert!((bilinear_value(&v, &mu, &nu).unwrap() - 0.25).abs() < 1e-15);

        // Dirac pairing picks out a single entry
        let mu = DiscreteMeasure::dirac(v.x_cloud().clone(), 1).unwrap();
        let nu = DiscreteMeasure::dirac(v.y_cloud().clone(), 0).unwrap();
        assert_eq!(bilinear_value(&v, &mu, &nu).unwrap(), v.entry(1, 0));

        let z = PayoffMatrix::custom(
            line_cloud(&[0.0, 1.0]),
            line_cloud(&[0.0]),
            vec![vec![0.0], vec![0.0]],
        )
        .unwrap();
        let mu = DiscreteMeasure::uniform(z.x_cloud().clone());
        let nu = DiscreteMeasure::uniform(z.y_cloud().clone());
        assert_eq!(bilinear_value(&z, &mu, &nu).unwrap(), 0.0);
    }

    #[test]
    fn variance_and_anti_variance_examples() {
        let v = popoviciu();
        let mu = DiscreteMeasure::new(v.x_cloud().clone(), vec![0.5, 0.5]).unwrap();
        let (val, arg) = v_variance(&v, &mu).unwrap();
        assert!((val - 0.25).abs() < 1e-15);
        assert_eq!(arg, vec![1]);

        // dirac at an x present in Y
        let mu = DiscreteMeasure::dirac(v.x_cloud().clone(), 0).unwrap();
        let (val, arg) = v_variance(&v, &mu).unwrap();
        assert_eq!(val, 0.0);
        assert_eq!(arg, vec![0]);

        let nu = DiscreteMeasure::dirac(v.y_cloud().clone(), 1).unwrap();
        let (val, arg) = v_anti_variance(&v, &nu).unwrap();
        assert!((val - 0.25).abs() < 1e-15);
        assert_eq!(arg, vec![0, 1]);

        let nu = DiscreteMeasure::dirac(v.y_cloud().clone(), 0).unwrap();
        let (val, arg) = v_anti_variance(&v, &nu).unwrap();
        assert_eq!(val, 1.0);
        assert_eq!(arg, vec![1]);

        let v4 = circle_four();
        let mu = DiscreteMeasure::uniform(v4.x_cloud().clone());
        let (val, arg) = v_variance(&v4, &mu).unwrap();
        assert!((val - 0.375).abs() < 1e-12);
        assert_eq!(arg, vec![0, 1, 2, 3]);
        let nu = DiscreteMeasure::uniform(v4.y_cloud().clone());
        let (val, arg) = v_anti_variance(&v4, &nu).unwrap();
        assert!((val - 0.375).abs() < 1e-12);
        assert_eq!(arg, vec![0, 1, 2, 3]);
    }

    #[test]
    fn cloud_mismatch_rejected() {
        let v = popoviciu();
        let other = DiscreteMeasure::uniform(line_cloud(&[0.0, 1.0, 2.0]));
        assert!(v_variance(&v, &other).is_err());
    }

    #[test]
    fn lp_solves_popoviciu() {
        let v = popoviciu();
        let sol = solve_lp(&v).unwrap();
        assert!((sol.value - 0.25).abs() < 1e-9);
        // the optimal nu is uniquely the midpoint Dirac
        assert!(sol.nu.weights()[1] > 1.0 - 1e-9);
        assert!(sol.primal_residual <= LP_RESIDUAL_TOL && sol.dual_residual <= LP_RESIDUAL_TOL);
        let cert = certify_saddle(&v, &sol.mu, &sol.nu, 1e-7).unwrap();
        assert!(cert.pass());
        // the most uniform maximizer is the paper's equality case
        let balanced = balanced_maximizer(&v, sol.value).unwrap();
        assert!((balanced.weights()[0] - 0.5).abs() < 1e-9);
        assert!((balanced.weights()[1] - 0.5).abs() < 1e-9);
    }

    #[test]
    fn lp_solves_triangle_with_circumcenter() {
        let s = ModelSpace::euclidean(2).unwrap();
        let h = 3.0_f64.sqrt() / 2.0;
        let x = Arc::new(
            PointCloud::new(
                s.clone(),
                vec![
                    Point::coords(vec![0.0, 0.0]),
                    Point::coords(vec![1.0, 0.0]),
                    Point::coords(vec![0.5, h]),
                ],
            )
            .unwrap(),
        );
        let mut y_pts: Vec<Point> = x.points().to_vec();
        y_pts.push(Point::coords(vec![0.5, h / 3.0])); // circumcenter
        let y = Arc::new(PointCloud::new(s, y_pts).unwrap());
        let v = PayoffMatrix::squared_distance(x, y).unwrap();
        let sol = solve_lp(&v).unwrap();
        assert!((sol.value - 1.0 / 3.0).abs() < 1e-9);
        // brute-force oracle: maximize min over the 4 columns on a simplex grid
        let mut best = 0.0_f64;
        let steps = 60;
        for a in 0..=steps {
            for b in 0..=(steps - a) {
                let c = steps - a - b;
                let w = [a as f64, b as f64, c as f64].map(|t| t / steps as f64);
                let mut min_col = f64::INFINITY;
                for j in 0..v.cols() {
                    let col: f64 = (0..3).map(|i| w[i] * v.entry(i, j)).sum();
                    min_col = min_col.min(col);
                }
                best = best.max(min_col);
            }
        }
        assert!(best <= sol.value + 1e-9);
        assert!(best >= sol.value - 1e-3);
        // nu concentrates on the circumcenter column
        assert!(sol.nu.weights()[3] > 1.0 - 1e-9);
        // uniform on the vertices is optimal and balanced selection finds it
        let balanced = balanced_maximizer(&v, sol.value).unwrap();
        for w in balanced.weights() {
            assert!((w - 1.0 / 3.0).abs() < 1e-9);
        }
    }

    #[test]
    fn lp_solves_matching_pennies_diagonal() {
        let x = line_cloud(&[0.0, 1.0]);
        let y = line_cloud(&[0.0, 1.0]);
        let v = PayoffMatrix::custom(x, y, vec![vec![1.0, 0.0], vec![0.0, 1.0]]).unwrap();
        let sol = solve_lp(&v).unwrap();
        assert!((sol.value - 0.5).abs() < 1e-9);
        for w in sol.mu.weights().iter().chain(sol.nu.weights()) {
            assert!((w - 0.5).abs() < 1e-9);
        }
    }

    #[test]
    fn fictitious_play_examples() {
        let x = line_cloud(&[0.0, 1.0]);
        let y = line_cloud(&[0.0, 1.0]);
        let v =
            PayoffMatrix::custom(x.clone(), y.clone(), vec![vec![1.0, 0.0], vec![0.0, 1.0]])
                .unwrap();
        let sol = solve_fictitious(&v, 100_000, 0.0).unwrap();
        assert!((sol.value - 0.5).abs() < 1e-2);
        assert!(sol.primal_residual >= -1e-9 && sol.dual_residual >= -1e-9);

        let v = PayoffMatrix::custom(x.clone(), y.clone(), vec![vec![3.0, 1.0], vec![3.0, 1.0]])
            .unwrap();
        let sol = solve_fictitious(&v, 100_000, 1e-3).unwrap();
        assert!((sol.value - 1.0).abs() < 2e-3);
        assert!(sol.nu.weights()[1] > 0.99);

        let single = line_cloud(&[0.0]);
        let v = PayoffMatrix::custom(single.clone(), single, vec![vec![2.5]]).unwrap();
        let sol = solve_fictitious(&v, 10, 1e-12).unwrap();
        assert_eq!(sol.iterations, 1);
        assert_eq!(sol.value, 2.5);
    }

    #[test]
    fn fictitious_gap_nonincreasing_in_iterations() {
        let mut rng = ChaCha8Rng::seed_from_u64(20);
        let x = line_cloud(&(0..20).map(|i| i as f64).collect::<Vec<_>>());
        let matrix: Vec<Vec<f64>> =
            (0..20).map(|_| (0..20).map(|_| rng.random_range(0.0..1.0)).collect()).collect();
        let v = PayoffMatrix::custom(x.clone(), x.clone(), matrix).unwrap();
        let budgets = [100usize, 1_000, 10_000, 100_000];
        let gaps: Vec<f64> =
            budgets.iter().map(|&b| solve_fictitious(&v, b, 0.0).unwrap().gap).collect();
        for w in gaps.windows(2) {
            assert!(w[1] <= w[0] + 1e-12, "gap increased: {gaps:?}");
        }
        assert!(gaps[3] <= 1e-3, "gap {} after 1e5 iterations", gaps[3]);
    }

    #[test]
    fn certificates_pass_and_fail_quantitatively() {
        let v = popoviciu();
        let mu = DiscreteMeasure::new(v.x_cloud().clone(), vec![0.5, 0.5]).unwrap();
        let nu = DiscreteMeasure::dirac(v.y_cloud().clone(), 1).unwrap();
        let cert = certify_saddle(&v, &mu, &nu, 1e-9).unwrap();
        assert!(cert.pass());
        assert_eq!(cert.worst_column_violation, 0.0);
        assert_eq!(cert.worst_row_violation, 0.0);

        // discretize Y finely enough to expose that (0.6, 0.4) pairs with the
        // barycenter 0.4, not with 0.5
        let vfine = PayoffMatrix::squared_distance(
            line_cloud(&[0.0, 1.0]),
            line_cloud(&[0.0, 0.4, 0.5, 1.0]),
        )
        .unwrap();
        let mu = DiscreteMeasure::new(vfine.x_cloud().clone(), vec![0.6, 0.4]).unwrap();
        let nu = DiscreteMeasure::dirac(vfine.y_cloud().clone(), 2).unwrap();
        let cert = certify_saddle(&vfine, &mu, &nu, 1e-9).unwrap();
        assert!(!cert.barycenter_ok);
        assert!((cert.worst_column_violation - 0.01).abs() < 1e-12);

        let v4 = circle_four();
        let mu = DiscreteMeasure::uniform(v4.x_cloud().clone());
        let nu = DiscreteMeasure::uniform(v4.y_cloud().clone());
        let cert = certify_saddle(&v4, &mu, &nu, 1e-9).unwrap();
        assert!(cert.pass());
    }

    #[test]
    fn strong_duality_on_random_matrices() {
        let mut rng = ChaCha8Rng::seed_from_u64(33);
        for _ in 0..30 {
            let m = rng.random_range(1..=12);
            let n = rng.random_range(1..=12);
            let x = line_cloud(&(0..m).map(|i| i as f64).collect::<Vec<_>>());
            let y = line_cloud(&(0..n).map(|i| i as f64).collect::<Vec<_>>());
            let matrix: Vec<Vec<f64>> =
                (0..m).map(|_| (0..n).map(|_| rng.random_range(0.0..1.0)).collect()).collect();
            let v = PayoffMatrix::custom(x, y, matrix).unwrap();
            let sol = solve_lp(&v).unwrap();
            let (var, _) = v_variance(&v, &sol.mu).unwrap();
            let (avar, _) = v_anti_variance(&v, &sol.nu).unwrap();
            assert!((var - avar).abs() <= 1e-8, "duality gap {}", (var - avar).abs());
            assert!(certify_saddle(&v, &sol.mu, &sol.nu, 1e-7).unwrap().pass());
        }
    }

    #[test]
    fn lemma_reduction_column_min_equals_simplex_min() {
        let mut rng = ChaCha8Rng::seed_from_u64(55);
        for _ in 0..20 {
            let m = rng.random_range(1..=8);
            let n = rng.random_range(1..=8);
            let x = line_cloud(&(0..m).map(|i| i as f64).collect::<Vec<_>>());
            let y = line_cloud(&(0..n).map(|i| i as f64).collect::<Vec<_>>());
            let matrix: Vec<Vec<f64>> =
                (0..m).map(|_| (0..n).map(|_| rng.random_range(0.0..1.0)).collect()).collect();
            let v = PayoffMatrix::custom(x.clone(), y, matrix).unwrap();
            let mu_w: Vec<f64> = (0..m).map(|_| rng.random_range(0.0..1.0) + 1e-3).collect();
            let mu = DiscreteMeasure::new(x.clone(), mu_w).unwrap();
            let cols = v.column_values(&mu).unwrap();
            // LP over the simplex: minimize cols . nu
            let neg: Vec<f64> = cols.iter().map(|c| -c).collect();
            let sol = simplex::maximize(
                &neg,
                &[Constraint::new(vec![1.0; n], Relation::Eq, 1.0)],
                1000,
            )
            .unwrap();
            let lp_min = -sol.objective;
            let col_min = cols.iter().cloned().fold(f64::INFINITY, f64::min);
            assert!((lp_min - col_min).abs() <= 1e-9);
        }
    }

    #[test]
    fn shift_invariance_of_the_game() {
        let mut rng = ChaCha8Rng::seed_from_u64(77);
        for _ in 0..10 {
            let m = rng.random_range(2..=6);
            let n = rng.random_range(2..=6);
            let x = line_cloud(&(0..m).map(|i| i as f64).collect::<Vec<_>>());
            let y = line_cloud(&(0..n).map(|i| i as f64).collect::<Vec<_>>());
            let matrix: Vec<Vec<f64>> =
                (0..m).map(|_| (0..n).map(|_| rng.random_range(-1.0..1.0)).collect()).collect();
            let shift = rng.random_range(-2.0..2.0);
            let shifted: Vec<Vec<f64>> =
                matrix.iter().map(|r| r.iter().map(|e| e + shift).collect()).collect();
            let v = PayoffMatrix::custom(x.clone(), y.clone(), matrix).unwrap();
            let vs = PayoffMatrix::custom(x.clone(), y.clone(), shifted).unwrap();
            let sol = solve_lp(&v).unwrap();
            let sols = solve_lp(&vs).unwrap();
            assert!((sols.value - sol.value - shift).abs() < 1e-8);
            // optimal strategies carry over (certified, not compared)
            let mu = DiscreteMeasure::new(vs.x_cloud().clone(), sol.mu.weights().to_vec()).unwrap();
            let nu = DiscreteMeasure::new(vs.y_cloud().clone(), sol.nu.weights().to_vec()).unwrap();
            assert!(certify_saddle(&vs, &mu, &nu, 1e-7).unwrap().pass());
        }
    }

    #[test]
    fn appending_a_column_never_increases_value() {
        let mut rng = ChaCha8Rng::seed_from_u64(99);
        for _ in 0..10 {
            let m = rng.random_range(2..=6);
            let n = rng.random_range(2..=6);
            let x = line_cloud(&(0..m).map(|i| i as f64).collect::<Vec<_>>());
            let y = line_cloud(&(0..n).map(|i| i as f64).collect::<Vec<_>>());
            let matrix: Vec<Vec<f64>> =
                (0..m).map(|_| (0..n).map(|_| rng.random_range(0.0..1.0)).collect()).collect();
            let extra: Vec<f64> = (0..m).map(|_| rng.random_range(0.0..1.0)).collect();
            let mut wider = matrix.clone();
            for (row, &e) in wider.iter_mut().zip(extra.iter()) {
                row.push(e);
            }
            let y2 = line_cloud(&(0..=n).map(|i| i as f64).collect::<Vec<_>>());
            let v = PayoffMatrix::custom(x.clone(), y, matrix).unwrap();
            let v2 = PayoffMatrix::custom(x.clone(), y2, wider).unwrap();
            let a = solve_lp(&v).unwrap().value;
            let b = solve_lp(&v2).unwrap().value;
            assert!(b <= a + 1e-9, "value rose from {a} to {b}");
        }
    }
}
