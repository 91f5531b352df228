//! Dense two-phase tableau simplex with Bland's anti-cycling rule.
//!
//! Instances here are small and dense (at most a few thousand columns), so a
//! straightforward tableau beats anything sparse. Bland's rule trades speed
//! for guaranteed termination and run-to-run determinism, which the
//! certificate machinery depends on.

use crate::error::{Error, Result};

/// Pivot selection tolerance: reduced costs and ratios below this count as
/// zero.
pub(crate) const PIVOT_TOL: f64 = 1e-10;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) enum Relation {
    Le,
    Eq,
    Ge,
}

#[derive(Clone, Debug)]
pub(crate) struct Constraint {
    pub coeffs: Vec<f64>,
    pub rel: Relation,
    pub rhs: f64,
}

impl Constraint {
    pub fn new(coeffs: Vec<f64>, rel: Relation, rhs: f64) -> Self {
        Constraint { coeffs, rel, rhs }
    }
}

#[derive(Clone, Debug)]
pub(crate) struct LpSolution {
    pub objective: f64,
    pub x: Vec<f64>,
    pub iterations: usize,
}

/// Maximizes `objective . x` subject to the constraints and `x >= 0`.
pub(crate) fn maximize(
    objective: &[f64],
    constraints: &[Constraint],
    iteration_cap: usize,
) -> Result<LpSolution> {
    let n = objective.len();
    let m = constraints.len();
    if m == 0 {
        return Err(Error::Solver("linear program needs at least one constraint".into()));
    }
    for c in constraints {
        if c.coeffs.len() != n {
            return Err(Error::Solver("constraint arity mismatch".into()));
        }
        if !c.rhs.is_finite() || c.coeffs.iter().any(|v| !v.is_finite()) {
            return Err(Error::Solver("non-finite constraint data".into()));
        }
    }
    if objective.iter().any(|v| !v.is_finite()) {
        return Err(Error::Solver("non-finite objective".into()));
    }

    // Column layout: structural | slack/surplus | artificial, rhs kept apart.
    let mut slack_count = 0usize;
    let mut artificial_count = 0usize;
    for c in constraints {
        let flip = c.rhs < 0.0;
        let rel = flipped(c.rel, flip);
        match rel {
            Relation::Le => slack_count += 1,
            Relation::Ge => {
                slack_count += 1;
                artificial_count += 1;
            }
            Relation::Eq => artificial_count += 1,
        }
    }
    let total = n + slack_count + artificial_count;
    let art_start = n + slack_count;

    let mut tableau = vec![vec![0.0; total + 1]; m];
    let mut basis = vec![usize::MAX; m];
    let mut next_slack = n;
    let mut next_art = art_start;
    for (row, c) in constraints.iter().enumerate() {
        let flip = c.rhs < 0.0;
        let sign = if flip { -1.0 } else { 1.0 };
        for (j, &v) in c.coeffs.iter().enumerate() {
            tableau[row][j] = sign * v;
        }
        tableau[row][total] = sign * c.rhs;
        match flipped(c.rel, flip) {
            Relation::Le => {
                tableau[row][next_slack] = 1.0;
                basis[row] = next_slack;
                next_slack += 1;
            }
            Relation::Ge => {
                tableau[row][next_slack] = -1.0;
                next_slack += 1;
                tableau[row][next_art] = 1.0;
                basis[row] = next_art;
                next_art += 1;
            }
            Relation::Eq => {
                tableau[row][next_art] = 1.0;
                basis[row] = next_art;
                next_art += 1;
            }
        }
    }

    let mut iterations = 0usize;

    // Phase 1: drive the artificials to zero.
    if artificial_count > 0 {
        let mut cost = vec![0.0; total];
        for j in art_start..total {
            cost[j] = -1.0;
        }
        let mut cost_row = reduced_costs(&cost, &tableau, &basis, total);
        loop {
            match pivot_once(
                &mut tableau,
                &mut basis,
                &mut cost_row,
                total,
                total, // all columns eligible in phase 1
                &mut iterations,
                iteration_cap,
            )? {
                Step::Optimal => break,
                Step::Pivoted => {}
            }
        }
        let infeasibility: f64 =
            (0..m).filter(|&r| basis[r] >= art_start).map(|r| tableau[r][total]).sum();
        if infeasibility > 1e-7 {
            return Err(Error::Solver(format!(
                "infeasible program (phase-1 residual {infeasibility:.3e})"
            )));
        }
        // Drive any artificial still basic (at zero) out of the basis.
        for row in 0..m {
            if basis[row] < art_start {
                continue;
            }
            let col = (0..art_start).find(|&j| tableau[row][j].abs() > PIVOT_TOL);
            if let Some(j) = col {
                pivot(&mut tableau, &mut basis, row, j, total);
            }
            // Otherwise the row is redundant; the artificial stays basic at
            // zero and is barred from re-entering below.
        }
    }

    // Phase 2: the real objective, artificial columns barred.
    let mut cost_row = reduced_costs(objective, &tableau, &basis, total);
    loop {
        match pivot_once(
            &mut tableau,
            &mut basis,
            &mut cost_row,
            total,
            art_start,
            &mut iterations,
            iteration_cap,
        )? {
            Step::Optimal => break,
            Step::Pivoted => {}
        }
    }

    let mut x = vec![0.0; n];
    for row in 0..m {
        if basis[row] < n {
            x[basis[row]] = tableau[row][total];
        }
    }
    let objective_value = objective.iter().zip(x.iter()).map(|(c, v)| c * v).sum();
    Ok(LpSolution { objective: objective_value, x, iterations })
}

fn flipped(rel: Relation, flip: bool) -> Relation {
    if !flip {
        return rel;
    }
    match rel {
        Relation::Le => Relation::Ge,
        Relation::Ge => Relation::Le,
        Relation::Eq => Relation::Eq,
    }
}

/// Reduced costs c_j - c_B B^-1 A_j for the current tableau.
fn reduced_costs(cost: &[f64], tableau: &[Vec<f64>], basis: &[usize], total: usize) -> Vec<f64> {
    let mut row = vec![0.0; total];
    for j in 0..total {
        let mut v = if j < cost.len() { cost[j] } else { 0.0 };
        for (r, &b) in basis.iter().enumerate() {
            let cb = if b < cost.len() { cost[b] } else { 0.0 };
            if cb != 0.0 {
                v -= cb * tableau[r][j];
            }
        }
        row[j] = v;
    }
    row
}

enum Step {
    Optimal,
    Pivoted,
}

/// One Bland pivot: lowest-index improving column, lowest-index tie-broken
/// minimum-ratio row.
fn pivot_once(
    tableau: &mut [Vec<f64>],
    basis: &mut [usize],
    cost_row: &mut [f64],
    total: usize,
    eligible: usize,
    iterations: &mut usize,
    cap: usize,
) -> Result<Step> {
    let entering = (0..eligible).find(|&j| cost_row[j] > PIVOT_TOL);
    let entering = match entering {
        Some(j) => j,
        None => return Ok(Step::Optimal),
    };
    let mut leaving: Option<usize> = None;
    let mut best_ratio = f64::INFINITY;
    for (row, line) in tableau.iter().enumerate() {
        let a = line[entering];
        if a > PIVOT_TOL {
            let ratio = line[total] / a;
            let better = ratio < best_ratio - PIVOT_TOL
                || ((ratio - best_ratio).abs() <= PIVOT_TOL
                    && leaving.map_or(true, |l| basis[row] < basis[l]));
            if better {
                best_ratio = ratio;
                leaving = Some(row);
            }
        }
    }
    let row = leaving.ok_or_else(|| Error::Solver("unbounded linear program".into()))?;
    *iterations += 1;
    if *iterations > cap {
        return Err(Error::Solver(format!("simplex iteration cap {cap} exceeded")));
    }
    let factor = cost_row[entering];
    pivot(tableau, basis, row, entering, total);
    // update the objective row with the freshly pivoted row
    if factor != 0.0 {
        for j in 0..total {
            cost_row[j] -= factor * tableau[row][j];
        }
    }
    cost_row[entering] = 0.0;
    Ok(Step::Pivoted)
}

fn pivot(tableau: &mut [Vec<f64>], basis: &mut [usize], row: usize, col: usize, total: usize) {
    let p = tableau[row][col];
    for v in tableau[row].iter_mut() {
        *v /= p;
    }
    let pivot_row = tableau[row].clone();
    for (r, line) in tableau.iter_mut().enumerate() {
        if r == row {
            continue;
        }
        let f = line[col];
        if f != 0.0 {
            for j in 0..=total {
                line[j] -= f * pivot_row[j];
            }
            line[col] = 0.0;
        }
    }
    basis[row] = col;
}
