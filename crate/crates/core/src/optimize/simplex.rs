//! Dense two-phase primal simplex, generic over the scalar field.
//!
//! The same pivoting code runs on `f64` (with a 1e-9 zero threshold) and on
//! `BigRational` (exact; zero means zero), so infeasibility certificates do
//! not rest on rounding. Bland's rule is used throughout, which rules out
//! cycling at the cost of some extra pivots — irrelevant at the problem
//! sizes this crate builds.

use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};
use std::fmt::Debug;
use std::ops::{Add, Div, Mul, Neg, Sub};

use super::Relation;
use crate::error::{Error, Result};

/// Hard cap on total pivots across both phases.
pub const ITERATION_LIMIT: u64 = 1_000_000;

pub(crate) trait LpScalar:
    Clone
    + PartialOrd
    + Debug
    + Zero
    + Neg<Output = Self>
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
{
    fn one() -> Self;
    fn to_f64(&self) -> f64;
    /// |x| small enough to be treated as zero for pivoting and feasibility.
    fn is_negligible(&self) -> bool;
}

impl LpScalar for f64 {
    fn one() -> Self {
        1.0
    }
    fn to_f64(&self) -> f64 {
        *self
    }
    fn is_negligible(&self) -> bool {
        self.abs() <= 1e-9
    }
}

impl LpScalar for BigRational {
    fn one() -> Self {
        <BigRational as num_traits::One>::one()
    }
    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }
    fn is_negligible(&self) -> bool {
        self.is_zero()
    }
}

fn is_positive<S: LpScalar>(x: &S) -> bool {
    !x.is_negligible() && *x > S::zero()
}

fn is_negative<S: LpScalar>(x: &S) -> bool {
    !x.is_negligible() && *x < S::zero()
}

#[derive(Debug, Clone, PartialEq)]
pub(crate) enum GenericSolution<S> {
    Optimal { objective: S, values: Vec<S> },
    Infeasible,
    Unbounded,
}

struct Tableau<S> {
    /// m rows of `total + 1` entries; the last column is the rhs.
    rows: Vec<Vec<S>>,
    /// Basic variable of each row.
    basis: Vec<usize>,
    total: usize,
    iterations: u64,
}

impl<S: LpScalar> Tableau<S> {
    fn rhs(&self, i: usize) -> &S {
        &self.rows[i][self.total]
    }

    fn pivot(&mut self, row: usize, col: usize) {
        let factor = self.rows[row][col].clone();
        for v in self.rows[row].iter_mut() {
            *v = v.clone() / factor.clone();
        }
        for i in 0..self.rows.len() {
            if i == row || self.rows[i][col].is_negligible() {
                continue;
            }
            let scale = self.rows[i][col].clone();
            for j in 0..=self.total {
                let delta = scale.clone() * self.rows[row][j].clone();
                self.rows[i][j] = self.rows[i][j].clone() - delta;
            }
        }
        self.basis[row] = col;
    }

    /// Maximizes `costs . x` from the current basic feasible solution.
    /// `allowed` limits the entering columns (used to bar artificials in
    /// phase 2). Returns false on unboundedness.
    fn run(&mut self, costs: &[S], allowed: &[bool]) -> Result<bool> {
        loop {
            self.iterations += 1;
            if self.iterations > ITERATION_LIMIT {
                return Err(Error::IterationLimit {
                    limit: ITERATION_LIMIT,
                });
            }

            // Reduced costs r_j = c_j - c_B . B^-1 A_j, recomputed in full:
            // the tableaus here are small and this keeps the pivot loop
            // stateless.
            let mut entering = None;
            for j in 0..self.total {
                if !allowed[j] {
                    continue;
                }
                let mut r = costs[j].clone();
                for (i, &b) in self.basis.iter().enumerate() {
                    if !costs[b].is_negligible() && !self.rows[i][j].is_negligible() {
                        r = r - costs[b].clone() * self.rows[i][j].clone();
                    }
                }
                if is_positive(&r) {
                    entering = Some(j); // Bland: smallest index wins
                    break;
                }
            }
            let Some(col) = entering else {
                return Ok(true);
            };

            let mut leaving: Option<(usize, S)> = None;
            for i in 0..self.rows.len() {
                if !is_positive(&self.rows[i][col]) {
                    continue;
                }
                let ratio = self.rhs(i).clone() / self.rows[i][col].clone();
                let better = match &leaving {
                    None => true,
                    Some((best_row, best_ratio)) => {
                        if (ratio.clone() - best_ratio.clone()).is_negligible() {
                            // Bland: among ties, the smallest basic variable
                            // leaves.
                            self.basis[i] < self.basis[*best_row]
                        } else {
                            ratio < *best_ratio
                        }
                    }
                };
                if better {
                    leaving = Some((i, ratio));
                }
            }
            let Some((row, _)) = leaving else {
                return Ok(false);
            };
            self.pivot(row, col);
        }
    }
}

/// Solves `maximize objective . x` subject to `constraints`, all variables
/// non-negative.
pub(crate) fn solve<S: LpScalar>(
    objective: &[S],
    constraints: &[(Vec<S>, Relation, S)],
) -> Result<GenericSolution<S>> {
    let n = objective.len();
    let mut n_slack = 0;
    let mut n_art = 0;
    for (coeffs, relation, rhs) in constraints {
        if coeffs.len() != n {
            return Err(Error::MalformedProgram(format!(
                "constraint has {} coefficients for {n} variables",
                coeffs.len()
            )));
        }
        // Relations are classified after sign normalization: a negative rhs
        // flips the row.
        let flipped = is_negative(rhs);
        let rel = if flipped { relation.flip() } else { *relation };
        match rel {
            Relation::Le => n_slack += 1,
            Relation::Ge => {
                n_slack += 1;
                n_art += 1;
            }
            Relation::Eq => n_art += 1,
        }
    }

    let total = n + n_slack + n_art;
    let mut rows = Vec::with_capacity(constraints.len());
    let mut basis = Vec::with_capacity(constraints.len());
    let mut slack_idx = n;
    let mut art_idx = n + n_slack;

    for (coeffs, relation, rhs) in constraints {
        let flipped = is_negative(rhs);
        let mut row: Vec<S> = Vec::with_capacity(total + 1);
        for c in coeffs {
            row.push(if flipped { -c.clone() } else { c.clone() });
        }
        row.resize(total + 1, S::zero());
        row[total] = if flipped { -rhs.clone() } else { rhs.clone() };
        let rel = if flipped { relation.flip() } else { *relation };
        match rel {
            Relation::Le => {
                row[slack_idx] = S::one();
                basis.push(slack_idx);
                slack_idx += 1;
            }
            Relation::Ge => {
                row[slack_idx] = -S::one();
                slack_idx += 1;
                row[art_idx] = S::one();
                basis.push(art_idx);
                art_idx += 1;
            }
            Relation::Eq => {
                row[art_idx] = S::one();
                basis.push(art_idx);
                art_idx += 1;
            }
        }
        rows.push(row);
    }

    let mut tableau = Tableau {
        rows,
        basis,
        total,
        iterations: 0,
    };

    if n_art > 0 {
        // Phase 1: drive the artificial variables to zero.
        let mut costs = vec![S::zero(); total];
        for c in costs.iter_mut().skip(n + n_slack) {
            *c = -S::one();
        }
        let allowed = vec![true; total];
        let bounded = tableau.run(&costs, &allowed)?;
        if !bounded {
            // The phase-1 objective is bounded above by zero; reaching this
            // arm means the tableau lost feasibility to rounding.
            return Err(Error::Numerics(
                "phase 1 of the simplex diverged; the tableau is numerically degenerate".into(),
            ));
        }

        let mut infeasibility = S::zero();
        for (i, &b) in tableau.basis.iter().enumerate() {
            if b >= n + n_slack {
                infeasibility = infeasibility + tableau.rhs(i).clone();
            }
        }
        if is_positive(&infeasibility) {
            return Ok(GenericSolution::Infeasible);
        }

        // Pivot leftover artificials out of the basis; rows where that is
        // impossible are redundant and get dropped.
        let mut i = 0;
        while i < tableau.basis.len() {
            if tableau.basis[i] >= n + n_slack {
                let col = (0..n + n_slack).find(|&j| !tableau.rows[i][j].is_negligible());
                match col {
                    Some(j) => tableau.pivot(i, j),
                    None => {
                        tableau.rows.remove(i);
                        tableau.basis.remove(i);
                        continue;
                    }
                }
            }
            i += 1;
        }
    }

    // Phase 2: the real objective, artificial columns barred.
    let mut costs = vec![S::zero(); total];
    costs[..n].clone_from_slice(objective);
    let mut allowed = vec![true; total];
    for a in allowed.iter_mut().skip(n + n_slack) {
        *a = false;
    }
    if !tableau.run(&costs, &allowed)? {
        return Ok(GenericSolution::Unbounded);
    }

    let mut values = vec![S::zero(); n];
    for (i, &b) in tableau.basis.iter().enumerate() {
        if b < n {
            values[b] = tableau.rhs(i).clone();
        }
    }
    let mut objective_value = S::zero();
    for (c, x) in objective.iter().zip(&values) {
        if !c.is_negligible() && !x.is_negligible() {
            objective_value = objective_value + c.clone() * x.clone();
        }
    }
    Ok(GenericSolution::Optimal {
        objective: objective_value,
        values,
    })
}
