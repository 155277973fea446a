//! Brute-force vertex enumeration over the constraint polytope.
//!
//! This is a verification oracle for the simplex path, used by the test
//! suites: it converts the program to standard equality form, row-reduces to
//! an independent system, then enumerates every basic solution by solving
//! all rank-sized column subsets with an LU factorization. It shares no code
//! with the simplex pivoting. Only practical for small programs; the guard
//! refuses anything with more than ~2e7 candidate bases.

use nalgebra::{DMatrix, DVector};

use super::{LinearProgram, Relation, VarBound};
use crate::error::{Error, Result};

const FEAS_TOL: f64 = 1e-7;

#[derive(Debug, Clone)]
pub struct VertexOptimum {
    pub objective: f64,
    /// Values of the structural variables at the best vertex.
    pub values: Vec<f64>,
}

/// Maximizes the objective by visiting every vertex. Returns `None` when the
/// polytope is empty. The polytope must be bounded (true for the probability
/// polytopes built in this crate); unbounded programs would simply report
/// their best vertex.
pub fn enumerate_optimum(lp: &LinearProgram) -> Result<Option<VertexOptimum>> {
    if lp.bounds.iter().any(|b| *b != VarBound::NonNegative) {
        return Err(Error::MalformedProgram(
            "vertex enumeration supports non-negative variables only".into(),
        ));
    }
    lp.validate()?;

    let n = lp.objective.len();
    let n_slack = lp
        .constraints
        .iter()
        .filter(|c| c.relation != Relation::Eq)
        .count();
    let cols = n + n_slack;
    let m = lp.constraints.len();

    // Standard form rows: coeffs | slack | rhs.
    let mut rows = vec![vec![0.0; cols + 1]; m];
    let mut slack = n;
    for (i, c) in lp.constraints.iter().enumerate() {
        rows[i][..n].copy_from_slice(&c.coefficients);
        match c.relation {
            Relation::Le => {
                rows[i][slack] = 1.0;
                slack += 1;
            }
            Relation::Ge => {
                rows[i][slack] = -1.0;
                slack += 1;
            }
            Relation::Eq => {}
        }
        rows[i][cols] = c.rhs;
    }

    // Row-reduce to an equivalent independent system.
    let mut echelon = rows.clone();
    let mut rank = 0;
    for col in 0..cols {
        let pivot = (rank..m).max_by(|&a, &b| {
            echelon[a][col]
                .abs()
                .partial_cmp(&echelon[b][col].abs())
                .unwrap()
        });
        let Some(pivot) = pivot else { break };
        if echelon[pivot][col].abs() <= 1e-9 {
            continue;
        }
        echelon.swap(rank, pivot);
        let scale = echelon[rank][col];
        for v in &mut echelon[rank] {
            *v /= scale;
        }
        for i in 0..m {
            if i == rank || echelon[i][col].abs() <= 1e-12 {
                continue;
            }
            let factor = echelon[i][col];
            let pivot_row = echelon[rank].clone();
            for (v, p) in echelon[i].iter_mut().zip(&pivot_row) {
                *v -= factor * p;
            }
        }
        rank += 1;
        if rank == m {
            break;
        }
    }
    // Dependent rows must be consistent, else the system is infeasible.
    for row in echelon.iter().skip(rank) {
        if row[..cols].iter().all(|v| v.abs() <= 1e-9) && row[cols].abs() > FEAS_TOL {
            return Ok(None);
        }
    }
    let system: Vec<&Vec<f64>> = echelon.iter().take(rank).collect();

    if combinations(cols, rank) > 20_000_000 {
        return Err(Error::MalformedProgram(format!(
            "vertex enumeration over C({cols}, {rank}) bases is too large"
        )));
    }

    // Objective over all columns (slacks cost nothing).
    let mut costs = vec![0.0; cols];
    costs[..n].copy_from_slice(&lp.objective);

    let mut best: Option<VertexOptimum> = None;
    let mut selection: Vec<usize> = (0..rank).collect();
    let mut matrix = DMatrix::<f64>::zeros(rank, rank);
    let rhs = DVector::from_iterator(rank, system.iter().map(|r| r[cols]));

    loop {
        for (k, &col) in selection.iter().enumerate() {
            for (i, row) in system.iter().enumerate() {
                matrix[(i, k)] = row[col];
            }
        }
        if let Some(x_basic) = matrix.clone().lu().solve(&rhs) {
            let residual = (&matrix * &x_basic - &rhs).amax();
            if residual <= FEAS_TOL && x_basic.iter().all(|v| *v >= -FEAS_TOL) {
                let mut full = vec![0.0; cols];
                for (k, &col) in selection.iter().enumerate() {
                    full[col] = x_basic[k].max(0.0);
                }
                if satisfies(&rows, &full, cols) {
                    let objective: f64 =
                        costs.iter().zip(&full).map(|(c, x)| c * x).sum();
                    if best.as_ref().is_none_or(|b| objective > b.objective) {
                        best = Some(VertexOptimum {
                            objective,
                            values: full[..n].to_vec(),
                        });
                    }
                }
            }
        }
        if !advance(&mut selection, cols) {
            break;
        }
    }

    Ok(best)
}

fn satisfies(rows: &[Vec<f64>], x: &[f64], cols: usize) -> bool {
    rows.iter().all(|row| {
        let lhs: f64 = row[..cols].iter().zip(x).map(|(a, b)| a * b).sum();
        (lhs - row[cols]).abs() <= FEAS_TOL
    })
}

/// Next lexicographic k-combination of {0..n}; false when exhausted.
fn advance(selection: &mut [usize], n: usize) -> bool {
    let k = selection.len();
    if k == 0 {
        return false;
    }
    let mut i = k;
    while i > 0 {
        i -= 1;
        if selection[i] < n - (k - i) {
            selection[i] += 1;
            for j in (i + 1)..k {
                selection[j] = selection[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

fn combinations(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut result: u128 = 1;
    for i in 0..k {
        result = result.saturating_mul((n - i) as u128) / (i as u128 + 1);
        if result > u128::MAX / 2 {
            return u128::MAX;
        }
    }
    result
}

#[cfg(test)]
mod tests {
    use super::super::{Constraint, LinearProgram};
    use super::*;

    #[test]
    fn enumeration_finds_textbook_optimum() {
        let lp = LinearProgram::non_negative(
            vec![2.0, 3.0],
            vec![
                Constraint {
                    coefficients: vec![1.0, 1.0],
                    relation: Relation::Le,
                    rhs: 4.0,
                },
                Constraint {
                    coefficients: vec![1.0, 3.0],
                    relation: Relation::Le,
                    rhs: 6.0,
                },
            ],
        );
        let best = enumerate_optimum(&lp).unwrap().unwrap();
        assert!((best.objective - 9.0).abs() < 1e-9);
        assert!((best.values[0] - 3.0).abs() < 1e-9);
    }

    #[test]
    fn enumeration_reports_empty_polytope() {
        let lp = LinearProgram::non_negative(
            vec![1.0],
            vec![
                Constraint {
                    coefficients: vec![1.0],
                    relation: Relation::Eq,
                    rhs: 1.0,
                },
                Constraint {
                    coefficients: vec![1.0],
                    relation: Relation::Eq,
                    rhs: 2.0,
                },
            ],
        );
        assert!(enumerate_optimum(&lp).unwrap().is_none());
    }
}
