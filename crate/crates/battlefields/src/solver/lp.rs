//! Exact equilibrium of a zero-sum matrix game as a linear program.
//!
//! The backend is pluggable: anything that can solve "max-min over a payoff
//! matrix, to a certificate tolerance" fits behind [`MatrixGameSolver`]. The
//! in-repo backend is a dense primal simplex, which is plenty for the matrix
//! sizes the enumeration produces.

use std::time::Instant;

use crate::matrix::PayoffMatrix;
use crate::model::MixedStrategy;
use crate::solver::{Equilibrium, Method, SolveError};

/// Mixed strategies and value of a matrix game, as bare weight vectors.
#[derive(Debug, Clone)]
pub struct MatrixGameSolution {
    /// Game value, payoff to the row player.
    pub value: f64,
    pub row_strategy: Vec<f64>,
    pub col_strategy: Vec<f64>,
    /// Pivot (or iteration) count of the backend.
    pub pivots: u64,
}

/// Contract for zero-sum matrix game backends: given the row player's payoff
/// matrix, return strategies whose best-response gaps are within `tol`.
pub trait MatrixGameSolver {
    fn solve(&self, rows: &[Vec<f64>], tol: f64) -> Result<MatrixGameSolution, SolveError>;
}

/// Dense primal simplex on the column player's packing form.
///
/// With the matrix shifted entrywise to be strictly positive, the column
/// player's problem "max sum(w) subject to A'w <= 1, w >= 0" starts feasible at
/// w = 0 and its optimum is 1/v'. The row player's strategy falls out of the
/// dual values on the slack columns. Bland's rule keeps cycling impossible,
/// so the pivot cap is pure paranoia.
pub struct SimplexSolver {
    max_pivots: u64,
}

impl SimplexSolver {
    pub fn new(max_pivots: u64) -> SimplexSolver {
        SimplexSolver { max_pivots }
    }
}

impl Default for SimplexSolver {
    fn default() -> SimplexSolver {
        SimplexSolver { max_pivots: 1_000_000 }
    }
}

// Entries this close to zero are treated as zero in pivoting decisions.
const PIVOT_EPS: f64 = 1e-11;

impl MatrixGameSolver for SimplexSolver {
    fn solve(&self, rows: &[Vec<f64>], tol: f64) -> Result<MatrixGameSolution, SolveError> {
        let m = rows.len();
        if m == 0 || rows[0].is_empty() {
            return Err(SolveError::EmptyMatrix);
        }
        let k = rows[0].len();
        if rows.iter().any(|r| r.len() != k) {
            return Err(SolveError::RaggedMatrix);
        }

        // Shift so every entry is at least 1; the game value shifts with it.
        let min_entry = rows
            .iter()
            .flatten()
            .cloned()
            .fold(f64::INFINITY, f64::min);
        let offset = 1.0 - min_entry;

        // Tableau columns: k game variables, m slacks, then the RHS.
        let width = k + m + 1;
        let mut tab: Vec<Vec<f64>> = rows
            .iter()
            .enumerate()
            .map(|(i, row)| {
                let mut t = vec![0.0; width];
                for (j, &a) in row.iter().enumerate() {
                    t[j] = a + offset;
                }
                t[k + i] = 1.0;
                t[width - 1] = 1.0;
                t
            })
            .collect();
        // Reduced costs c_j - z_j for the maximization; slacks start basic.
        let mut red = vec![0.0; width - 1];
        red[..k].fill(1.0);
        let mut basis: Vec<usize> = (k..k + m).collect();

        let mut pivots = 0u64;
        loop {
            // Bland: entering variable is the lowest index with positive
            // reduced cost.
            let Some(enter) = red.iter().position(|&r| r > PIVOT_EPS) else {
                break;
            };
            // Ratio test; ties again resolved by lowest basic variable index.
            let mut leave: Option<(usize, f64)> = None;
            for (i, row) in tab.iter().enumerate() {
                if row[enter] > PIVOT_EPS {
                    let ratio = row[width - 1] / row[enter];
                    let replace = match leave {
                        None => true,
                        Some((best_i, best_r)) => {
                            ratio < best_r - PIVOT_EPS
                                || (ratio < best_r + PIVOT_EPS && basis[i] < basis[best_i])
                        }
                    };
                    if replace {
                        leave = Some((i, ratio));
                    }
                }
            }
            let Some((leave, _)) = leave else {
                return Err(SolveError::Unbounded);
            };

            // Pivot.
            let piv = tab[leave][enter];
            for x in tab[leave].iter_mut() {
                *x /= piv;
            }
            for i in 0..m {
                if i != leave && tab[i][enter].abs() > 0.0 {
                    let factor = tab[i][enter];
                    let (pivot_row, target) = if i < leave {
                        let (lo, hi) = tab.split_at_mut(leave);
                        (&hi[0], &mut lo[i])
                    } else {
                        let (lo, hi) = tab.split_at_mut(i);
                        (&lo[leave], &mut hi[0])
                    };
                    for (t, p) in target.iter_mut().zip(pivot_row) {
                        *t -= factor * p;
                    }
                }
            }
            let factor = red[enter];
            if factor.abs() > 0.0 {
                for (r, p) in red.iter_mut().zip(&tab[leave]) {
                    *r -= factor * p;
                }
            }
            basis[leave] = enter;

            pivots += 1;
            if pivots > self.max_pivots {
                return Err(SolveError::PivotLimit);
            }
        }

        // Read the column player's weights off the basis, the row player's
        // off the slack reduced costs (the duals).
        let mut w = vec![0.0; k];
        for (i, &b) in basis.iter().enumerate() {
            if b < k {
                w[b] = tab[i][width - 1].max(0.0);
            }
        }
        let mut u: Vec<f64> = (0..m).map(|i| (-red[k + i]).max(0.0)).collect();

        let sum_w: f64 = w.iter().sum();
        let sum_u: f64 = u.iter().sum();
        if sum_w <= 0.0 || sum_u <= 0.0 {
            // Impossible for finite matrices: the shift keeps the optimum
            // strictly positive on both sides.
            return Err(SolveError::Unbounded);
        }
        let value = 1.0 / sum_w - offset;
        for x in w.iter_mut() {
            *x /= sum_w;
        }
        for x in u.iter_mut() {
            *x /= sum_u;
        }

        let gap = deviation_gap(rows, &u, &w, value);
        if gap > tol {
            return Err(SolveError::Certificate { gap, tol });
        }

        Ok(MatrixGameSolution {
            value,
            row_strategy: u,
            col_strategy: w,
            pivots,
        })
    }
}

/// Largest gain any pure deviation achieves against the returned pair.
pub(crate) fn deviation_gap(rows: &[Vec<f64>], x: &[f64], y: &[f64], value: f64) -> f64 {
    let worst_row = rows
        .iter()
        .map(|row| row.iter().zip(y).map(|(a, yj)| a * yj).sum::<f64>())
        .fold(f64::NEG_INFINITY, f64::max);
    let worst_col = (0..y.len())
        .map(|j| rows.iter().zip(x).map(|(row, xi)| row[j] * xi).sum::<f64>())
        .fold(f64::INFINITY, f64::min);
    (worst_row - value).max(value - worst_col).max(0.0)
}

/// Solves with the default in-repo backend.
pub fn solve_matrix_game(rows: &[Vec<f64>], tol: f64) -> Result<MatrixGameSolution, SolveError> {
    SimplexSolver::default().solve(rows, tol)
}

/// Exact equilibrium of the full enumerated game.
pub fn solve_lp(matrix: &PayoffMatrix, tol: f64) -> Result<Equilibrium, SolveError> {
    let start = Instant::now();
    let rows = matrix.to_f64_rows();
    let sol = solve_matrix_game(&rows, tol)?;
    let exploitability = deviation_gap(&rows, &sol.row_strategy, &sol.col_strategy, sol.value);
    // Basic-variable dust below this floor is numeric noise, not support.
    let floor = 1e-12;
    let strategy_a =
        MixedStrategy::from_weights(matrix.row_strategies(), &sol.row_strategy, floor)?;
    let strategy_b =
        MixedStrategy::from_weights(matrix.col_strategies(), &sol.col_strategy, floor)?;
    Ok(Equilibrium {
        method: Method::Lp,
        value: sol.value,
        strategy_a,
        strategy_b,
        iterations: sol.pivots,
        exploitability,
        wall_time: start.elapsed(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::build_matrix;
    use crate::model::{AggregationKind, GameSpec};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn solve(rows: &[Vec<f64>]) -> MatrixGameSolution {
        solve_matrix_game(rows, 1e-9).unwrap()
    }

    #[test]
    fn matching_pennies_mixes_evenly() {
        let sol = solve(&[vec![1.0, -1.0], vec![-1.0, 1.0]]);
        assert!(sol.value.abs() <= 1e-9);
        for p in sol.row_strategy.iter().chain(&sol.col_strategy) {
            assert!((p - 0.5).abs() <= 1e-9, "expected 1/2, got {p}");
        }
    }

    #[test]
    fn weakly_dominant_row_is_pure() {
        // Row 1 weakly dominates row 2; value 0 via the top-left cell.
        let sol = solve(&[vec![0.0, 1.0], vec![-1.0, 0.0]]);
        assert!(sol.value.abs() <= 1e-9);
        assert!((sol.row_strategy[0] - 1.0).abs() <= 1e-9);
    }

    #[test]
    fn all_zero_matrix_has_value_zero() {
        let sol = solve(&[vec![0.0; 3], vec![0.0; 3]]);
        assert_eq!(sol.value, 0.0);
    }

    #[test]
    fn saddle_point_matrix() {
        // Strictly determined game: value 2 at (row 0, col 1).
        let sol = solve(&[vec![3.0, 2.0], vec![1.0, -4.0]]);
        assert!((sol.value - 2.0).abs() <= 1e-9);
        assert!((sol.row_strategy[0] - 1.0).abs() <= 1e-9);
        assert!((sol.col_strategy[1] - 1.0).abs() <= 1e-9);
    }

    #[test]
    fn empty_and_ragged_inputs_are_rejected() {
        assert!(matches!(
            solve_matrix_game(&[], 1e-9),
            Err(SolveError::EmptyMatrix)
        ));
        assert!(matches!(
            solve_matrix_game(&[vec![1.0, 2.0], vec![3.0]], 1e-9),
            Err(SolveError::RaggedMatrix)
        ));
    }

    #[test]
    fn random_matrices_pass_their_own_certificate() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for trial in 0..40 {
            let m = rng.gen_range(1..=8);
            let k = rng.gen_range(1..=8);
            let rows: Vec<Vec<f64>> = (0..m)
                .map(|_| (0..k).map(|_| rng.gen_range(-5.0..5.0)).collect())
                .collect();
            // solve() already enforces the certificate; re-check the gap here
            // so a silent regression in deviation_gap would also be caught.
            let sol = solve_matrix_game(&rows, 1e-7)
                .unwrap_or_else(|e| panic!("trial {trial}: {e}"));
            let gap = deviation_gap(&rows, &sol.row_strategy, &sol.col_strategy, sol.value);
            assert!(gap <= 1e-7, "trial {trial}: gap {gap}");
        }
    }

    #[test]
    fn equal_budget_games_have_value_zero() {
        for (d, n) in [(3u32, 3usize), (5, 3), (6, 4)] {
            for agg in AggregationKind::ALL {
                let spec = GameSpec::new(d, d, n, agg).unwrap();
                let eq = solve_lp(&build_matrix(&spec).unwrap(), 1e-9).unwrap();
                assert!(
                    eq.value.abs() <= 1e-9,
                    "{spec}: value {} should be 0",
                    eq.value
                );
                assert!(eq.exploitability <= 1e-9);
            }
        }
    }

    #[test]
    fn lp_equilibrium_carries_normalized_strategies() {
        let spec = GameSpec::new(4, 3, 3, AggregationKind::Mto).unwrap();
        let eq = solve_lp(&build_matrix(&spec).unwrap(), 1e-9).unwrap();
        let sum_a: f64 = eq.strategy_a.support().iter().map(|(_, w)| w).sum();
        let sum_b: f64 = eq.strategy_b.support().iter().map(|(_, w)| w).sum();
        assert!((sum_a - 1.0).abs() <= 1e-12);
        assert!((sum_b - 1.0).abs() <= 1e-12);
        assert_eq!(eq.strategy_a.budget(), 4);
        assert_eq!(eq.strategy_b.budget(), 3);
    }
}
