//! Multiplicative weights update, run from the column player's side.
//!
//! The core loop is deliberately literal: uniform start, per-step column
//! best response, weight decay by (1 - phi * payoff), renormalization at the
//! end of each step. The returned pair is the row iterate that suffered the
//! smallest best-response payoff, and the empirical frequency of the column
//! best responses.

use std::time::Instant;

use crate::matrix::PayoffMatrix;
use crate::model::{AggregationKind, MixedStrategy};
use crate::solver::lp::deviation_gap;
use crate::solver::{Equilibrium, Method, SolveError};

/// Weight vectors produced by the update loop, aligned with the matrix axes.
#[derive(Debug, Clone)]
pub struct MwuWeights {
    /// Distribution over rows (the player the weights are maintained for).
    pub row: Vec<f64>,
    /// Normalized best-response counts over columns.
    pub col: Vec<f64>,
}

/// Runs the update loop on the column player's payoff matrix.
///
/// `column_payoffs[i][j]` is what the column player wins when the row player
/// picks `i` and the column player picks `j`; entries must lie in [-1, 1] so
/// the decay factor stays positive for every phi in (0, 0.5].
pub fn mwu_column_game(
    column_payoffs: &[Vec<f64>],
    phi: f64,
    steps: u64,
) -> Result<MwuWeights, SolveError> {
    if column_payoffs.is_empty() || column_payoffs[0].is_empty() {
        return Err(SolveError::EmptyMatrix);
    }
    let k = column_payoffs[0].len();
    if column_payoffs.iter().any(|r| r.len() != k) {
        return Err(SolveError::RaggedMatrix);
    }
    if !(phi > 0.0 && phi <= 0.5) {
        return Err(SolveError::PhiOutOfRange(phi));
    }
    if steps == 0 {
        return Err(SolveError::ZeroSteps);
    }
    let max_abs = column_payoffs
        .iter()
        .flatten()
        .fold(0.0f64, |m, &a| m.max(a.abs()));
    if !(max_abs <= 1.0) {
        return Err(SolveError::EntriesOutOfRange { max_abs });
    }

    let m = column_payoffs.len();
    let mut p = vec![1.0 / m as f64; m];
    let mut p_best = p.clone();
    // Payoffs never exceed 1, so the first step always takes a snapshot.
    let mut smallest_column_payoff = 1.0f64;
    let mut j_summed = vec![0.0f64; k];

    for _ in 0..steps {
        let mut column_values = vec![0.0f64; k];
        for (pi, row) in p.iter().zip(column_payoffs) {
            for (cv, a) in column_values.iter_mut().zip(row) {
                *cv += pi * a;
            }
        }
        // First maximizer, for determinism.
        let (best_j, best_value) = column_values
            .iter()
            .enumerate()
            .fold((0usize, f64::NEG_INFINITY), |acc, (j, &v)| {
                if v > acc.1 {
                    (j, v)
                } else {
                    acc
                }
            });
        if best_value < smallest_column_payoff {
            smallest_column_payoff = best_value;
            p_best.copy_from_slice(&p);
        }
        j_summed[best_j] += 1.0;

        for (pi, row) in p.iter_mut().zip(column_payoffs) {
            *pi *= 1.0 - phi * row[best_j];
        }
        let total: f64 = p.iter().sum();
        for pi in p.iter_mut() {
            *pi /= total;
        }
    }

    let count: f64 = j_summed.iter().sum();
    for c in j_summed.iter_mut() {
        *c /= count;
    }
    Ok(MwuWeights {
        row: p_best,
        col: j_summed,
    })
}

/// Approximate equilibrium of an enumerated game via the update loop.
///
/// Takes the usual row-player payoff matrix; the column player's matrix is
/// its negation, with win-count payoffs divided by the battlefield count so
/// every entry lands in [-1, 1]. Value and exploitability are reported back
/// in the original payoff units.
pub fn solve_mwu(
    matrix: &PayoffMatrix,
    phi: f64,
    steps: u64,
) -> Result<Equilibrium, SolveError> {
    let start = Instant::now();
    let scale = match matrix.spec().aggregation() {
        AggregationKind::Blotto => matrix.spec().n() as f64,
        AggregationKind::Mto | AggregationKind::Majoritarian => 1.0,
    };
    let rows = matrix.to_f64_rows();
    let column_payoffs: Vec<Vec<f64>> = rows
        .iter()
        .map(|row| row.iter().map(|a| -a / scale).collect())
        .collect();
    let weights = mwu_column_game(&column_payoffs, phi, steps)?;

    let value: f64 = rows
        .iter()
        .zip(&weights.row)
        .map(|(row, &xi)| {
            xi * row
                .iter()
                .zip(&weights.col)
                .map(|(a, &yj)| a * yj)
                .sum::<f64>()
        })
        .sum();
    let exploitability = deviation_gap(&rows, &weights.row, &weights.col, value);
    let strategy_a = MixedStrategy::from_weights(matrix.row_strategies(), &weights.row, 0.0)?;
    let strategy_b = MixedStrategy::from_weights(matrix.col_strategies(), &weights.col, 0.0)?;
    Ok(Equilibrium {
        method: Method::Mwu,
        value,
        strategy_a,
        strategy_b,
        iterations: steps,
        exploitability,
        wall_time: start.elapsed(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::build_matrix;
    use crate::model::GameSpec;

    #[test]
    fn single_cell_game_returns_point_masses() {
        let w = mwu_column_game(&[vec![0.0]], 0.1, 100).unwrap();
        assert_eq!(w.row, vec![1.0]);
        assert_eq!(w.col, vec![1.0]);
    }

    #[test]
    fn matching_pennies_stays_near_uniform() {
        // Column player's form of [[1,-1],[-1,1]].
        let col = vec![vec![-1.0, 1.0], vec![1.0, -1.0]];
        let w = mwu_column_game(&col, 0.1, 10_000).unwrap();
        let rows = vec![vec![1.0, -1.0], vec![-1.0, 1.0]];
        let value: f64 = (0..2)
            .map(|i| (0..2).map(|j| w.row[i] * rows[i][j] * w.col[j]).sum::<f64>())
            .sum();
        let gap = deviation_gap(&rows, &w.row, &w.col, value);
        assert!(gap <= 0.05, "exploitability {gap}");
    }

    #[test]
    fn parameter_validation() {
        let m = vec![vec![0.0]];
        assert!(matches!(
            mwu_column_game(&m, 0.0, 10),
            Err(SolveError::PhiOutOfRange(_))
        ));
        assert!(matches!(
            mwu_column_game(&m, 0.6, 10),
            Err(SolveError::PhiOutOfRange(_))
        ));
        assert!(matches!(
            mwu_column_game(&m, 0.1, 0),
            Err(SolveError::ZeroSteps)
        ));
        assert!(matches!(
            mwu_column_game(&[vec![1.5]], 0.1, 10),
            Err(SolveError::EntriesOutOfRange { .. })
        ));
        assert!(matches!(
            mwu_column_game(&[], 0.1, 10),
            Err(SolveError::EmptyMatrix)
        ));
    }

    #[test]
    fn skew_symmetric_game_lands_near_zero() {
        let spec = GameSpec::new(3, 3, 3, AggregationKind::Mto).unwrap();
        let m = build_matrix(&spec).unwrap();
        let eq = solve_mwu(&m, 0.1, 10_000).unwrap();
        assert!(eq.value.abs() <= 0.05, "value {}", eq.value);
        assert!(eq.exploitability <= 0.05, "exploitability {}", eq.exploitability);
    }

    #[test]
    fn blotto_payoffs_are_rescaled_into_range() {
        let spec = GameSpec::new(4, 2, 3, AggregationKind::Blotto).unwrap();
        let m = build_matrix(&spec).unwrap();
        // Raw blotto payoffs reach past 1, so this errors without rescaling.
        let eq = solve_mwu(&m, 0.5, 1_000).unwrap();
        // A out-budgets B everywhere; the value must stay in original units,
        // well above the [-1, 1] band the loop works in.
        assert!(eq.value > 1.0, "value {}", eq.value);
    }

    #[test]
    fn longer_runs_do_not_get_much_worse() {
        let spec = GameSpec::new(4, 3, 3, AggregationKind::Mto).unwrap();
        let m = build_matrix(&spec).unwrap();
        let mut previous = f64::INFINITY;
        for steps in [100u64, 1_000, 10_000] {
            let eq = solve_mwu(&m, 0.1, steps).unwrap();
            assert!(
                eq.exploitability <= previous * 1.1 + 1e-12,
                "steps {steps}: {} after {previous}",
                eq.exploitability
            );
            previous = eq.exploitability;
        }
    }
}
