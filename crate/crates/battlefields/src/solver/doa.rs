//! Double-oracle equilibrium search.
//!
//! Both players start with the most even split of their budget. Each round
//! solves the game restricted to the strategies discovered so far, then asks
//! the best-response oracle whether either player can beat the restricted
//! equilibrium anywhere in their full strategy space. New best responses are
//! added and the loop repeats; once neither player can improve by more than
//! the tolerance, the restricted equilibrium is an equilibrium of the full
//! game to that tolerance.

use std::time::Instant;

use crate::model::{
    enumerate_symmetric_strategies, GameSpec, MixedStrategy, SymmetricStrategy,
};
use crate::solver::lp::solve_matrix_game;
use crate::solver::{Equilibrium, Method, PayoffCache, SolveError};

/// Knobs for [`solve_doa_with`].
#[derive(Debug, Clone, Copy)]
pub struct DoaOptions {
    /// Convergence tolerance on both best-response gaps.
    pub tol: f64,
    /// Prune best-response scans to assignments at most one above the
    /// opponent's tallest assignment (raised to ceil(d/n) when the budget
    /// forces taller parts).
    pub use_heuristic: bool,
    /// Iteration cap; `None` picks 10x the smaller strategy count, capped
    /// at 10,000.
    pub max_iterations: Option<u64>,
}

impl Default for DoaOptions {
    fn default() -> DoaOptions {
        DoaOptions {
            tol: 1e-9,
            use_heuristic: false,
            max_iterations: None,
        }
    }
}

/// One round of the loop, for inspection and tests.
#[derive(Debug, Clone)]
pub struct DoaIterationRecord {
    /// Value of the restricted game solved this round.
    pub restricted_value: f64,
    pub mixed_a: MixedStrategy,
    pub mixed_b: MixedStrategy,
    pub response_a: SymmetricStrategy,
    /// Payoff to A of `response_a` against `mixed_b`.
    pub response_a_value: f64,
    pub response_b: SymmetricStrategy,
    /// Payoff to B of `response_b` against `mixed_a`.
    pub response_b_value: f64,
}

/// Result of a converged run plus its full iteration trace.
#[derive(Debug, Clone)]
pub struct DoaOutcome {
    pub equilibrium: Equilibrium,
    pub trace: Vec<DoaIterationRecord>,
}

/// Double-oracle solve returning just the equilibrium.
pub fn solve_doa(
    spec: &GameSpec,
    use_heuristic: bool,
    tol: f64,
) -> Result<Equilibrium, SolveError> {
    let options = DoaOptions {
        tol,
        use_heuristic,
        ..DoaOptions::default()
    };
    solve_doa_with(spec, options).map(|outcome| outcome.equilibrium)
}

// Restricted-game LPs are solved far tighter than any caller tolerance; this
// only guards against a broken backend.
const INNER_LP_TOL: f64 = 1e-8;

pub fn solve_doa_with(spec: &GameSpec, options: DoaOptions) -> Result<DoaOutcome, SolveError> {
    let start = Instant::now();
    let all_a = enumerate_symmetric_strategies(spec.d_a(), spec.n());
    let all_b = enumerate_symmetric_strategies(spec.d_b(), spec.n());
    let mut cache = PayoffCache::new(&all_a, &all_b, spec.aggregation());

    let position_of = |set: &[SymmetricStrategy], s: &SymmetricStrategy| {
        set.iter()
            .position(|c| c == s)
            .expect("enumeration is complete")
    };
    let mut x_set = vec![position_of(
        &all_a,
        &SymmetricStrategy::most_even(spec.d_a(), spec.n()),
    )];
    let mut y_set = vec![position_of(
        &all_b,
        &SymmetricStrategy::most_even(spec.d_b(), spec.n()),
    )];

    let cap = options
        .max_iterations
        .unwrap_or_else(|| (10 * all_a.len().min(all_b.len()) as u64).min(10_000))
        .max(1);
    let mut trace = Vec::new();

    for iteration in 1..=cap {
        cache.ensure(
            x_set
                .iter()
                .flat_map(|&r| y_set.iter().map(move |&c| (r, c))),
        );
        let restricted: Vec<Vec<f64>> = x_set
            .iter()
            .map(|&r| y_set.iter().map(|&c| cache.get(r, c)).collect())
            .collect();
        let sol = solve_matrix_game(&restricted, INNER_LP_TOL)?;
        let value = sol.value;

        let picked_a: Vec<SymmetricStrategy> =
            x_set.iter().map(|&r| all_a[r].clone()).collect();
        let picked_b: Vec<SymmetricStrategy> =
            y_set.iter().map(|&c| all_b[c].clone()).collect();
        let mixed_a = MixedStrategy::from_weights(&picked_a, &sol.row_strategy, 1e-12)?;
        let mixed_b = MixedStrategy::from_weights(&picked_b, &sol.col_strategy, 1e-12)?;

        // Supports paired with weights, as enumeration indices.
        let support_b: Vec<(usize, f64)> = y_set
            .iter()
            .zip(&sol.col_strategy)
            .filter(|(_, w)| **w > 1e-12)
            .map(|(&c, &w)| (c, w))
            .collect();
        let support_a: Vec<(usize, f64)> = x_set
            .iter()
            .zip(&sol.row_strategy)
            .filter(|(_, w)| **w > 1e-12)
            .map(|(&r, &w)| (r, w))
            .collect();

        let (br_a, g_a) = oracle_scan(
            &mut cache,
            &all_a,
            heuristic_cap(&options, &mixed_b, spec.d_a(), spec.n()),
            &support_b,
            Side::Row,
        );
        let (br_b, g_b) = oracle_scan(
            &mut cache,
            &all_b,
            heuristic_cap(&options, &mixed_a, spec.d_b(), spec.n()),
            &support_a,
            Side::Col,
        );
        let gap_a = g_a - value;
        let gap_b = g_b + value;

        trace.push(DoaIterationRecord {
            restricted_value: value,
            mixed_a: mixed_a.clone(),
            mixed_b: mixed_b.clone(),
            response_a: all_a[br_a].clone(),
            response_a_value: g_a,
            response_b: all_b[br_b].clone(),
            response_b_value: g_b,
        });

        let a_known = x_set.contains(&br_a);
        let b_known = y_set.contains(&br_b);
        let converged =
            (a_known && b_known) || (gap_a <= options.tol && gap_b <= options.tol);
        if converged {
            return Ok(DoaOutcome {
                equilibrium: Equilibrium {
                    method: Method::Doa,
                    value,
                    strategy_a: mixed_a,
                    strategy_b: mixed_b,
                    iterations: iteration,
                    exploitability: gap_a.max(gap_b).max(0.0),
                    wall_time: start.elapsed(),
                },
                trace,
            });
        }
        if !a_known {
            x_set.push(br_a);
        }
        if !b_known {
            y_set.push(br_b);
        }
        if iteration == cap {
            return Err(SolveError::NonConvergence {
                iterations: cap,
                gap_a,
                gap_b,
                best: Box::new(Equilibrium {
                    method: Method::Doa,
                    value,
                    strategy_a: mixed_a,
                    strategy_b: mixed_b,
                    iterations: cap,
                    exploitability: gap_a.max(gap_b).max(0.0),
                    wall_time: start.elapsed(),
                }),
            });
        }
    }
    unreachable!("loop either converges or errors at the cap");
}

#[derive(Clone, Copy)]
enum Side {
    Row,
    Col,
}

fn heuristic_cap(
    options: &DoaOptions,
    opponent: &MixedStrategy,
    d_resp: u32,
    n: usize,
) -> Option<u32> {
    if options.use_heuristic {
        Some((opponent.max_assignment() + 1).max(d_resp.div_ceil(n as u32)))
    } else {
        None
    }
}

// Best response over `candidates` (optionally pruned to assignments <= cap)
// against the opponent mix given as (enumeration index, weight) pairs.
// Returns (candidate index, payoff to the responder); ties keep the first.
fn oracle_scan(
    cache: &mut PayoffCache,
    candidates: &[SymmetricStrategy],
    cap: Option<u32>,
    opponent: &[(usize, f64)],
    side: Side,
) -> (usize, f64) {
    let admissible: Vec<usize> = (0..candidates.len())
        .filter(|&i| cap.is_none_or(|cap| candidates[i].max_assignment() <= cap))
        .collect();
    cache.ensure(admissible.iter().flat_map(|&i| {
        opponent.iter().map(move |&(o, _)| match side {
            Side::Row => (i, o),
            Side::Col => (o, i),
        })
    }));
    let mut best: Option<(usize, f64)> = None;
    for &i in &admissible {
        let v: f64 = opponent
            .iter()
            .map(|&(o, w)| match side {
                Side::Row => w * cache.get(i, o),
                Side::Col => -w * cache.get(o, i),
            })
            .sum();
        if best.is_none_or(|(_, bv)| v > bv) {
            best = Some((i, v));
        }
    }
    best.expect("candidate set is never empty")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::build_matrix;
    use crate::model::AggregationKind;
    use crate::solver::lp::solve_lp;

    #[test]
    fn equal_budget_games_converge_to_zero() {
        let spec = GameSpec::new(3, 3, 3, AggregationKind::Mto).unwrap();
        for heuristic in [false, true] {
            let eq = solve_doa(&spec, heuristic, 1e-9).unwrap();
            assert!(eq.value.abs() <= 1e-9, "heuristic={heuristic}");
            assert!(eq.exploitability <= 1e-9);
        }
    }

    #[test]
    fn tiny_game_converges_immediately() {
        let spec = GameSpec::new(2, 2, 2, AggregationKind::Mto).unwrap();
        let eq = solve_doa(&spec, false, 1e-9).unwrap();
        assert_eq!(eq.value, 0.0);
        assert!(eq.iterations <= 2, "took {} iterations", eq.iterations);
    }

    #[test]
    fn unequal_budgets_match_the_full_lp() {
        let spec = GameSpec::new(4, 3, 3, AggregationKind::Mto).unwrap();
        let lp = solve_lp(&build_matrix(&spec).unwrap(), 1e-9).unwrap();
        for heuristic in [false, true] {
            let eq = solve_doa(&spec, heuristic, 1e-9).unwrap();
            assert!(
                (eq.value - lp.value).abs() <= 1e-6,
                "heuristic={heuristic}: doa {} vs lp {}",
                eq.value,
                lp.value
            );
        }
    }

    #[test]
    fn trace_reconstructs_bracketing_bounds() {
        // Rebuild each round's strategy sets from the trace, then bound the
        // true value from below (A's rows vs every column) and above (every
        // row vs B's columns). The bounds must be monotone and meet at the
        // end.
        let tol = 1e-9;
        for (d_a, d_b, agg) in [
            (4u32, 3u32, AggregationKind::Mto),
            (5, 5, AggregationKind::Majoritarian),
            (6, 4, AggregationKind::Blotto),
        ] {
            let spec = GameSpec::new(d_a, d_b, 3, agg).unwrap();
            let outcome = solve_doa_with(&spec, DoaOptions::default()).unwrap();
            let full = build_matrix(&spec).unwrap().to_f64_rows();
            let rows_all: Vec<usize> = (0..full.len()).collect();
            let cols_all: Vec<usize> = (0..full[0].len()).collect();

            let all_a = enumerate_symmetric_strategies(d_a, 3);
            let all_b = enumerate_symmetric_strategies(d_b, 3);
            let mut x_set = vec![all_a
                .iter()
                .position(|s| *s == SymmetricStrategy::most_even(d_a, 3))
                .unwrap()];
            let mut y_set = vec![all_b
                .iter()
                .position(|s| *s == SymmetricStrategy::most_even(d_b, 3))
                .unwrap()];

            let mut lower = f64::NEG_INFINITY;
            let mut upper = f64::INFINITY;
            for record in &outcome.trace {
                let lo = restricted_value(&full, &x_set, &cols_all);
                let hi = restricted_value(&full, &rows_all, &y_set);
                assert!(lo <= hi + 1e-9, "{spec}: bounds crossed: {lo} > {hi}");
                assert!(lo >= lower - 1e-9, "{spec}: lower bound regressed");
                assert!(hi <= upper + 1e-9, "{spec}: upper bound regressed");
                lower = lower.max(lo);
                upper = upper.min(hi);

                let ra = all_a.iter().position(|s| *s == record.response_a).unwrap();
                let rb = all_b.iter().position(|s| *s == record.response_b).unwrap();
                if !x_set.contains(&ra) {
                    x_set.push(ra);
                }
                if !y_set.contains(&rb) {
                    y_set.push(rb);
                }
            }
            assert!(
                upper - lower <= 2.0 * tol + 1e-9,
                "{spec}: final bracket [{lower}, {upper}] too wide"
            );
        }
    }

    fn restricted_value(full: &[Vec<f64>], rows: &[usize], cols: &[usize]) -> f64 {
        let sub: Vec<Vec<f64>> = rows
            .iter()
            .map(|&r| cols.iter().map(|&c| full[r][c]).collect())
            .collect();
        solve_matrix_game(&sub, 1e-8).unwrap().value
    }

    #[test]
    fn iteration_cap_reports_diagnostics() {
        let spec = GameSpec::new(7, 6, 4, AggregationKind::Mto).unwrap();
        let options = DoaOptions {
            max_iterations: Some(1),
            ..DoaOptions::default()
        };
        match solve_doa_with(&spec, options) {
            Err(SolveError::NonConvergence { iterations, best, .. }) => {
                assert_eq!(iterations, 1);
                assert_eq!(best.method, Method::Doa);
            }
            other => panic!("expected non-convergence, got {other:?}"),
        }
    }

    #[test]
    fn zero_budget_game_is_all_ties() {
        let spec = GameSpec::new(0, 0, 2, AggregationKind::Blotto).unwrap();
        let eq = solve_doa(&spec, true, 1e-9).unwrap();
        assert_eq!(eq.value, 0.0);
        assert_eq!(eq.strategy_a.support()[0].0.parts(), &[0, 0]);
    }
}
