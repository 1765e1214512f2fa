//! Equilibrium solvers: exact LP over the full matrix, a double-oracle loop
//! that grows restricted strategy sets on demand, and a multiplicative-
//! weights approximation. All of them report a measured exploitability, so a
//! wrong equilibrium cannot pass silently.

mod doa;
mod lp;
mod mwu;

pub use doa::{solve_doa, solve_doa_with, DoaIterationRecord, DoaOptions, DoaOutcome};
pub use lp::{solve_lp, solve_matrix_game, MatrixGameSolution, MatrixGameSolver, SimplexSolver};
pub use mwu::{mwu_column_game, solve_mwu, MwuWeights};

use rayon::prelude::*;
use std::collections::HashMap;
use std::fmt;
use std::time::Duration;

use crate::clash;
use crate::model::{
    enumerate_symmetric_strategies, AggregationKind, GameSpec, MixedStrategy, ModelError,
    SymmetricStrategy,
};

/// Which algorithm produced an equilibrium.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    Lp,
    Doa,
    Mwu,
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Method::Lp => "lp",
            Method::Doa => "doa",
            Method::Mwu => "mwu",
        })
    }
}

/// A solved game: mixed strategies for both players, the game value from the
/// first player's perspective, and how hard the result can be punished.
#[derive(Debug, Clone)]
pub struct Equilibrium {
    pub method: Method,
    pub value: f64,
    pub strategy_a: MixedStrategy,
    pub strategy_b: MixedStrategy,
    pub iterations: u64,
    /// Largest gain either player gets by deviating to a best response.
    pub exploitability: f64,
    pub wall_time: Duration,
}

/// Best response of one player to the opponent's mixed strategy `xi`.
///
/// The responder is inferred from `xi`'s budget: against a strategy spending
/// `d_a` the responder spends `d_b`, and vice versa. Candidates are scanned
/// in enumeration order, in parallel, and ties keep the earliest candidate.
///
/// With `use_heuristic`, candidates are pruned to those whose largest
/// assignment is at most one above `xi`'s largest assignment: outbidding a
/// field ever needs one unit more than the opponent ever puts there. When
/// the responder's budget forces larger assignments (`ceil(d/n)` above the
/// cap), the cap is raised to `ceil(d/n)`; every part of the most even split
/// then already exceeds everything the opponent has, so it stays a true best
/// response.
pub fn best_response(
    xi: &MixedStrategy,
    spec: &GameSpec,
    use_heuristic: bool,
) -> Result<(SymmetricStrategy, f64), SolveError> {
    if xi.n() != spec.n() {
        return Err(SolveError::FieldCountMismatch {
            strategy: xi.n(),
            spec: spec.n(),
        });
    }
    let d_resp = if xi.budget() == spec.d_a() {
        spec.d_b()
    } else if xi.budget() == spec.d_b() {
        spec.d_a()
    } else {
        return Err(SolveError::BudgetMismatch {
            strategy: xi.budget(),
            d_a: spec.d_a(),
            d_b: spec.d_b(),
        });
    };
    let candidates = enumerate_symmetric_strategies(d_resp, spec.n());
    let cap = heuristic_cap(xi, d_resp, spec.n());
    let agg = spec.aggregation();
    let best = candidates
        .par_iter()
        .enumerate()
        .filter(|(_, c)| !use_heuristic || c.max_assignment() <= cap)
        .map(|(idx, c)| (idx, expected_payoff_against(c, xi, agg)))
        .reduce_with(|a, b| if better(a, b) { a } else { b })
        .expect("candidate set is never empty");
    Ok((candidates[best.0].clone(), best.1))
}

// Prefer the higher value; on exact ties, the lower enumeration index.
fn better(a: (usize, f64), b: (usize, f64)) -> bool {
    a.1 > b.1 || (a.1 == b.1 && a.0 < b.0)
}

fn heuristic_cap(xi: &MixedStrategy, d_resp: u32, n: usize) -> u32 {
    (xi.max_assignment() + 1).max(d_resp.div_ceil(n as u32))
}

// Expected payoff to `candidate` when the opponent mixes per `xi`.
fn expected_payoff_against(
    candidate: &SymmetricStrategy,
    xi: &MixedStrategy,
    agg: AggregationKind,
) -> f64 {
    xi.support()
        .iter()
        .map(|(s, w)| w * rational_to_f64(&clash::payoff(candidate, s, agg).expect("equal n")))
        .sum()
}

pub(crate) fn rational_to_f64(r: &num_rational::BigRational) -> f64 {
    num_traits::ToPrimitive::to_f64(r).expect("payoff fits in f64")
}

/// Re-measures how exploitable an equilibrium is, with exhaustive
/// (non-heuristic) best-response scans against both returned strategies.
pub fn measure_exploitability(eq: &Equilibrium, spec: &GameSpec) -> Result<f64, SolveError> {
    let (_, gain_a) = best_response(&eq.strategy_b, spec, false)?;
    let (_, gain_b) = best_response(&eq.strategy_a, spec, false)?;
    let gap_a = gain_a - eq.value;
    let gap_b = gain_b + eq.value;
    Ok(gap_a.max(gap_b).max(0.0))
}

// Exact payoffs between enumerated strategies of the two players, filled in
// parallel batches and read as f64. Keyed by enumeration indices; one cache
// lives for one solve.
pub(crate) struct PayoffCache<'a> {
    rows: &'a [SymmetricStrategy],
    cols: &'a [SymmetricStrategy],
    agg: AggregationKind,
    values: HashMap<(usize, usize), f64>,
}

impl<'a> PayoffCache<'a> {
    pub(crate) fn new(
        rows: &'a [SymmetricStrategy],
        cols: &'a [SymmetricStrategy],
        agg: AggregationKind,
    ) -> Self {
        PayoffCache {
            rows,
            cols,
            agg,
            values: HashMap::new(),
        }
    }

    pub(crate) fn ensure(&mut self, pairs: impl Iterator<Item = (usize, usize)>) {
        let missing: Vec<(usize, usize)> = pairs
            .filter(|key| !self.values.contains_key(key))
            .collect();
        let computed: Vec<f64> = missing
            .par_iter()
            .map(|&(r, c)| {
                rational_to_f64(
                    &clash::payoff(&self.rows[r], &self.cols[c], self.agg).expect("equal n"),
                )
            })
            .collect();
        self.values.extend(missing.into_iter().zip(computed));
    }

    // Payoff to the row player; `ensure` must have covered the key.
    pub(crate) fn get(&self, r: usize, c: usize) -> f64 {
        self.values[&(r, c)]
    }
}

/// Errors from the solver layer.
#[derive(Debug)]
pub enum SolveError {
    EmptyMatrix,
    RaggedMatrix,
    PhiOutOfRange(f64),
    ZeroSteps,
    EntriesOutOfRange { max_abs: f64 },
    FieldCountMismatch { strategy: usize, spec: usize },
    BudgetMismatch { strategy: u32, d_a: u32, d_b: u32 },
    Unbounded,
    PivotLimit,
    Certificate { gap: f64, tol: f64 },
    NonConvergence { iterations: u64, gap_a: f64, gap_b: f64, best: Box<Equilibrium> },
    Model(ModelError),
}

impl fmt::Display for SolveError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SolveError::EmptyMatrix => write!(f, "payoff matrix has no rows or no columns"),
            SolveError::RaggedMatrix => write!(f, "payoff matrix rows differ in length"),
            SolveError::PhiOutOfRange(phi) => {
                write!(f, "phi = {phi} outside the valid range (0, 0.5]")
            }
            SolveError::ZeroSteps => write!(f, "step count must be at least 1"),
            SolveError::EntriesOutOfRange { max_abs } => {
                write!(f, "matrix entries reach |{max_abs}| after scaling, expected [-1, 1]")
            }
            SolveError::FieldCountMismatch { strategy, spec } => {
                write!(f, "strategy has {strategy} battlefields, spec has {spec}")
            }
            SolveError::BudgetMismatch { strategy, d_a, d_b } => {
                write!(f, "strategy spends {strategy}, spec budgets are {d_a} and {d_b}")
            }
            SolveError::Unbounded => write!(f, "linear program is unbounded"),
            SolveError::PivotLimit => write!(f, "simplex pivot limit exceeded"),
            SolveError::Certificate { gap, tol } => {
                write!(f, "equilibrium certificate violated: deviation gap {gap} > {tol}")
            }
            SolveError::NonConvergence { iterations, gap_a, gap_b, .. } => {
                write!(
                    f,
                    "double oracle did not converge in {iterations} iterations \
                     (best-response gaps {gap_a} / {gap_b})"
                )
            }
            SolveError::Model(e) => write!(f, "{e}"),
        }
    }
}

impl std::error::Error for SolveError {
    fn source(&self) -> Option<&(dyn std::error::Error + 'static)> {
        match self {
            SolveError::Model(e) => Some(e),
            _ => None,
        }
    }
}

impl From<ModelError> for SolveError {
    fn from(e: ModelError) -> Self {
        SolveError::Model(e)
    }
}
