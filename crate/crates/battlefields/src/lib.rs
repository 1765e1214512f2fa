//! Exact payoffs and equilibrium solvers for resource-allocation conflicts
//! over multiple battlefields.
//!
//! Two players spread integer budgets over `n` battlefields; each field goes
//! to the larger assignment and a chosen aggregation rule turns the
//! won/lost/tied counts into a zero-sum payoff. Symmetrizing over
//! battlefield order shrinks the strategy space to integer partitions, and a
//! rook-counting dynamic program over the clash matrix evaluates exact
//! expected payoffs in polynomial time. On top of that sit a payoff-matrix
//! builder with a cache format, a linear-programming equilibrium solver, a
//! double-oracle loop with a pruning heuristic, and a multiplicative-weights
//! approximation, plus brute-force oracles that everything fast is tested
//! against.
//!
//! The `examples/` directory walks through each capability; the `cli` module
//! backs the thin `battlefields` binary.

#![warn(clippy::all)]

pub mod clash;
pub mod cli;
pub mod matrix;
pub mod model;
pub mod oracle;
pub mod solver;

pub use clash::{
    build_clash_matrix, detect_knots, payoff, rect_count, rook_counts, ClashError, ClashMatrix,
    KnotStaircase, RookCountTable,
};
pub use matrix::{build_matrix, MatrixError, PayoffMatrix};
pub use model::{
    count_symmetric_strategies, enumerate_symmetric_strategies, AggregationKind, GameSpec,
    MixedStrategy, ModelError, SymmetricStrategy,
};
pub use oracle::{brute_rook_counts, full_game_best_response, naive_payoff, OracleError};
pub use solver::{
    best_response, measure_exploitability, solve_doa, solve_doa_with, solve_lp, solve_matrix_game,
    solve_mwu, DoaIterationRecord, DoaOptions, DoaOutcome, Equilibrium, MatrixGameSolution,
    MatrixGameSolver, Method, SimplexSolver, SolveError,
};
