//! Solves a game exactly by linear programming over the full payoff matrix
//! and verifies the result the hard way: no pure strategy on either side may
//! beat the returned pair by more than the tolerance.
//!
//! Run with: cargo run --example lp_equilibrium

use std::error::Error;

use battlefields::{
    build_matrix, measure_exploitability, solve_lp, AggregationKind, GameSpec, MixedStrategy,
};

fn print_mixed(label: &str, mixed: &MixedStrategy) {
    println!("{label}:");
    for (s, w) in mixed.support() {
        println!("  ({s}) with probability {w:.6}");
    }
}

fn main() -> Result<(), Box<dyn Error>> {
    // Unequal budgets make the value nonzero and the supports interesting.
    let spec = GameSpec::new(6, 5, 4, AggregationKind::Mto)?;
    let matrix = build_matrix(&spec)?;
    let eq = solve_lp(&matrix, 1e-9)?;

    println!("{spec}");
    println!("value (payoff to A): {:.6}", eq.value);
    println!("simplex pivots: {}\n", eq.iterations);
    print_mixed("A mixes", &eq.strategy_a);
    print_mixed("B mixes", &eq.strategy_b);

    // Independent re-measurement with exhaustive best-response scans.
    let gap = measure_exploitability(&eq, &spec)?;
    println!("\nbest-response gap, re-measured: {gap:.2e}");
    assert!(gap <= 1e-9, "an exact solve must not be exploitable");
    Ok(())
}
