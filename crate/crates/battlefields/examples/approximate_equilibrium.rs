//! Multiplicative weights as a cheap approximate solver: more steps buy a
//! less exploitable strategy pair, without ever touching an LP.
//!
//! Run with: cargo run --example approximate_equilibrium

use std::error::Error;

use battlefields::{build_matrix, solve_lp, solve_mwu, AggregationKind, GameSpec};

fn main() -> Result<(), Box<dyn Error>> {
    let spec = GameSpec::new(7, 7, 5, AggregationKind::Majoritarian)?;
    let matrix = build_matrix(&spec)?;
    let exact = solve_lp(&matrix, 1e-9)?;
    println!("{spec}");
    println!("exact value for reference: {:.6}\n", exact.value);

    println!("{:>8}  {:>12}  {:>16}", "steps", "value", "exploitability");
    for steps in [100u64, 1_000, 10_000, 100_000] {
        let eq = solve_mwu(&matrix, 0.1, steps)?;
        println!(
            "{steps:>8}  {:>12.6}  {:>16.6}",
            eq.value, eq.exploitability
        );
    }
    println!("\nthe pair is an epsilon-equilibrium with epsilon = exploitability;");
    println!("step counts trade time for epsilon, no tolerance knob needed");
    Ok(())
}
