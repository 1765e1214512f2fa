//! Runs the double-oracle loop and prints what it explores: each round's
//! restricted-game value and the best responses that grow the strategy sets.
//! Finishes by checking the answer against the full-matrix LP, with and
//! without the best-response pruning heuristic.
//!
//! Run with: cargo run --example double_oracle

use std::error::Error;

use battlefields::{
    build_matrix, solve_doa_with, solve_lp, AggregationKind, DoaOptions, GameSpec,
};

fn main() -> Result<(), Box<dyn Error>> {
    let spec = GameSpec::new(8, 7, 5, AggregationKind::Mto)?;
    println!("{spec}\n");

    let outcome = solve_doa_with(&spec, DoaOptions::default())?;
    println!("round  restricted value  response A  response B");
    for (i, r) in outcome.trace.iter().enumerate() {
        println!(
            "{:>5}  {:>16.6}  ({})  ({})",
            i + 1,
            r.restricted_value,
            r.response_a,
            r.response_b
        );
    }
    let eq = &outcome.equilibrium;
    println!(
        "\nconverged after {} rounds: value {:.6}, exploitability {:.2e}",
        eq.iterations, eq.value, eq.exploitability
    );
    println!(
        "final supports: {} of {} rows, {} of {} columns",
        eq.strategy_a.support().len(),
        battlefields::count_symmetric_strategies(spec.d_a(), spec.n()),
        eq.strategy_b.support().len(),
        battlefields::count_symmetric_strategies(spec.d_b(), spec.n()),
    );

    // The pruned oracle looks at far fewer candidates yet lands on the same
    // value; the full LP agrees with both.
    let pruned = solve_doa_with(
        &spec,
        DoaOptions {
            use_heuristic: true,
            ..DoaOptions::default()
        },
    )?;
    let lp = solve_lp(&build_matrix(&spec)?, 1e-9)?;
    println!("\nvalue, three ways:");
    println!("  double oracle            {:.9}", eq.value);
    println!("  double oracle, pruned    {:.9}", pruned.equilibrium.value);
    println!("  full-matrix LP           {:.9}", lp.value);
    assert!((eq.value - lp.value).abs() <= 1e-6);
    assert!((pruned.equilibrium.value - eq.value).abs() <= 1e-9);
    Ok(())
}
