//! Builds the full payoff matrix of a small game, prints it, and shows the
//! save/load round trip that the solve and bench commands rely on.
//!
//! Run with: cargo run --example payoff_matrix

use std::error::Error;

use battlefields::{build_matrix, AggregationKind, GameSpec, PayoffMatrix};

fn main() -> Result<(), Box<dyn Error>> {
    let spec = GameSpec::new(4, 3, 3, AggregationKind::Mto)?;
    let matrix = build_matrix(&spec)?;
    println!("{spec}: {} x {} matrix\n", matrix.n_rows(), matrix.n_cols());

    // Row player on the left, column player on top, exact rationals inside.
    print!("{:>10}", "");
    for c in matrix.col_strategies() {
        print!("{:>10}", format!("({c})"));
    }
    println!();
    for (r, row_strategy) in matrix.row_strategies().iter().enumerate() {
        print!("{:>10}", format!("({row_strategy})"));
        for c in 0..matrix.n_cols() {
            print!("{:>10}", matrix.entry(r, c).to_string());
        }
        println!();
    }

    let path = std::env::temp_dir().join("payoff_matrix_example.game");
    matrix.save(&path)?;
    let reloaded = PayoffMatrix::load(&path)?;
    assert_eq!(reloaded, matrix, "round trip must preserve every entry");
    println!("\nsaved to {} and reloaded intact", path.display());
    std::fs::remove_file(&path)?;
    Ok(())
}
