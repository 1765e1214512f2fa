//! Lists the symmetric strategies of one player: every way to split a budget
//! across identical battlefields, order ignored.
//!
//! Run with: cargo run --example enumerate_strategies

use battlefields::{count_symmetric_strategies, enumerate_symmetric_strategies, SymmetricStrategy};

fn main() {
    let (d, n) = (7, 3);
    println!("splits of {d} units over {n} battlefields:");
    for s in enumerate_symmetric_strategies(d, n) {
        println!("  {s}");
    }
    println!("most even: {}", SymmetricStrategy::most_even(d, n));

    // The count grows like the partition function, far slower than the
    // d^n orderings the naive formulation would enumerate.
    println!("\nstrategy counts for larger games:");
    for (d, n) in [(10u32, 5usize), (20, 10), (25, 20), (50, 30)] {
        println!(
            "  d = {d:2}, n = {n:2}: {:>10} symmetric strategies",
            count_symmetric_strategies(d, n)
        );
    }
}
