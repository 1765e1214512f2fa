//! An exact payoff at a size where brute force is unthinkable: evaluating a
//! pair at n = 20 means weighing 20! (about 2.4 * 10^18) battlefield orderings.
//! The clash-matrix dynamic program gets the exact rational answer in well
//! under a second by counting those orderings instead of visiting them.
//!
//! Run with: cargo run --release --example large_game_payoff

use std::time::Instant;

use battlefields::{
    build_clash_matrix, detect_knots, payoff, AggregationKind, SymmetricStrategy,
};

fn main() {
    let n: usize = 20;
    let a = SymmetricStrategy::new(vec![5, 4, 3, 2, 2, 2, 1, 1, 1, 1, 1, 1, 1, 0, 0, 0, 0, 0, 0, 0])
        .unwrap();
    let b = SymmetricStrategy::new(vec![4, 4, 3, 3, 2, 2, 2, 1, 1, 1, 1, 1, 0, 0, 0, 0, 0, 0, 0, 0])
        .unwrap();
    println!("A = ({a})");
    println!("B = ({b})\n");

    let staircase = detect_knots(&build_clash_matrix(&a, &b).unwrap());
    println!(
        "{} knots, {} dp entries touched (budget for n = {n} is {})",
        staircase.knots().len(),
        staircase.dp_entries(),
        2 * n * (n + 1).pow(3)
    );

    for agg in AggregationKind::ALL {
        let start = Instant::now();
        let v = payoff(&a, &b, agg).unwrap();
        let elapsed = start.elapsed();
        let approx = num_rational_to_f64(&v);
        println!(
            "{agg:>12}: {approx:+.6} exact {} ({:.1} ms)",
            shorten(&v.to_string()),
            elapsed.as_secs_f64() * 1e3
        );
    }
}

fn num_rational_to_f64(v: &num_rational::BigRational) -> f64 {
    num_traits::ToPrimitive::to_f64(v).expect("payoff fits in f64")
}

// Payoff numerators at this size run to dozens of digits; keep the line
// readable.
fn shorten(s: &str) -> String {
    if s.len() <= 40 {
        s.to_string()
    } else {
        format!("{}...{} ({} chars)", &s[..18], &s[s.len() - 18..], s.len())
    }
}
