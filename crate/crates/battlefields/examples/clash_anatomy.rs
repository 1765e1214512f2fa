//! Walks through one payoff evaluation in slow motion: the clash matrix of a
//! strategy pair, the knot staircase the dynamic program descends, the
//! permutation counts it produces, and the resulting exact payoffs.
//!
//! Run with: cargo run --example clash_anatomy

use battlefields::{
    build_clash_matrix, detect_knots, naive_payoff, payoff, rook_counts, AggregationKind,
    SymmetricStrategy,
};

fn main() {
    let a = SymmetricStrategy::new(vec![3, 1, 0]).unwrap();
    let b = SymmetricStrategy::new(vec![2, 2, 0]).unwrap();
    println!("A = ({a}) against B = ({b})\n");

    // Rows follow A's parts largest first, columns B's likewise, so wins
    // pool in the upper right and losses in the lower left.
    let clash = build_clash_matrix(&a, &b).unwrap();
    println!("clash matrix (+1 win, 0 tie, -1 loss):\n{clash}");

    let staircase = detect_knots(&clash);
    println!("knots: {:?}", staircase.knots());
    println!("dp table entries along the staircase: {}\n", staircase.dp_entries());

    // h(k_W, k_L) counts the battlefield orderings with exactly k_W wins
    // and k_L losses; they always total n!.
    let counts = rook_counts(&clash);
    println!("orderings by outcome (wins, losses -> count):");
    for (k_w, k_l, h) in counts.non_zero() {
        println!("  ({k_w}, {k_l}) -> {h}");
    }
    println!("total: {} = 3!\n", counts.total());

    for agg in AggregationKind::ALL {
        let fast = payoff(&a, &b, agg).unwrap();
        let brute = naive_payoff(&a, &b, agg).unwrap();
        assert_eq!(fast, brute, "fast path must match brute enumeration");
        println!("{agg:>12} payoff: {fast} (brute-force agrees)");
    }
}
