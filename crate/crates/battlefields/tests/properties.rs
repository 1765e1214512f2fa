//! Randomized algebraic properties of the payoff machinery. These hold for
//! every pair of strategies, so they get generated inputs rather than fixed
//! fixtures.

use std::collections::HashSet;

use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;

use battlefields::clash::factorial;
use battlefields::{
    build_clash_matrix, count_symmetric_strategies, enumerate_symmetric_strategies, payoff,
    rook_counts, AggregationKind, SymmetricStrategy,
};

fn strategy_pair() -> impl Strategy<Value = (SymmetricStrategy, SymmetricStrategy)> {
    (2..=7usize)
        .prop_flat_map(|n| {
            (
                prop::collection::vec(0u32..=6, n),
                prop::collection::vec(0u32..=6, n),
            )
        })
        .prop_map(|(a, b)| {
            (
                SymmetricStrategy::from_unsorted(a).unwrap(),
                SymmetricStrategy::from_unsorted(b).unwrap(),
            )
        })
}

proptest! {
    // Swapping the players negates the payoff, and the payoff never leaves
    // the range of the aggregation rule.
    #[test]
    fn payoff_is_antisymmetric_and_bounded((a, b) in strategy_pair()) {
        for agg in AggregationKind::ALL {
            let forward = payoff(&a, &b, agg).unwrap();
            let backward = payoff(&b, &a, agg).unwrap();
            prop_assert_eq!(&forward, &(-backward));
            let bound = match agg {
                AggregationKind::Blotto => a.n() as i64,
                _ => 1,
            };
            let bound = BigRational::from_integer(BigInt::from(bound));
            prop_assert!(forward >= -&bound && forward <= bound);
        }
    }

    // The aggregations only see comparisons, so any transform that keeps
    // all pairwise comparisons (a common scale, a common shift) keeps the
    // payoff.
    #[test]
    fn payoff_depends_only_on_comparisons(
        (a, b) in strategy_pair(),
        scale in 1u32..=4,
        shift in 0u32..=5,
    ) {
        let map = |s: &SymmetricStrategy| {
            let parts = s.parts().iter().map(|&p| p * scale + shift).collect();
            SymmetricStrategy::new(parts).unwrap()
        };
        let (a2, b2) = (map(&a), map(&b));
        for agg in AggregationKind::ALL {
            prop_assert_eq!(
                payoff(&a, &b, agg).unwrap(),
                payoff(&a2, &b2, agg).unwrap()
            );
        }
    }

    // Each count table distributes exactly the n! row-column matchings.
    #[test]
    fn rook_counts_distribute_all_matchings((a, b) in strategy_pair()) {
        let m = build_clash_matrix(&a, &b).unwrap();
        prop_assert_eq!(rook_counts(&m).total(), factorial(a.n()));
    }

    // Enumeration emits every budget split exactly once, in valid form.
    #[test]
    fn enumeration_is_complete_and_canonical(d in 0u32..=14, n in 2usize..=8) {
        let all = enumerate_symmetric_strategies(d, n);
        let mut seen = HashSet::new();
        for s in &all {
            prop_assert_eq!(s.n(), n);
            prop_assert_eq!(s.budget(), d);
            prop_assert!(s.parts().windows(2).all(|w| w[0] >= w[1]));
            prop_assert!(seen.insert(s.parts().to_vec()), "duplicate {}", s);
        }
        prop_assert_eq!(all.len() as u128, count_symmetric_strategies(d, n));
    }
}
