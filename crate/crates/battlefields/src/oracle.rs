//! Brute-force reference implementations.
//!
//! Everything here recomputes what a fast path computes, by direct
//! enumeration behind hard size guards. The guards are errors, never silent
//! truncation: an oracle that quietly skips work cannot adjudicate anything.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::ToPrimitive;
use std::fmt;

use crate::clash::{ClashMatrix, RookCountTable};
use crate::model::{AggregationKind, MixedStrategy, SymmetricStrategy};

/// Largest `n` for which the permutation-sum payoff is enumerated.
pub const NAIVE_PAYOFF_MAX_N: usize = 10;
/// Largest `n` for which full rook placements are enumerated.
pub const BRUTE_ROOK_MAX_N: usize = 8;
/// Largest ordered-composition count the best-response scan accepts.
pub const BEST_RESPONSE_MAX_COMPOSITIONS: u128 = 1_000_000;

/// Expected payoff of `a` against `b` by summing the aggregation value over
/// battlefield matchings directly. Matchings are enumerated as distinct
/// arrangements of `b`'s multiset of assignments, so repeated values do not
/// multiply the work; the average over those arrangements equals the average
/// over all `n!` permutations.
pub fn naive_payoff(
    a: &SymmetricStrategy,
    b: &SymmetricStrategy,
    agg: AggregationKind,
) -> Result<BigRational, OracleError> {
    if a.n() != b.n() {
        return Err(OracleError::MismatchedBattlefields { a: a.n(), b: b.n() });
    }
    ordered_vs_symmetric(a.parts(), b, agg)
}

/// Expected payoff of a fixed (not necessarily sorted) assignment vector
/// against a symmetric strategy, averaged over the opponent's arrangements.
pub fn ordered_vs_symmetric(
    assignment: &[u32],
    s: &SymmetricStrategy,
    agg: AggregationKind,
) -> Result<BigRational, OracleError> {
    let n = s.n();
    if assignment.len() != n {
        return Err(OracleError::MismatchedBattlefields {
            a: assignment.len(),
            b: n,
        });
    }
    if n > NAIVE_PAYOFF_MAX_N {
        return Err(OracleError::TooManyBattlefields {
            n,
            limit: NAIVE_PAYOFF_MAX_N,
        });
    }
    let mut arrangement = s.parts().to_vec();
    arrangement.sort_unstable();
    let mut sum: i64 = 0;
    let mut count: i64 = 0;
    loop {
        let mut k_w = 0;
        let mut k_l = 0;
        for (&x, &y) in assignment.iter().zip(&arrangement) {
            match x.cmp(&y) {
                std::cmp::Ordering::Greater => k_w += 1,
                std::cmp::Ordering::Less => k_l += 1,
                std::cmp::Ordering::Equal => {}
            }
        }
        sum += agg.aggregate(n, k_w, k_l).expect("k_w + k_l <= n");
        count += 1;
        if !next_permutation(&mut arrangement) {
            break;
        }
    }
    Ok(BigRational::new(BigInt::from(sum), BigInt::from(count)))
}

/// Rook-count table by enumerating all `n!` placements of one rook per row.
pub fn brute_rook_counts(m: &ClashMatrix) -> Result<RookCountTable, OracleError> {
    let n = m.n();
    if n > BRUTE_ROOK_MAX_N {
        return Err(OracleError::TooManyBattlefields {
            n,
            limit: BRUTE_ROOK_MAX_N,
        });
    }
    let mut counts = vec![0u64; (n + 1) * (n + 1)];
    let mut cols: Vec<usize> = (0..n).collect();
    loop {
        let mut k_w = 0;
        let mut k_l = 0;
        for (row, &col) in cols.iter().enumerate() {
            match m.sign(row, col) {
                1 => k_w += 1,
                -1 => k_l += 1,
                _ => {}
            }
        }
        counts[k_w * (n + 1) + k_l] += 1;
        if !next_permutation(&mut cols) {
            break;
        }
    }
    Ok(RookCountTable::from_dense(
        n,
        counts.into_iter().map(Into::into).collect(),
    ))
}

/// Best response in the original, unsymmetrized game: scans every ordered
/// composition of `d_opp` over the battlefields and returns the first
/// maximizer of the expected payoff against `xi`, with that payoff.
///
/// This deliberately ignores the symmetrized strategy space; it exists to
/// check that symmetrized equilibria survive in the original game.
pub fn full_game_best_response(
    xi: &MixedStrategy,
    d_opp: u32,
    agg: AggregationKind,
) -> Result<(Vec<u32>, f64), OracleError> {
    let n = xi.n();
    let count = compositions(d_opp, n);
    if count > BEST_RESPONSE_MAX_COMPOSITIONS {
        return Err(OracleError::TooManyCompositions {
            count,
            limit: BEST_RESPONSE_MAX_COMPOSITIONS,
        });
    }
    let mut best: Option<(Vec<u32>, f64)> = None;
    let mut current = vec![0u32; n];
    scan_compositions(d_opp, 0, &mut current, &mut |c| {
        let mut value = 0.0;
        for (s, w) in xi.support() {
            let p = ordered_vs_symmetric(c, s, agg)?;
            value += w * p.to_f64().expect("small rational");
        }
        match &best {
            Some((_, v)) if *v >= value => {}
            _ => best = Some((c.to_vec(), value)),
        }
        Ok(())
    })?;
    Ok(best.expect("at least one composition"))
}

/// Number of ordered compositions of `d` into `n` non-negative parts.
pub fn compositions(d: u32, n: usize) -> u128 {
    crate::clash::binomial(d as usize + n - 1, n - 1)
        .to_u128()
        .unwrap_or(u128::MAX)
}

// Compositions in lexicographically decreasing first-part order; the closure
// sees each one by reference.
fn scan_compositions(
    remaining: u32,
    slot: usize,
    current: &mut Vec<u32>,
    visit: &mut impl FnMut(&[u32]) -> Result<(), OracleError>,
) -> Result<(), OracleError> {
    if slot + 1 == current.len() {
        current[slot] = remaining;
        visit(current)?;
        return Ok(());
    }
    let mut p = remaining;
    loop {
        current[slot] = p;
        scan_compositions(remaining - p, slot + 1, current, visit)?;
        if p == 0 {
            break;
        }
        p -= 1;
    }
    Ok(())
}

// Classic in-place next lexicographic permutation; skips repeats, so a
// multiset yields each distinct arrangement exactly once.
fn next_permutation<T: Ord>(xs: &mut [T]) -> bool {
    if xs.len() < 2 {
        return false;
    }
    let mut i = xs.len() - 1;
    while i > 0 && xs[i - 1] >= xs[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = xs.len() - 1;
    while xs[j] <= xs[i - 1] {
        j -= 1;
    }
    xs.swap(i - 1, j);
    xs[i..].reverse();
    true
}

/// Errors from oracle guards and input validation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum OracleError {
    MismatchedBattlefields { a: usize, b: usize },
    TooManyBattlefields { n: usize, limit: usize },
    TooManyCompositions { count: u128, limit: u128 },
}

impl fmt::Display for OracleError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            OracleError::MismatchedBattlefields { a, b } => {
                write!(f, "battlefield counts differ: {a} vs {b}")
            }
            OracleError::TooManyBattlefields { n, limit } => {
                write!(f, "n = {n} exceeds the brute-force limit of {limit}")
            }
            OracleError::TooManyCompositions { count, limit } => {
                write!(f, "{count} compositions exceed the scan limit of {limit}")
            }
        }
    }
}

impl std::error::Error for OracleError {}
