//! Clash matrices and the rook-placement dynamic program.
//!
//! The clash matrix of two symmetric strategies records the sign of every
//! pairwise battlefield comparison. Averaging a payoff over all `n!`
//! battlefield matchings then reduces to counting non-attacking rook
//! placements by how many rooks land in the win and loss regions. The
//! monotone staircase structure of the matrix makes that count a polynomial
//! dynamic program instead of a factorial enumeration.

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Zero};
use std::fmt;

use crate::model::{AggregationKind, SymmetricStrategy};

/// Sign matrix `cells[i][j] = sign(a_i - b_j)` for two equally sized
/// assignment vectors, both non-increasing.
///
/// Rows are non-decreasing left to right and columns non-increasing top to
/// bottom, so wins (+1) fill an upper-right region W, losses (-1) a
/// lower-left region L, and ties (0) axis-aligned rectangles T between them
/// that touch other tie rectangles at most at corners.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClashMatrix {
    n: usize,
    cells: Vec<i8>,
}

impl ClashMatrix {
    pub fn n(&self) -> usize {
        self.n
    }

    /// Cell sign with 0-based indices.
    pub fn sign(&self, row: usize, col: usize) -> i8 {
        self.cells[row * self.n + col]
    }

    pub fn row(&self, row: usize) -> &[i8] {
        &self.cells[row * self.n..(row + 1) * self.n]
    }

    // 1-based accessor used by the cut-off arithmetic, which is naturally
    // expressed in matrix coordinates.
    fn at(&self, i: usize, j: usize) -> i8 {
        self.cells[(i - 1) * self.n + (j - 1)]
    }

    /// True when the submatrix of the first `i` rows and `j` columns is a
    /// single area. Its minimum sits at the bottom-left and its maximum at
    /// the top-right, so one comparison decides.
    fn uniform(&self, i: usize, j: usize) -> bool {
        self.at(i, 1) == self.at(1, j)
    }
}

impl fmt::Display for ClashMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in 0..self.n {
            for c in 0..self.n {
                if c > 0 {
                    f.write_str(" ")?;
                }
                write!(f, "{:>2}", self.sign(r, c))?;
            }
            if r + 1 < self.n {
                f.write_str("\n")?;
            }
        }
        Ok(())
    }
}

/// Builds the clash matrix of `a` against `b`.
pub fn build_clash_matrix(
    a: &SymmetricStrategy,
    b: &SymmetricStrategy,
) -> Result<ClashMatrix, ClashError> {
    if a.n() != b.n() {
        return Err(ClashError::MismatchedBattlefields {
            a: a.n(),
            b: b.n(),
        });
    }
    let n = a.n();
    let mut cells = Vec::with_capacity(n * n);
    for &x in a.parts() {
        for &y in b.parts() {
            cells.push(match x.cmp(&y) {
                std::cmp::Ordering::Greater => 1,
                std::cmp::Ordering::Equal => 0,
                std::cmp::Ordering::Less => -1,
            });
        }
    }
    Ok(ClashMatrix { n, cells })
}

/// The corners at which the cut-off recursion peels the matrix, ascending,
/// ending at `(n, n)`. The first knot delimits a uniform (or empty)
/// submatrix that the boundary count handles directly.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KnotStaircase {
    knots: Vec<(usize, usize)>,
}

impl KnotStaircase {
    pub fn knots(&self) -> &[(usize, usize)] {
        &self.knots
    }

    /// Total table cells a per-knot dynamic program allocates: one
    /// `(min(i,j)+1)^3` slab per knot. Bounded by `2n * (n+1)^3`.
    pub fn dp_entries(&self) -> usize {
        self.knots
            .iter()
            .map(|&(i, j)| {
                let lim = i.min(j) + 1;
                lim * lim * lim
            })
            .sum()
    }
}

/// Walks the cut-off descent from the full matrix corner `(n, n)`.
///
/// At a corner `(i, j)` the cut removes the band up to `(i', j')`:
/// a corner in L drops the all-loss bottom rows, a corner in W the all-win
/// right columns, and a corner in T its tie rectangle together with the loss
/// band to its left and the win band above it. The descent stops once the
/// remaining submatrix is uniform or empty.
pub fn detect_knots(m: &ClashMatrix) -> KnotStaircase {
    let n = m.n();
    let mut descent = vec![(n, n)];
    let (mut i, mut j) = (n, n);
    loop {
        if i == 0 || j == 0 || m.uniform(i, j) {
            break;
        }
        let (i2, j2) = cut_corner(m, i, j);
        if i2 == 0 && j2 == 0 {
            break;
        }
        descent.push((i2, j2));
        (i, j) = (i2, j2);
    }
    descent.reverse();
    KnotStaircase { knots: descent }
}

fn cut_corner(m: &ClashMatrix, i: usize, j: usize) -> (usize, usize) {
    match m.at(i, j) {
        -1 => {
            // Rows whose rightmost cell is -1 lie entirely in L.
            let mut r = i;
            while r > 0 && m.at(r, j) == -1 {
                r -= 1;
            }
            (r, j)
        }
        1 => {
            // Columns whose bottom cell is +1 lie entirely in W.
            let mut c = j;
            while c > 0 && m.at(i, c) == 1 {
                c -= 1;
            }
            (i, c)
        }
        _ => {
            // Tie rectangle: the last +1 above it in column j and the last
            // -1 to its left in row i bound the three removed bands.
            let mut r = i;
            while r > 0 && m.at(r, j) != 1 {
                r -= 1;
            }
            let mut c = j;
            while c > 0 && m.at(i, c) != -1 {
                c -= 1;
            }
            (r, c)
        }
    }
}

/// Ways to place `rooks` non-attacking rooks in an unconstrained
/// `rows x cols` rectangle: choose the columns, choose the rows, match them
/// up. Zero when `rooks` exceeds either dimension.
pub fn rect_count(rows: usize, cols: usize, rooks: usize) -> BigUint {
    binomial(cols, rooks) * binomial(rows, rooks) * factorial(rooks)
}

pub fn factorial(n: usize) -> BigUint {
    let mut acc = BigUint::one();
    for k in 2..=n {
        acc *= BigUint::from(k);
    }
    acc
}

pub fn binomial(n: usize, k: usize) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigUint::one();
    for i in 0..k {
        acc = acc * BigUint::from(n - i) / BigUint::from(i + 1);
    }
    acc
}

/// How many of the `n!` full rook placements (battlefield matchings) put
/// exactly `k_w` rooks in W and `k_l` in L.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RookCountTable {
    n: usize,
    counts: Vec<BigUint>,
}

impl RookCountTable {
    pub(crate) fn from_dense(n: usize, counts: Vec<BigUint>) -> RookCountTable {
        debug_assert_eq!(counts.len(), (n + 1) * (n + 1));
        RookCountTable { n, counts }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn count(&self, k_w: usize, k_l: usize) -> &BigUint {
        &self.counts[k_w * (self.n + 1) + k_l]
    }

    /// Non-zero entries as `(k_w, k_l, count)`.
    pub fn non_zero(&self) -> impl Iterator<Item = (usize, usize, &BigUint)> {
        let n = self.n;
        self.counts.iter().enumerate().filter_map(move |(idx, c)| {
            (!c.is_zero()).then_some((idx / (n + 1), idx % (n + 1), c))
        })
    }

    /// Sums all entries; equals `n!` for a table built from a clash matrix.
    pub fn total(&self) -> BigUint {
        self.counts.iter().sum()
    }
}

// One dynamic-program slab: H(i, j, m, k_w, k_l) for a fixed knot (i, j),
// dense over m, k_w, k_l in [0, min(i, j)]. Unset cells are zero.
struct Slab {
    lim: usize,
    v: Vec<BigUint>,
}

impl Slab {
    fn new(lim: usize) -> Slab {
        Slab {
            lim,
            v: vec![BigUint::zero(); (lim + 1) * (lim + 1) * (lim + 1)],
        }
    }

    fn idx(&self, m: usize, k_w: usize, k_l: usize) -> usize {
        (m * (self.lim + 1) + k_w) * (self.lim + 1) + k_l
    }

    fn get(&self, m: usize, k_w: usize, k_l: usize) -> &BigUint {
        &self.v[self.idx(m, k_w, k_l)]
    }

    fn set(&mut self, m: usize, k_w: usize, k_l: usize, val: BigUint) {
        let idx = self.idx(m, k_w, k_l);
        self.v[idx] = val;
    }

    fn add(&mut self, m: usize, k_w: usize, k_l: usize, val: BigUint) {
        let idx = self.idx(m, k_w, k_l);
        self.v[idx] += val;
    }
}

// Binomial and factorial lookups shared across one dynamic-program run.
struct Binomials {
    fact: Vec<BigUint>,
    choose: Vec<Vec<BigUint>>,
}

impl Binomials {
    fn up_to(n: usize) -> Binomials {
        let mut fact = Vec::with_capacity(n + 1);
        fact.push(BigUint::one());
        for k in 1..=n {
            let next = &fact[k - 1] * BigUint::from(k);
            fact.push(next);
        }
        let mut choose = vec![vec![BigUint::zero(); n + 1]; n + 1];
        for (row, line) in choose.iter_mut().enumerate() {
            line[0] = BigUint::one();
            for col in 1..=row {
                let val = binomial(row, col);
                line[col] = val;
            }
        }
        Binomials { fact, choose }
    }

    // rect_count with table lookups; zero when rooks exceed a dimension.
    fn rect(&self, rows: usize, cols: usize, rooks: usize) -> Option<BigUint> {
        if rooks > rows || rooks > cols {
            return None;
        }
        Some(&self.choose[cols][rooks] * &self.choose[rows][rooks] * &self.fact[rooks])
    }
}

// Boundary case: the submatrix at the first knot is empty or one uniform
// area, so placing m rooks forces (k_w, k_l) outright.
fn boundary_slab(m: &ClashMatrix, corner: (usize, usize), tab: &Binomials) -> Slab {
    let (i, j) = corner;
    let lim = i.min(j);
    let mut slab = Slab::new(lim);
    if i == 0 || j == 0 {
        slab.set(0, 0, 0, BigUint::one());
        return slab;
    }
    debug_assert!(m.uniform(i, j));
    let area = m.at(i, 1);
    for t in 0..=lim {
        let count = tab.rect(i, j, t).expect("t <= min(i, j)");
        match area {
            1 => slab.set(t, t, 0, count),
            -1 => slab.set(t, 0, t, count),
            _ => slab.set(t, 0, 0, count),
        }
    }
    slab
}

// One cut-off step: extend every placement counted at the previous knot
// (i', j') by r1 rooks in the loss band (rows i'+1..i, columns 1..j'), r2 in
// the middle band (rows i'+1..i, columns j'+1..j), and r3 in the win band
// (rows 1..i', columns j'+1..j). Corners in L or W degenerate to zero-width
// middle and win (resp. loss and middle) bands, forcing those r to zero.
//
// Free dimensions: the sub-placement occupies `rem` of the j' columns and
// `rem` of the i' rows; r1 then blocks r1 of the shared bottom rows and r2
// blocks r2 of the shared right columns.
fn extend_slab(slab: &mut Slab, prev: &Slab, corner: (usize, usize), prev_corner: (usize, usize), tab: &Binomials) {
    let (i, j) = corner;
    let (pi, pj) = prev_corner;
    let lim = slab.lim;
    let low_rows = i - pi;
    let mid_cols = j - pj;
    for rem in 0..=prev.lim {
        for kw0 in 0..=(prev.lim) {
            for kl0 in 0..=(prev.lim) {
                let sub = prev.get(rem, kw0, kl0);
                if sub.is_zero() {
                    continue;
                }
                let r1_hi = low_rows.min(lim - rem).min(lim - kl0);
                for r1 in 0..=r1_hi {
                    let Some(f1) = tab.rect(low_rows, pj - rem, r1) else {
                        break;
                    };
                    let s1 = sub * f1;
                    let r2_hi = (low_rows - r1).min(mid_cols).min(lim - rem - r1);
                    for r2 in 0..=r2_hi {
                        let Some(f2) = tab.rect(low_rows - r1, mid_cols, r2) else {
                            break;
                        };
                        let s12 = &s1 * f2;
                        let r3_hi = (lim - rem - r1 - r2).min(lim - kw0);
                        for r3 in 0..=r3_hi {
                            let Some(f3) = tab.rect(pi - rem, mid_cols - r2, r3) else {
                                break;
                            };
                            slab.add(rem + r1 + r2 + r3, kw0 + r3, kl0 + r1, &s12 * f3);
                        }
                    }
                }
            }
        }
    }
}

/// Runs the cut-off dynamic program over the knot staircase and returns the
/// full rook-count table `h(k_w, k_l)` for the whole matrix.
pub fn rook_counts(m: &ClashMatrix) -> RookCountTable {
    let staircase = detect_knots(m);
    rook_counts_along(m, &staircase)
}

/// Same as [`rook_counts`] with a precomputed staircase.
pub fn rook_counts_along(m: &ClashMatrix, staircase: &KnotStaircase) -> RookCountTable {
    let n = m.n();
    let tab = Binomials::up_to(n);
    let knots = staircase.knots();
    let mut prev = boundary_slab(m, knots[0], &tab);
    for idx in 1..knots.len() {
        let (i, j) = knots[idx];
        let mut slab = Slab::new(i.min(j));
        extend_slab(&mut slab, &prev, knots[idx], knots[idx - 1], &tab);
        prev = slab;
    }
    // The last knot is (n, n); full placements use m = n rooks.
    debug_assert_eq!(prev.lim, n);
    let mut counts = vec![BigUint::zero(); (n + 1) * (n + 1)];
    for k_w in 0..=n {
        for k_l in 0..=n {
            if k_w + k_l <= n {
                counts[k_w * (n + 1) + k_l] = prev.get(n, k_w, k_l).clone();
            }
        }
    }
    RookCountTable::from_dense(n, counts)
}

/// Exact expected payoff of `a` against `b` under `agg`: the aggregation
/// value averaged over all `n!` battlefield matchings, as a rational with
/// denominator dividing `n!`.
pub fn payoff(
    a: &SymmetricStrategy,
    b: &SymmetricStrategy,
    agg: AggregationKind,
) -> Result<BigRational, ClashError> {
    let m = build_clash_matrix(a, b)?;
    Ok(payoff_from_counts(&rook_counts(&m), agg))
}

/// Folds a rook-count table with the aggregation rule.
pub fn payoff_from_counts(counts: &RookCountTable, agg: AggregationKind) -> BigRational {
    let n = counts.n();
    let mut acc = BigInt::zero();
    for (k_w, k_l, h) in counts.non_zero() {
        let f = agg.aggregate(n, k_w, k_l).expect("k_w + k_l <= n");
        if f != 0 {
            acc += BigInt::from(h.clone()) * f;
        }
    }
    BigRational::new(acc, BigInt::from(factorial(n)))
}

/// Errors from clash-matrix construction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ClashError {
    MismatchedBattlefields { a: usize, b: usize },
}

impl fmt::Display for ClashError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ClashError::MismatchedBattlefields { a, b } => {
                write!(f, "strategies disagree on battlefield count: {a} vs {b}")
            }
        }
    }
}

impl std::error::Error for ClashError {}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::enumerate_symmetric_strategies;
    use num_traits::ToPrimitive;

    fn strat(parts: &[u32]) -> SymmetricStrategy {
        SymmetricStrategy::new(parts.to_vec()).unwrap()
    }

    fn matrix(a: &[u32], b: &[u32]) -> ClashMatrix {
        build_clash_matrix(&strat(a), &strat(b)).unwrap()
    }

    #[test]
    fn known_three_by_three_matrix() {
        let m = matrix(&[3, 1, 0], &[2, 2, 0]);
        assert_eq!(m.row(0), &[1, 1, 1]);
        assert_eq!(m.row(1), &[-1, -1, 1]);
        assert_eq!(m.row(2), &[-1, -1, 0]);
    }

    #[test]
    fn mismatched_lengths_are_rejected() {
        let err = build_clash_matrix(&strat(&[2, 1]), &strat(&[1, 1, 1])).unwrap_err();
        assert_eq!(err, ClashError::MismatchedBattlefields { a: 2, b: 3 });
    }

    #[test]
    fn rows_and_columns_are_monotone() {
        for a in enumerate_symmetric_strategies(6, 4) {
            for b in enumerate_symmetric_strategies(5, 4) {
                let m = build_clash_matrix(&a, &b).unwrap();
                for r in 0..4 {
                    assert!(m.row(r).windows(2).all(|w| w[0] <= w[1]));
                }
                for c in 0..4 {
                    for r in 1..4 {
                        assert!(m.sign(r - 1, c) >= m.sign(r, c));
                    }
                }
            }
        }
    }

    #[test]
    fn knot_descent_stops_at_a_uniform_remainder() {
        let m = matrix(&[2, 2, 0], &[1, 1, 1]);
        assert_eq!(detect_knots(&m).knots(), &[(2, 3), (3, 3)]);
    }

    #[test]
    fn knot_descent_handles_all_three_corner_kinds() {
        // Descent: tie corner at (3,3) cuts to (2,2); loss corner at (2,2)
        // cuts to (1,2); the remaining 1x2 submatrix is uniformly W.
        let m = matrix(&[3, 1, 0], &[2, 2, 0]);
        assert_eq!(detect_knots(&m).knots(), &[(1, 2), (2, 2), (3, 3)]);
    }

    #[test]
    fn all_tie_matrix_is_a_single_knot() {
        let m = matrix(&[1, 1], &[1, 1]);
        assert_eq!(detect_knots(&m).knots(), &[(2, 2)]);
    }

    #[test]
    fn degenerate_knot_with_zero_row_coordinate() {
        // [[-1, 0], [-1, 0]]: tie corner whose column has no +1 above it.
        let m = matrix(&[1, 1], &[2, 1]);
        assert_eq!(detect_knots(&m).knots(), &[(0, 1), (2, 2)]);
        let h = rook_counts(&m);
        assert_eq!(h.count(0, 1).to_u64(), Some(2));
        assert_eq!(h.total(), factorial(2));
    }

    #[test]
    fn rect_count_small_values() {
        assert_eq!(rect_count(2, 3, 2).to_u64(), Some(6));
        assert_eq!(rect_count(2, 3, 0).to_u64(), Some(1));
        assert_eq!(rect_count(2, 3, 3).to_u64(), Some(0));
        assert_eq!(rect_count(4, 4, 4), factorial(4));
    }

    #[test]
    fn known_rook_counts() {
        let m = matrix(&[3, 1, 0], &[2, 2, 0]);
        let h = rook_counts(&m);
        assert_eq!(h.count(1, 1).to_u64(), Some(2));
        assert_eq!(h.count(2, 1).to_u64(), Some(2));
        assert_eq!(h.count(1, 2).to_u64(), Some(2));
        assert_eq!(h.non_zero().count(), 3);
        assert_eq!(h.total(), factorial(3));
    }

    #[test]
    fn known_payoffs() {
        use AggregationKind::*;
        let a = strat(&[3, 1, 0]);
        let b = strat(&[2, 2, 0]);
        for agg in [Blotto, Mto, Majoritarian] {
            assert!(payoff(&a, &b, agg).unwrap().is_zero(), "{agg}");
        }

        let p = payoff(&strat(&[1, 0]), &strat(&[2, 0]), Mto).unwrap();
        assert_eq!(p, BigRational::new(BigInt::from(-1), BigInt::from(2)));

        let p = payoff(&strat(&[2, 2, 0]), &strat(&[1, 1, 1]), Mto).unwrap();
        assert_eq!(p, BigRational::from(BigInt::from(1)));
    }

    #[test]
    fn payoff_is_antisymmetric() {
        let xs = enumerate_symmetric_strategies(5, 3);
        let ys = enumerate_symmetric_strategies(4, 3);
        for agg in AggregationKind::ALL {
            for a in &xs {
                for b in &ys {
                    let fwd = payoff(a, b, agg).unwrap();
                    let rev = payoff(b, a, agg).unwrap();
                    assert_eq!(fwd, -rev, "{a} vs {b} under {agg}");
                }
            }
        }
    }

    #[test]
    fn blotto_payoff_matches_the_separable_form() {
        // Under the net-count rule the permutation average separates:
        // payoff = (sum of all matrix cells) / n.
        for a in enumerate_symmetric_strategies(6, 4) {
            for b in enumerate_symmetric_strategies(7, 4) {
                let m = build_clash_matrix(&a, &b).unwrap();
                let cell_sum: i64 = (0..4)
                    .flat_map(|r| m.row(r).iter().map(|&s| s as i64))
                    .sum();
                let direct = BigRational::new(BigInt::from(cell_sum), BigInt::from(4));
                assert_eq!(payoff(&a, &b, AggregationKind::Blotto).unwrap(), direct);
            }
        }
    }

    #[test]
    fn totals_equal_n_factorial_on_a_small_grid() {
        for n in 2..=4usize {
            for da in 0..=5u32 {
                for db in 0..=5u32 {
                    for a in enumerate_symmetric_strategies(da, n) {
                        for b in enumerate_symmetric_strategies(db, n) {
                            let m = build_clash_matrix(&a, &b).unwrap();
                            let h = rook_counts(&m);
                            assert_eq!(h.total(), factorial(n), "{a} vs {b}");
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn dp_entries_stay_in_budget() {
        for a in enumerate_symmetric_strategies(9, 5) {
            for b in enumerate_symmetric_strategies(8, 5) {
                let m = build_clash_matrix(&a, &b).unwrap();
                let staircase = detect_knots(&m);
                assert!(staircase.knots().len() <= 2 * 5);
                assert!(staircase.dp_entries() <= 2 * 5 * 6 * 6 * 6);
                assert_eq!(*staircase.knots().last().unwrap(), (5, 5));
            }
        }
    }
}
