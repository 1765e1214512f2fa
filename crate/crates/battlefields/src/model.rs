//! Game model: budgets, aggregation rules, and the symmetrized strategy space.
//!
//! A pure strategy assigns a non-negative resource to each of `n` battlefields.
//! Symmetrizing the game quotients out battlefield order, so a symmetric
//! strategy is a partition of the budget into at most `n` parts, stored
//! non-increasing and padded with zeros to length `n`.

use std::fmt;

/// How per-battlefield outcomes combine into one payoff.
///
/// Every rule is a function of the number of battlefields won (`k_w`) and
/// lost (`k_l`) by the first player; the remaining `n - k_w - k_l` are ties.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum AggregationKind {
    /// Net battlefield count, `k_w - k_l`. Range `[-n, n]`.
    Blotto,
    /// Sign of the net count: win, tie, or lose the conflict as a whole.
    Mto,
    /// Strict-majority rule: `[k_w > n/2] - [k_l > n/2]`.
    Majoritarian,
}

impl AggregationKind {
    pub const ALL: [AggregationKind; 3] = [
        AggregationKind::Blotto,
        AggregationKind::Mto,
        AggregationKind::Majoritarian,
    ];

    /// Payoff to the first player when it wins `k_w` and loses `k_l` of the
    /// `n` battlefields. Integer-valued for all supported rules, which keeps
    /// downstream payoff arithmetic exact.
    pub fn aggregate(self, n: usize, k_w: usize, k_l: usize) -> Result<i64, ModelError> {
        if k_w + k_l > n {
            return Err(ModelError::OutcomeOverflow { k_w, k_l, n });
        }
        let diff = k_w as i64 - k_l as i64;
        Ok(match self {
            AggregationKind::Blotto => diff,
            AggregationKind::Mto => diff.signum(),
            // Strict majority on both sides; at most one side can hold it.
            AggregationKind::Majoritarian => {
                i64::from(2 * k_w > n) - i64::from(2 * k_l > n)
            }
        })
    }
}

impl fmt::Display for AggregationKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            AggregationKind::Blotto => "blotto",
            AggregationKind::Mto => "mto",
            AggregationKind::Majoritarian => "majoritarian",
        })
    }
}

impl std::str::FromStr for AggregationKind {
    type Err = ModelError;

    fn from_str(s: &str) -> Result<Self, ModelError> {
        match s {
            "blotto" => Ok(AggregationKind::Blotto),
            "mto" => Ok(AggregationKind::Mto),
            "majoritarian" => Ok(AggregationKind::Majoritarian),
            _ => Err(ModelError::UnknownAggregation(s.to_string())),
        }
    }
}

/// A symmetric pure strategy: the multiset of battlefield assignments,
/// kept non-increasing.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SymmetricStrategy {
    parts: Vec<u32>,
}

impl SymmetricStrategy {
    /// Wraps an already non-increasing assignment vector.
    pub fn new(parts: Vec<u32>) -> Result<Self, ModelError> {
        if parts.is_empty() {
            return Err(ModelError::EmptyStrategy);
        }
        if parts.windows(2).any(|w| w[0] < w[1]) {
            return Err(ModelError::UnsortedStrategy(parts));
        }
        Ok(SymmetricStrategy { parts })
    }

    /// Accepts assignments in any battlefield order and canonicalizes by
    /// sorting; symmetric strategies are order-invariant.
    pub fn from_unsorted(mut parts: Vec<u32>) -> Result<Self, ModelError> {
        if parts.is_empty() {
            return Err(ModelError::EmptyStrategy);
        }
        parts.sort_unstable_by(|a, b| b.cmp(a));
        Ok(SymmetricStrategy { parts })
    }

    /// The most even split of `d` over `n` battlefields: `d mod n` fields get
    /// one extra unit. Parts differ by at most one.
    pub fn most_even(d: u32, n: usize) -> SymmetricStrategy {
        assert!(n >= 1, "need at least one battlefield");
        let base = d / n as u32;
        let extra = (d % n as u32) as usize;
        let mut parts = vec![base; n];
        for p in parts.iter_mut().take(extra) {
            *p += 1;
        }
        SymmetricStrategy { parts }
    }

    pub fn parts(&self) -> &[u32] {
        &self.parts
    }

    /// Number of battlefields, including zero assignments.
    pub fn n(&self) -> usize {
        self.parts.len()
    }

    /// Total resource committed.
    pub fn budget(&self) -> u32 {
        self.parts.iter().sum()
    }

    /// Largest single-battlefield assignment.
    pub fn max_assignment(&self) -> u32 {
        self.parts[0]
    }
}

impl fmt::Display for SymmetricStrategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, p) in self.parts.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{p}")?;
        }
        Ok(())
    }
}

/// A mixed strategy over symmetric pure strategies.
///
/// Support entries are distinct, weights strictly positive and summing to one
/// (within 1e-12), and all support strategies share one budget and one `n`.
#[derive(Debug, Clone, PartialEq)]
pub struct MixedStrategy {
    support: Vec<(SymmetricStrategy, f64)>,
}

impl MixedStrategy {
    pub fn new(support: Vec<(SymmetricStrategy, f64)>) -> Result<Self, ModelError> {
        let Some((first, _)) = support.first() else {
            return Err(ModelError::EmptySupport);
        };
        let (n, budget) = (first.n(), first.budget());
        let mut sum = 0.0;
        for (i, (s, w)) in support.iter().enumerate() {
            if s.n() != n || s.budget() != budget {
                return Err(ModelError::MixedSupportMismatch);
            }
            if !w.is_finite() || *w <= 0.0 {
                return Err(ModelError::InvalidWeight(*w));
            }
            if support[..i].iter().any(|(t, _)| t == s) {
                return Err(ModelError::DuplicateSupport(s.clone()));
            }
            sum += w;
        }
        if (sum - 1.0).abs() > 1e-12 {
            return Err(ModelError::WeightSum(sum));
        }
        Ok(MixedStrategy { support })
    }

    pub fn point_mass(s: SymmetricStrategy) -> MixedStrategy {
        MixedStrategy {
            support: vec![(s, 1.0)],
        }
    }

    /// Drops non-positive weights and renormalizes the rest to sum to one.
    /// Convenient for solver output where tiny weights are numeric dust.
    pub fn from_weights(
        strategies: &[SymmetricStrategy],
        weights: &[f64],
        floor: f64,
    ) -> Result<Self, ModelError> {
        assert_eq!(strategies.len(), weights.len());
        let total: f64 = weights.iter().filter(|w| **w > floor).sum();
        if total <= 0.0 {
            return Err(ModelError::EmptySupport);
        }
        let support = strategies
            .iter()
            .zip(weights)
            .filter(|(_, w)| **w > floor)
            .map(|(s, w)| (s.clone(), w / total))
            .collect();
        MixedStrategy::new(support)
    }

    pub fn support(&self) -> &[(SymmetricStrategy, f64)] {
        &self.support
    }

    pub fn n(&self) -> usize {
        self.support[0].0.n()
    }

    pub fn budget(&self) -> u32 {
        self.support[0].0.budget()
    }

    /// Largest assignment appearing anywhere in the support.
    pub fn max_assignment(&self) -> u32 {
        self.support
            .iter()
            .map(|(s, _)| s.max_assignment())
            .max()
            .expect("support is non-empty")
    }
}

/// One game instance: budgets for both players, battlefield count, and the
/// aggregation rule.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct GameSpec {
    d_a: u32,
    d_b: u32,
    n: usize,
    agg: AggregationKind,
}

impl GameSpec {
    pub fn new(d_a: u32, d_b: u32, n: usize, agg: AggregationKind) -> Result<Self, ModelError> {
        if n < 2 {
            return Err(ModelError::TooFewBattlefields(n));
        }
        Ok(GameSpec { d_a, d_b, n, agg })
    }

    pub fn d_a(&self) -> u32 {
        self.d_a
    }

    pub fn d_b(&self) -> u32 {
        self.d_b
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn aggregation(&self) -> AggregationKind {
        self.agg
    }
}

impl fmt::Display for GameSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "d_a={} d_b={} n={} agg={}",
            self.d_a, self.d_b, self.n, self.agg
        )
    }
}

/// All symmetric strategies for budget `d` on `n` battlefields: partitions of
/// `d` into at most `n` parts, in reverse-lexicographic order on the padded
/// vectors, so `(d, 0, ..)` comes first and the most even split last.
pub fn enumerate_symmetric_strategies(d: u32, n: usize) -> Vec<SymmetricStrategy> {
    assert!(n >= 2, "need at least two battlefields");
    let mut out = Vec::new();
    let mut parts = Vec::with_capacity(n);
    push_parts(d, n, d, &mut parts, &mut out);
    out
}

fn push_parts(
    remaining: u32,
    slots: usize,
    max: u32,
    parts: &mut Vec<u32>,
    out: &mut Vec<SymmetricStrategy>,
) {
    if slots == 0 {
        if remaining == 0 {
            out.push(SymmetricStrategy {
                parts: parts.clone(),
            });
        }
        return;
    }
    // The next part is at most `max` (kept non-increasing) and must leave a
    // feasible remainder for the `slots - 1` parts after it.
    let hi = remaining.min(max);
    let lo = remaining.div_ceil(slots as u32);
    if lo > hi {
        return;
    }
    let mut p = hi;
    loop {
        parts.push(p);
        push_parts(remaining - p, slots - 1, p, parts, out);
        parts.pop();
        if p == lo {
            break;
        }
        p -= 1;
    }
}

/// Number of partitions of `d` into at most `n` parts, i.e. the length of
/// [`enumerate_symmetric_strategies`] without materializing it. Saturates.
pub fn count_symmetric_strategies(d: u32, n: usize) -> u128 {
    let d = d as usize;
    // p(d, k) = partitions of d into parts of size <= k.
    let mut row = vec![0u128; d + 1];
    row[0] = 1;
    for k in 1..=n.min(d.max(1)) {
        for total in k..=d {
            row[total] = row[total].saturating_add(row[total - k]);
        }
    }
    row[d]
}

/// Errors from model-level validation.
#[derive(Debug, Clone, PartialEq)]
pub enum ModelError {
    EmptyStrategy,
    UnsortedStrategy(Vec<u32>),
    TooFewBattlefields(usize),
    OutcomeOverflow { k_w: usize, k_l: usize, n: usize },
    UnknownAggregation(String),
    EmptySupport,
    InvalidWeight(f64),
    WeightSum(f64),
    MixedSupportMismatch,
    DuplicateSupport(SymmetricStrategy),
}

impl fmt::Display for ModelError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ModelError::EmptyStrategy => write!(f, "strategy has no battlefields"),
            ModelError::UnsortedStrategy(p) => {
                write!(f, "assignments must be non-increasing, got {p:?}")
            }
            ModelError::TooFewBattlefields(n) => {
                write!(f, "need at least two battlefields, got {n}")
            }
            ModelError::OutcomeOverflow { k_w, k_l, n } => {
                write!(f, "k_w + k_l = {} exceeds n = {n}", k_w + k_l)
            }
            ModelError::UnknownAggregation(s) => {
                write!(f, "unknown aggregation {s:?} (use blotto, mto, majoritarian)")
            }
            ModelError::EmptySupport => write!(f, "mixed strategy support is empty"),
            ModelError::InvalidWeight(w) => write!(f, "invalid support weight {w}"),
            ModelError::WeightSum(s) => write!(f, "support weights sum to {s}, expected 1"),
            ModelError::MixedSupportMismatch => {
                write!(f, "support strategies disagree on budget or battlefield count")
            }
            ModelError::DuplicateSupport(s) => write!(f, "duplicate support strategy {s}"),
        }
    }
}

impl std::error::Error for ModelError {}
