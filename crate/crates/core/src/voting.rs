//! Weighted majority rules over binary votes.
//!
//! Votes use the convention that `1` (`true`) is the correct alternative. A
//! rule is a [`WeightVector`]; it elects `1` when the weight behind `1` is
//! strictly larger than the weight behind `0`, `0` in the opposite case, and
//! reports a [`Decision::Tie`] otherwise.
//!
//! Accuracy can be computed exactly by enumerating every vote profile
//! ([`exact_accuracy`]) or estimated by simulating elections
//! ([`simulate_accuracy`]). Two rules are the same rule exactly when they
//! induce the same [`CoalitionStructure`].

use rand::Rng;

use crate::error::{Error, Range, Result};
use crate::sampling::RandomStream;

/// Largest panel for which [`exact_accuracy`] enumerates vote profiles.
pub const MAX_ACCURACY_EXPERTS: usize = 25;
/// Largest panel for which [`coalition_structure`] enumerates subsets.
pub const MAX_COALITION_EXPERTS: usize = 20;
/// Weight vectors whose largest magnitude is below this are treated as all-zero.
pub const ZERO_WEIGHT_EPS: f64 = 1e-12;

/// Whether a panel describes experts (who vote) or judges (who score).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PanelKind {
    /// Every competence strictly inside (0, 1).
    Experts,
    /// Every competence inside [0, 1].
    Judges,
}

/// Per-agent probabilities of being correct.
#[derive(Debug, Clone, PartialEq)]
pub struct CompetencePanel {
    probs: Vec<f64>,
    kind: PanelKind,
}

impl CompetencePanel {
    pub fn experts(probs: Vec<f64>) -> Result<Self> {
        Self::new(probs, PanelKind::Experts)
    }

    pub fn judges(probs: Vec<f64>) -> Result<Self> {
        Self::new(probs, PanelKind::Judges)
    }

    pub fn new(probs: Vec<f64>, kind: PanelKind) -> Result<Self> {
        if probs.is_empty() {
            return Err(Error::Empty {
                what: "competence panel",
            });
        }
        for &p in &probs {
            let ok = match kind {
                PanelKind::Experts => p > 0.0 && p < 1.0,
                PanelKind::Judges => (0.0..=1.0).contains(&p),
            };
            if !ok {
                return Err(Error::Domain {
                    what: match kind {
                        PanelKind::Experts => "expert competence",
                        PanelKind::Judges => "judge competence",
                    },
                    value: p,
                    range: match kind {
                        PanelKind::Experts => Range::Open01,
                        PanelKind::Judges => Range::Closed01,
                    },
                });
            }
        }
        Ok(Self { probs, kind })
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn kind(&self) -> PanelKind {
        self.kind
    }

    pub fn len(&self) -> usize {
        self.probs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.probs.is_empty()
    }

    pub fn into_inner(self) -> Vec<f64> {
        self.probs
    }
}

/// One binary vote per expert; `true` is a vote for the correct alternative.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VoteProfile(Vec<bool>);

impl VoteProfile {
    pub fn new(votes: Vec<bool>) -> Self {
        Self(votes)
    }

    /// Builds a profile from `0`/`1` values; anything non-zero counts as `1`.
    pub fn from_bits(bits: &[u8]) -> Self {
        Self(bits.iter().map(|&b| b != 0).collect())
    }

    /// Profile in which exactly the experts whose bit is set in `mask` vote `1`.
    pub fn from_mask(mask: u64, len: usize) -> Self {
        Self((0..len).map(|i| mask >> i & 1 == 1).collect())
    }

    pub fn votes(&self) -> &[bool] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

/// Finite vote weights, one per expert.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightVector(Vec<f64>);

impl WeightVector {
    pub fn new(weights: Vec<f64>) -> Result<Self> {
        if weights.is_empty() {
            return Err(Error::Empty {
                what: "weight vector",
            });
        }
        if let Some((index, &value)) = weights.iter().enumerate().find(|(_, w)| !w.is_finite()) {
            return Err(Error::NonFinite {
                what: "weight",
                index,
                value,
            });
        }
        Ok(Self(weights))
    }

    /// `n` equal weights of one, i.e. simple majority.
    pub fn equal(n: usize) -> Result<Self> {
        Self::new(vec![1.0; n])
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn into_inner(self) -> Vec<f64> {
        self.0
    }

    pub fn scaled(&self, factor: f64) -> Result<Self> {
        Self::new(self.0.iter().map(|w| w * factor).collect())
    }

    pub fn is_all_zero(&self) -> bool {
        is_all_zero(&self.0)
    }

    pub fn is_non_negative(&self) -> bool {
        self.0.iter().all(|&w| w >= 0.0)
    }

    /// Non-negative and summing to one within `1e-9`.
    pub fn is_normalized(&self) -> bool {
        self.is_non_negative() && (compensated_sum(self.0.iter().copied()) - 1.0).abs() <= 1e-9
    }
}

/// Outcome of a weighted majority vote.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Decision {
    One,
    Zero,
    Tie,
}

impl Decision {
    /// Expected correctness when ties are settled by a fair coin.
    pub fn credit(self) -> f64 {
        match self {
            Decision::One => 1.0,
            Decision::Zero => 0.0,
            Decision::Tie => 0.5,
        }
    }
}

/// How a rule whose weights are all (numerically) zero is evaluated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ZeroWeightFallback {
    /// Re-run the vote with equal weights of one.
    #[default]
    Majority,
    /// Every vote is a tie, settled by a coin flip.
    CoinFlip,
}

/// Neumaier-compensated sum.
pub fn compensated_sum(values: impl IntoIterator<Item = f64>) -> f64 {
    let mut sum = 0.0_f64;
    let mut comp = 0.0_f64;
    for v in values {
        let t = sum + v;
        if sum.abs() >= v.abs() {
            comp += (sum - t) + v;
        } else {
            comp += (v - t) + sum;
        }
        sum = t;
    }
    sum + comp
}

fn is_all_zero(weights: &[f64]) -> bool {
    weights.iter().all(|w| w.abs() < ZERO_WEIGHT_EPS)
}

fn check_len(expected: usize, found: usize) -> Result<()> {
    if expected != found {
        return Err(Error::Dimension { expected, found });
    }
    Ok(())
}

/// Decision for the profile in which bit `i` of `mask` is expert `i`'s vote.
/// No degeneracy handling; callers resolve all-zero weights first.
#[inline]
pub(crate) fn decide_mask(weights: &[f64], mask: u64) -> Decision {
    let yes = compensated_sum(
        weights
            .iter()
            .enumerate()
            .filter(|(i, _)| mask >> i & 1 == 1)
            .map(|(_, &w)| w),
    );
    let no = compensated_sum(
        weights
            .iter()
            .enumerate()
            .filter(|(i, _)| mask >> i & 1 == 0)
            .map(|(_, &w)| w),
    );
    if yes > no {
        Decision::One
    } else if yes < no {
        Decision::Zero
    } else {
        Decision::Tie
    }
}

/// What a weight vector effectively means once the all-zero case is resolved.
#[derive(Debug, Clone, Copy)]
pub(crate) enum Effective<'a> {
    Weights(&'a [f64]),
    Equal,
    AlwaysTie,
}

pub(crate) fn effective(weights: &[f64], fallback: ZeroWeightFallback) -> Effective<'_> {
    if !is_all_zero(weights) {
        Effective::Weights(weights)
    } else {
        match fallback {
            ZeroWeightFallback::Majority => Effective::Equal,
            ZeroWeightFallback::CoinFlip => Effective::AlwaysTie,
        }
    }
}

fn decide_effective(rule: Effective<'_>, mask: u64, m: usize) -> Decision {
    match rule {
        Effective::Weights(w) => decide_mask(w, mask),
        Effective::Equal => {
            let yes = (mask & low_bits(m)).count_ones() as usize;
            let no = m - yes;
            match yes.cmp(&no) {
                std::cmp::Ordering::Greater => Decision::One,
                std::cmp::Ordering::Less => Decision::Zero,
                std::cmp::Ordering::Equal => Decision::Tie,
            }
        }
        Effective::AlwaysTie => Decision::Tie,
    }
}

fn low_bits(m: usize) -> u64 {
    if m >= 64 {
        u64::MAX
    } else {
        (1u64 << m) - 1
    }
}

fn profile_mask(profile: &VoteProfile) -> Result<u64> {
    if profile.len() > 64 {
        return Err(Error::Capacity {
            what: "vote profile",
            size: profile.len(),
            limit: 64,
        });
    }
    Ok(profile
        .votes()
        .iter()
        .enumerate()
        .fold(0u64, |acc, (i, &v)| acc | (u64::from(v) << i)))
}

/// Weighted majority decision, with all-zero weights read as simple majority.
pub fn decide(weights: &WeightVector, profile: &VoteProfile) -> Result<Decision> {
    decide_with(weights, profile, ZeroWeightFallback::Majority)
}

pub fn decide_with(
    weights: &WeightVector,
    profile: &VoteProfile,
    fallback: ZeroWeightFallback,
) -> Result<Decision> {
    check_len(weights.len(), profile.len())?;
    let m = weights.len();
    let mask = profile_mask(profile)?;
    Ok(decide_effective(effective(weights.as_slice(), fallback), mask, m))
}

/// Probability that the rule elects the correct alternative, by enumerating
/// all `2^m` vote profiles. Ties earn a credit of one half.
pub fn exact_accuracy(panel: &CompetencePanel, weights: &WeightVector) -> Result<f64> {
    exact_accuracy_with(panel, weights, ZeroWeightFallback::Majority)
}

pub fn exact_accuracy_with(
    panel: &CompetencePanel,
    weights: &WeightVector,
    fallback: ZeroWeightFallback,
) -> Result<f64> {
    if panel.kind() != PanelKind::Experts {
        return Err(Error::Invalid(
            "exact accuracy needs an expert panel".to_string(),
        ));
    }
    check_len(panel.len(), weights.len())?;
    if panel.len() > MAX_ACCURACY_EXPERTS {
        return Err(Error::Capacity {
            what: "exact accuracy",
            size: panel.len(),
            limit: MAX_ACCURACY_EXPERTS,
        });
    }
    Ok(exact_accuracy_unchecked(
        panel.probs(),
        weights.as_slice(),
        fallback,
    ))
}

/// Enumeration kernel shared with the sweep harness; inputs must already be
/// validated and of equal length.
pub(crate) fn exact_accuracy_unchecked(
    probs: &[f64],
    weights: &[f64],
    fallback: ZeroWeightFallback,
) -> f64 {
    let m = probs.len();
    let rule = effective(weights, fallback);
    if let Effective::AlwaysTie = rule {
        return 0.5;
    }
    let mut total = 0.0;
    for mask in 0..(1u64 << m) {
        let credit = decide_effective(rule, mask, m).credit();
        if credit == 0.0 {
            continue;
        }
        let mut prob = 1.0;
        for (i, &p) in probs.iter().enumerate() {
            prob *= if mask >> i & 1 == 1 { p } else { 1.0 - p };
        }
        total += credit * prob;
    }
    total.clamp(0.0, 1.0)
}

/// Fraction of `trials` simulated elections that elect the correct
/// alternative, with ties settled by a coin drawn from `rng`.
pub fn simulate_accuracy(
    panel: &CompetencePanel,
    weights: &WeightVector,
    trials: usize,
    rng: &mut RandomStream,
) -> Result<f64> {
    simulate_accuracy_with(panel, weights, trials, ZeroWeightFallback::Majority, rng)
}

pub fn simulate_accuracy_with(
    panel: &CompetencePanel,
    weights: &WeightVector,
    trials: usize,
    fallback: ZeroWeightFallback,
    rng: &mut RandomStream,
) -> Result<f64> {
    check_len(panel.len(), weights.len())?;
    if trials == 0 {
        return Err(Error::Invalid("trials must be at least 1".to_string()));
    }
    if panel.len() > 64 {
        return Err(Error::Capacity {
            what: "simulated election",
            size: panel.len(),
            limit: 64,
        });
    }
    let rule = effective(weights.as_slice(), fallback);
    let wins = (0..trials)
        .filter(|_| simulate_election(panel.probs(), rule, rng))
        .count();
    Ok(wins as f64 / trials as f64)
}

/// Draws one vote profile and reports whether the rule picked the correct
/// alternative (coin flip on ties).
pub(crate) fn simulate_election(probs: &[f64], rule: Effective<'_>, rng: &mut RandomStream) -> bool {
    let mut mask = 0u64;
    for (i, &p) in probs.iter().enumerate() {
        if rng.random::<f64>() < p {
            mask |= 1 << i;
        }
    }
    match decide_effective(rule, mask, probs.len()) {
        Decision::One => true,
        Decision::Zero => false,
        Decision::Tie => rng.random::<bool>(),
    }
}

/// Result of a coalition voting `1` while everyone else votes `0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Outcome {
    Win,
    Lose,
    Tie,
}

impl From<Decision> for Outcome {
    fn from(d: Decision) -> Self {
        match d {
            Decision::One => Outcome::Win,
            Decision::Zero => Outcome::Lose,
            Decision::Tie => Outcome::Tie,
        }
    }
}

/// Outcome of every subset of experts voting together against the rest.
///
/// Subsets are bitmasks: bit `i` set means expert `i` is in the coalition.
/// Two weight vectors define the same rule iff their structures are equal.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CoalitionStructure {
    experts: usize,
    outcomes: Vec<Outcome>,
}

impl CoalitionStructure {
    pub fn experts(&self) -> usize {
        self.experts
    }

    pub fn outcome(&self, subset: u64) -> Outcome {
        self.outcomes[subset as usize]
    }

    pub fn outcomes(&self) -> &[Outcome] {
        &self.outcomes
    }

    pub fn winning(&self) -> impl Iterator<Item = u64> + '_ {
        self.outcomes
            .iter()
            .enumerate()
            .filter(|(_, o)| **o == Outcome::Win)
            .map(|(s, _)| s as u64)
    }

    fn full(&self) -> u64 {
        low_bits(self.experts)
    }

    /// Every superset of a winning coalition wins.
    pub fn is_monotone(&self) -> bool {
        self.winning().all(|s| {
            (0..self.experts)
                .filter(|i| s >> i & 1 == 0)
                .all(|i| self.outcome(s | 1 << i) == Outcome::Win)
        })
    }

    /// `S` wins iff its complement loses, and ties iff its complement ties.
    pub fn is_complement_consistent(&self) -> bool {
        let full = self.full();
        self.outcomes.iter().enumerate().all(|(s, &o)| {
            let c = self.outcome(!(s as u64) & full);
            matches!(
                (o, c),
                (Outcome::Win, Outcome::Lose) | (Outcome::Lose, Outcome::Win) | (Outcome::Tie, Outcome::Tie)
            )
        })
    }
}

pub fn coalition_structure(weights: &WeightVector) -> Result<CoalitionStructure> {
    coalition_structure_with(weights, ZeroWeightFallback::Majority)
}

pub fn coalition_structure_with(
    weights: &WeightVector,
    fallback: ZeroWeightFallback,
) -> Result<CoalitionStructure> {
    let m = weights.len();
    if m > MAX_COALITION_EXPERTS {
        return Err(Error::Capacity {
            what: "coalition structure",
            size: m,
            limit: MAX_COALITION_EXPERTS,
        });
    }
    let rule = effective(weights.as_slice(), fallback);
    let structure = CoalitionStructure {
        experts: m,
        outcomes: (0..1u64 << m)
            .map(|s| decide_effective(rule, s, m).into())
            .collect(),
    };
    debug_assert!(structure.is_complement_consistent());
    // Negative weights reward leaving a coalition, so monotonicity only holds
    // for non-negative rules.
    debug_assert!(!weights.is_non_negative() || structure.is_monotone());
    Ok(structure)
}

/// Whether two weight vectors define the same weighted majority rule.
pub fn rules_equivalent(a: &WeightVector, b: &WeightVector) -> Result<bool> {
    check_len(a.len(), b.len())?;
    Ok(coalition_structure(a)? == coalition_structure(b)?)
}
