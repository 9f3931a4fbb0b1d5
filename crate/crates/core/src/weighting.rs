//! Judges' scores for experts and their aggregation into vote weights.
//!
//! A judge of competence `p_j` perceives an expert of competence `p_e` as
//! having competence `p_j p_e + (1 - p_j)(1 - p_e)`, the probability that the
//! two agree, and scores the expert with the log-odds of that perception.
//! Scores from several judges are restricted by a [`WeightPolicy`] per judge
//! and then averaged per expert.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Range, Result};
use crate::voting::{coalition_structure, CoalitionStructure, CompetencePanel, PanelKind, WeightVector};

/// Resolution of [`equivalence_threshold`].
pub const THRESHOLD_TOLERANCE: f64 = 1e-4;

fn open_unit(what: &'static str, p: f64) -> Result<()> {
    if p > 0.0 && p < 1.0 {
        Ok(())
    } else {
        Err(Error::Domain {
            what,
            value: p,
            range: Range::Open01,
        })
    }
}

fn closed_unit(what: &'static str, p: f64) -> Result<()> {
    if (0.0..=1.0).contains(&p) {
        Ok(())
    } else {
        Err(Error::Domain {
            what,
            value: p,
            range: Range::Closed01,
        })
    }
}

/// Natural log-odds `ln(p / (1 - p))`. Undefined at complete certainty.
pub fn log_odds(p: f64) -> Result<f64> {
    open_unit("probability", p)?;
    Ok(log_odds_unchecked(p))
}

#[inline]
pub(crate) fn log_odds_unchecked(p: f64) -> f64 {
    (p / (1.0 - p)).ln()
}

/// The log-odds rule for a panel of known competences.
pub fn optimal_weights(panel: &CompetencePanel) -> Result<WeightVector> {
    let weights = panel
        .probs()
        .iter()
        .map(|&p| log_odds(p))
        .collect::<Result<Vec<_>>>()?;
    WeightVector::new(weights)
}

/// Probability that a judge and an expert agree.
pub fn perceived_competence(judge: f64, expert: f64) -> Result<f64> {
    closed_unit("judge competence", judge)?;
    open_unit("expert competence", expert)?;
    Ok(perceived_unchecked(judge, expert))
}

#[inline]
pub(crate) fn perceived_unchecked(judge: f64, expert: f64) -> f64 {
    judge * expert + (1.0 - judge) * (1.0 - expert)
}

/// The scores one judge assigns to every expert of the panel.
pub fn judge_scores(judge: f64, panel: &CompetencePanel) -> Result<WeightVector> {
    let scores = panel
        .probs()
        .iter()
        .map(|&e| perceived_competence(judge, e).and_then(log_odds))
        .collect::<Result<Vec<_>>>()?;
    WeightVector::new(scores)
}

/// How judges' scores are restricted before they are averaged.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub enum WeightPolicy {
    #[default]
    Unrestricted,
    /// Negative scores are raised to zero.
    NonNegative,
    /// Non-negative, then each judge's row is scaled to sum to one.
    Normalized,
}

impl WeightPolicy {
    pub const ALL: [WeightPolicy; 3] = [
        WeightPolicy::Unrestricted,
        WeightPolicy::NonNegative,
        WeightPolicy::Normalized,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            WeightPolicy::Unrestricted => "unrestricted",
            WeightPolicy::NonNegative => "nonneg",
            WeightPolicy::Normalized => "normalized",
        }
    }
}

impl fmt::Display for WeightPolicy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for WeightPolicy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "unrestricted" => Ok(WeightPolicy::Unrestricted),
            "nonneg" | "non-negative" | "nonnegative" => Ok(WeightPolicy::NonNegative),
            "normalized" | "normalised" => Ok(WeightPolicy::Normalized),
            other => Err(Error::Invalid(format!(
                "unknown policy `{other}` (expected unrestricted, nonneg or normalized)"
            ))),
        }
    }
}

/// Judge-by-expert scores, stored row-major (one row per judge).
#[derive(Debug, Clone, PartialEq)]
pub struct ScoreMatrix {
    judges: usize,
    experts: usize,
    data: Vec<f64>,
}

impl ScoreMatrix {
    pub fn from_rows(rows: Vec<Vec<f64>>) -> Result<Self> {
        let judges = rows.len();
        if judges == 0 {
            return Err(Error::Empty {
                what: "score matrix",
            });
        }
        let experts = rows[0].len();
        if experts == 0 {
            return Err(Error::Empty {
                what: "score row",
            });
        }
        let mut data = Vec::with_capacity(judges * experts);
        for row in rows {
            if row.len() != experts {
                return Err(Error::Dimension {
                    expected: experts,
                    found: row.len(),
                });
            }
            data.extend(row);
        }
        if let Some((index, &value)) = data.iter().enumerate().find(|(_, v)| !v.is_finite()) {
            return Err(Error::NonFinite {
                what: "score",
                index,
                value,
            });
        }
        Ok(Self {
            judges,
            experts,
            data,
        })
    }

    pub fn judges(&self) -> usize {
        self.judges
    }

    pub fn experts(&self) -> usize {
        self.experts
    }

    pub fn row(&self, judge: usize) -> &[f64] {
        &self.data[judge * self.experts..(judge + 1) * self.experts]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[f64]> {
        self.data.chunks_exact(self.experts)
    }
}

/// Every judge scores every expert.
pub fn score_matrix(judges: &CompetencePanel, experts: &CompetencePanel) -> Result<ScoreMatrix> {
    if experts.kind() != PanelKind::Experts {
        return Err(Error::Invalid(
            "scores need an expert panel with competences in (0, 1)".to_string(),
        ));
    }
    let rows = judges
        .probs()
        .iter()
        .map(|&j| judge_scores(j, experts).map(WeightVector::into_inner))
        .collect::<Result<Vec<_>>>()?;
    ScoreMatrix::from_rows(rows)
}

/// Restricts one judge's row in place.
#[inline]
pub(crate) fn restrict_row(row: &mut [f64], policy: WeightPolicy) {
    match policy {
        WeightPolicy::Unrestricted => {}
        WeightPolicy::NonNegative => {
            for s in row.iter_mut() {
                *s = s.max(0.0);
            }
        }
        WeightPolicy::Normalized => {
            for s in row.iter_mut() {
                *s = s.max(0.0);
            }
            let sum: f64 = row.iter().sum();
            if sum > 0.0 {
                for s in row.iter_mut() {
                    *s /= sum;
                }
            } else {
                // an all-pessimistic judge spreads its budget evenly
                let uniform = 1.0 / row.len() as f64;
                row.fill(uniform);
            }
        }
    }
}

pub fn apply_policy(scores: &ScoreMatrix, policy: WeightPolicy) -> ScoreMatrix {
    let mut out = scores.clone();
    for row in out.data.chunks_exact_mut(out.experts) {
        restrict_row(row, policy);
    }
    out
}

/// Per-expert mean of the judges' scores.
pub fn aggregate(scores: &ScoreMatrix) -> WeightVector {
    let mut sums = vec![0.0; scores.experts];
    for row in scores.rows() {
        accumulate(&mut sums, row);
    }
    finish_mean(&mut sums, scores.judges);
    WeightVector::new(sums).expect("mean of finite scores is finite")
}

#[inline]
pub(crate) fn accumulate(sums: &mut [f64], row: &[f64]) {
    for (s, v) in sums.iter_mut().zip(row) {
        *s += v;
    }
}

#[inline]
pub(crate) fn finish_mean(sums: &mut [f64], judges: usize) {
    let n = judges as f64;
    for s in sums.iter_mut() {
        *s /= n;
    }
}

/// Fills `weights` with the aggregated, policy-restricted scores of `judges`
/// for `experts`, using `row` as scratch, with the same arithmetic as
/// [`score_matrix`] + [`apply_policy`] + [`aggregate`]. Inputs must be valid.
pub(crate) fn aggregate_into(
    judges: &[f64],
    experts: &[f64],
    policy: WeightPolicy,
    row: &mut [f64],
    weights: &mut [f64],
) {
    weights.fill(0.0);
    for &j in judges {
        for (s, &e) in row.iter_mut().zip(experts) {
            *s = log_odds_unchecked(perceived_unchecked(j, e));
        }
        restrict_row(row, policy);
        accumulate(weights, row);
    }
    finish_mean(weights, judges.len());
}

/// Geometric mean of the odds implied by perceived competences, computed in
/// the log domain.
pub fn geometric_mean_odds(perceived: &[f64]) -> Result<f64> {
    if perceived.is_empty() {
        return Err(Error::Empty {
            what: "perceived competences",
        });
    }
    let mut total = 0.0;
    for &p in perceived {
        total += log_odds(p)?;
    }
    Ok((total / perceived.len() as f64).exp())
}

/// Factor by which the judges' geometric-mean odds miss the true odds.
/// The aggregated unrestricted weight is off from the optimal one by `ln(alpha)`.
pub fn gm_deviation_alpha(true_p: f64, perceived: &[f64]) -> Result<f64> {
    open_unit("true competence", true_p)?;
    let gm = geometric_mean_odds(perceived)?;
    Ok(gm / (true_p / (1.0 - true_p)))
}

/// Where judge-assigned scores start to define the log-odds rule.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum EquivalenceThreshold {
    /// Already equivalent just above `p_j = 0.5`.
    AlwaysEquivalent,
    /// Equivalent for every competence above this value (within tolerance).
    Above(f64),
    /// Only a perfect judge reproduces the rule.
    OnlyPerfect,
}

impl EquivalenceThreshold {
    pub fn value(self) -> Option<f64> {
        match self {
            EquivalenceThreshold::Above(v) => Some(v),
            _ => None,
        }
    }
}

/// Lowest single-judge competence above which the judge's scores define the
/// same rule as the log-odds weights, found by bisection.
pub fn equivalence_threshold(panel: &CompetencePanel) -> Result<EquivalenceThreshold> {
    let target = coalition_structure(&optimal_weights(panel)?)?;
    let matches = |pj: f64| -> Result<bool> { same_rule(pj, panel, &target) };

    let tol = THRESHOLD_TOLERANCE;
    if matches(0.5 + tol)? {
        return Ok(EquivalenceThreshold::AlwaysEquivalent);
    }
    if !matches(1.0 - tol)? {
        return Ok(EquivalenceThreshold::OnlyPerfect);
    }
    let (mut lo, mut hi) = (0.5 + tol, 1.0 - tol);
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        if matches(mid)? {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    // Bisection assumes equivalence is monotone in p_j; confirm on a probe
    // grid above the bracket and fall back to a full scan otherwise.
    const PROBES: usize = 64;
    for k in 1..=PROBES {
        let pj = hi + (1.0 - tol - hi) * k as f64 / PROBES as f64;
        if !matches(pj)? {
            return scan_threshold(panel, &target);
        }
    }
    Ok(EquivalenceThreshold::Above(hi))
}

fn same_rule(pj: f64, panel: &CompetencePanel, target: &CoalitionStructure) -> Result<bool> {
    Ok(coalition_structure(&judge_scores(pj, panel)?)? == *target)
}

/// Walks down from `1 - tol` and returns the last competence of the
/// contiguous equivalent run that ends at the top.
fn scan_threshold(panel: &CompetencePanel, target: &CoalitionStructure) -> Result<EquivalenceThreshold> {
    let steps = ((0.5 / THRESHOLD_TOLERANCE).round() as usize).saturating_sub(1);
    let mut last = 1.0 - THRESHOLD_TOLERANCE;
    for k in 1..steps {
        let pj = 1.0 - THRESHOLD_TOLERANCE * (k + 1) as f64;
        if !same_rule(pj, panel, target)? {
            return Ok(EquivalenceThreshold::Above(last));
        }
        last = pj;
    }
    Ok(EquivalenceThreshold::AlwaysEquivalent)
}
