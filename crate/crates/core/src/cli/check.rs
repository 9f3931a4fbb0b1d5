//! Property suites behind `jury check`.
//!
//! Each suite draws its cases from a fixed seed, so a run is repeatable.

use rand::Rng;

use crate::error::Result;
use crate::sampling::RandomStream;
use crate::voting::{coalition_structure, exact_accuracy, CompetencePanel, WeightVector};
use crate::weighting::{aggregate, gm_deviation_alpha, judge_scores, log_odds, optimal_weights, ScoreMatrix};

use super::commands::example1_checks;

pub const SUITES: &[&str] = &[
    "example1",
    "theorem1",
    "corollary1",
    "negation",
    "coalitions",
    "optimality",
];

#[derive(Debug, Clone, Copy)]
pub struct CheckOptions {
    pub seed: u64,
    /// Tolerance for the aggregation identities.
    pub epsilon: f64,
    /// Tolerance for the optimality comparison.
    pub optimality_epsilon: f64,
    pub cases: usize,
}

impl Default for CheckOptions {
    fn default() -> Self {
        Self {
            seed: 2024,
            epsilon: 1e-9,
            optimality_epsilon: 1e-12,
            cases: 1000,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SuiteReport {
    pub name: &'static str,
    pub cases: usize,
    pub failures: Vec<String>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

pub fn run_suite(name: &str, opts: &CheckOptions) -> Option<Result<SuiteReport>> {
    let name = *SUITES.iter().find(|s| **s == name)?;
    let rng = RandomStream::from_seed(opts.seed).derive(&[SUITES.iter().position(|s| *s == name)? as u64]);
    Some(match name {
        "example1" => example1_suite(),
        "theorem1" => theorem1_suite(opts, rng),
        "corollary1" => corollary1_suite(opts, rng),
        "negation" => negation_suite(opts, rng),
        "coalitions" => coalition_suite(opts, rng),
        "optimality" => optimality_suite(opts, rng),
        _ => unreachable!(),
    })
}

fn report(name: &'static str, cases: usize, failures: Vec<String>) -> SuiteReport {
    SuiteReport {
        name,
        cases,
        failures,
    }
}

fn example1_suite() -> Result<SuiteReport> {
    let checks = example1_checks()?;
    let failures = checks
        .iter()
        .filter(|c| !c.ok)
        .map(|c| format!("{}: got {}, expected {}", c.name, c.value, c.target))
        .collect();
    Ok(report("example1", checks.len(), failures))
}

fn logistic(x: f64) -> f64 {
    1.0 / (1.0 + (-x).exp())
}

fn ln_odds(p: f64) -> f64 {
    p.ln() - (1.0 - p).ln()
}

/// Perceived competences of `judges` judges for an expert of `true_p`,
/// built so that their odds have a geometric mean of `alpha` times the true
/// odds: the first `judges - 1` are free and the last one is solved for.
fn construct_perceived(rng: &mut RandomStream, true_p: f64, judges: usize, alpha: f64) -> Vec<f64> {
    let centre = ln_odds(true_p) + alpha.ln();
    loop {
        let free: Vec<f64> = (0..judges - 1).map(|_| centre + rng.random_range(-2.0..2.0)).collect();
        let last = judges as f64 * centre - free.iter().sum::<f64>();
        // keep every entry well inside (0, 1) so its odds stay exact
        if free.iter().chain([&last]).all(|x| x.abs() <= 6.0) {
            let mut all: Vec<f64> = free.into_iter().map(logistic).collect();
            all.push(logistic(last));
            return all;
        }
    }
}

fn random_shape(rng: &mut RandomStream) -> (usize, usize) {
    (rng.random_range(1..=6), rng.random_range(1..=10))
}

/// `perceived[e][j]` transposed into a judge-major score matrix.
fn scores_for(perceived: &[Vec<f64>]) -> Result<ScoreMatrix> {
    let judges = perceived[0].len();
    let rows = (0..judges)
        .map(|j| perceived.iter().map(|col| log_odds(col[j])).collect::<Result<Vec<_>>>())
        .collect::<Result<Vec<_>>>()?;
    ScoreMatrix::from_rows(rows)
}

fn theorem1_suite(opts: &CheckOptions, mut rng: RandomStream) -> Result<SuiteReport> {
    let mut failures = Vec::new();
    for case in 0..opts.cases {
        let (m, n) = random_shape(&mut rng);
        let truth: Vec<f64> = (0..m).map(|_| rng.random_range(0.05..0.95)).collect();
        let perceived: Vec<Vec<f64>> = truth
            .iter()
            .map(|&p| construct_perceived(&mut rng, p, n, 1.0))
            .collect();
        let weights = aggregate(&scores_for(&perceived)?);
        let optimal = optimal_weights(&CompetencePanel::experts(truth.clone())?)?;
        let worst = max_abs_diff(weights.as_slice(), optimal.as_slice());
        if worst >= opts.epsilon {
            failures.push(format!("case {case}: |aggregate - optimal| = {worst:e} for {truth:?}"));
        }
    }
    Ok(report("theorem1", opts.cases, failures))
}

fn corollary1_suite(opts: &CheckOptions, mut rng: RandomStream) -> Result<SuiteReport> {
    let mut failures = Vec::new();
    for case in 0..opts.cases {
        let (m, n) = random_shape(&mut rng);
        let truth: Vec<f64> = (0..m).map(|_| rng.random_range(0.05..0.95)).collect();
        let perceived: Vec<Vec<f64>> = (0..m)
            .map(|_| (0..n).map(|_| rng.random_range(0.02..0.98)).collect())
            .collect();
        let weights = aggregate(&scores_for(&perceived)?);
        let optimal = optimal_weights(&CompetencePanel::experts(truth.clone())?)?;
        for e in 0..m {
            let alpha = gm_deviation_alpha(truth[e], &perceived[e])?;
            let err = (weights.as_slice()[e] - optimal.as_slice()[e] - alpha.ln()).abs();
            if err >= opts.epsilon {
                failures.push(format!("case {case}, expert {e}: residual {err:e}"));
            }
        }
    }
    Ok(report("corollary1", opts.cases, failures))
}

fn random_panel(rng: &mut RandomStream, m: usize) -> Result<CompetencePanel> {
    CompetencePanel::experts((0..m).map(|_| rng.random_range(0.01..0.99)).collect())
}

fn negation_suite(opts: &CheckOptions, mut rng: RandomStream) -> Result<SuiteReport> {
    let mut failures = Vec::new();
    for case in 0..opts.cases {
        let m = rng.random_range(1..=7);
        let panel = random_panel(&mut rng, m)?;
        let weights = WeightVector::new((0..m).map(|_| rng.random_range(-3.0..3.0)).collect())?;
        let a = exact_accuracy(&panel, &weights)?;
        let b = exact_accuracy(&panel, &weights.scaled(-1.0)?)?;
        if (a + b - 1.0).abs() > 1e-12 {
            failures.push(format!("case {case}: weights {a} + negated {b} != 1"));
        }
        let pj: f64 = rng.random_range(0.0..1.0);
        let up = judge_scores(pj, &panel)?;
        let down = judge_scores(1.0 - pj, &panel)?;
        if max_abs_diff(up.as_slice(), &down.as_slice().iter().map(|x| -x).collect::<Vec<_>>()) > 1e-12 {
            failures.push(format!("case {case}: judge scores at {pj} and {} are not opposite", 1.0 - pj));
        }
        if (pj - 0.5).abs() > 1e-9 {
            let sum = exact_accuracy(&panel, &up)? + exact_accuracy(&panel, &down)?;
            if (sum - 1.0).abs() > 1e-9 {
                failures.push(format!("case {case}: judge accuracies at {pj} and its mirror sum to {sum}"));
            }
        }
    }
    Ok(report("negation", opts.cases, failures))
}

fn coalition_suite(opts: &CheckOptions, mut rng: RandomStream) -> Result<SuiteReport> {
    let mut failures = Vec::new();
    for case in 0..opts.cases {
        let m = rng.random_range(1..=8);
        let weights = WeightVector::new((0..m).map(|_| rng.random_range(0.0..2.0)).collect())?;
        let s = coalition_structure(&weights)?;
        if !s.is_monotone() || !s.is_complement_consistent() {
            failures.push(format!("case {case}: inconsistent structure for {:?}", weights.as_slice()));
        }
        let scale = rng.random_range(0.01..100.0);
        if coalition_structure(&weights.scaled(scale)?)? != s {
            failures.push(format!("case {case}: rescaling by {scale} changed the rule"));
        }
    }
    Ok(report("coalitions", opts.cases, failures))
}

/// 500 panels with 100 challengers each, independent of `cases`.
fn optimality_suite(opts: &CheckOptions, mut rng: RandomStream) -> Result<SuiteReport> {
    const PANELS: usize = 500;
    const CHALLENGERS: usize = 100;
    let mut failures = Vec::new();
    for case in 0..PANELS {
        let m = rng.random_range(1..=5);
        let panel = random_panel(&mut rng, m)?;
        let best = exact_accuracy(&panel, &optimal_weights(&panel)?)?;
        for _ in 0..CHALLENGERS {
            let challenger = WeightVector::new((0..m).map(|_| rng.random_range(-5.0..5.0)).collect())?;
            let a = exact_accuracy(&panel, &challenger)?;
            if a > best + opts.optimality_epsilon {
                failures.push(format!(
                    "case {case}: {:?} reaches {a} above the log-odds rule's {best}",
                    challenger.as_slice()
                ));
            }
        }
    }
    Ok(report("optimality", PANELS * CHALLENGERS, failures))
}

fn max_abs_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}
