//! Monte Carlo sweeps over competence distributions.
//!
//! Each grid cell is estimated independently. A cell owns the substream
//! derived from the master seed by the indices of its expert distribution
//! `(sigma_E, mu_E)`, and trial `t` owns the substream `t` of that. Cells that
//! differ only in their judge parameters or policy therefore see the same
//! expert panels, which makes comparisons along those axes paired. Results do
//! not depend on cell execution order or thread count.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::sampling::{fill_truncated_normal, RandomStream, TruncatedNormalSpec, DEFAULT_HI, DEFAULT_LO};
use crate::voting::{
    effective, exact_accuracy_unchecked, simulate_election, CompetencePanel, PanelKind, WeightVector,
    ZeroWeightFallback, MAX_ACCURACY_EXPERTS,
};
use crate::weighting::{aggregate_into, judge_scores, WeightPolicy};

const EXPERT_STREAM: u64 = 0;
const JUDGE_STREAM: u64 = 1;
const VOTE_STREAM: u64 = 2;

/// How accuracy is measured for each sampled panel.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum EvaluationMode {
    /// Exact enumeration of every vote profile of the sampled panel.
    #[default]
    ExactPerPanel,
    /// One simulated election per trial.
    SimulatedVotes,
}

impl EvaluationMode {
    pub fn as_str(self) -> &'static str {
        match self {
            EvaluationMode::ExactPerPanel => "exact",
            EvaluationMode::SimulatedVotes => "simulated",
        }
    }
}

impl fmt::Display for EvaluationMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for EvaluationMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "exact" => Ok(EvaluationMode::ExactPerPanel),
            "simulated" => Ok(EvaluationMode::SimulatedVotes),
            other => Err(Error::Invalid(format!(
                "unknown evaluation mode `{other}` (expected exact or simulated)"
            ))),
        }
    }
}

/// Where the judges' competences come from in a cell.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum JudgeSource {
    /// A single judge of known competence.
    Fixed(f64),
    /// `count` judges drawn afresh every trial.
    Sampled {
        spec: TruncatedNormalSpec,
        count: usize,
    },
}

/// Everything that determines one cell's estimate apart from its stream.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CellSpec {
    pub experts: TruncatedNormalSpec,
    pub expert_count: usize,
    pub judges: JudgeSource,
    pub policy: WeightPolicy,
    pub trials: usize,
    pub mode: EvaluationMode,
    pub fallback: ZeroWeightFallback,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CellEstimate {
    pub mean: f64,
    pub stderr: f64,
}

/// Running mean and variance (Welford).
#[derive(Default)]
struct Moments {
    n: usize,
    mean: f64,
    m2: f64,
}

impl Moments {
    fn push(&mut self, x: f64) {
        self.n += 1;
        let delta = x - self.mean;
        self.mean += delta / self.n as f64;
        self.m2 += delta * (x - self.mean);
    }

    fn estimate(&self) -> CellEstimate {
        let stderr = if self.n > 1 {
            (self.m2 / (self.n - 1) as f64 / self.n as f64).sqrt()
        } else {
            0.0
        };
        CellEstimate {
            mean: self.mean.clamp(0.0, 1.0),
            stderr,
        }
    }
}

fn check_cell(cell: &CellSpec) -> Result<()> {
    if cell.trials == 0 {
        return Err(Error::Invalid("trials must be at least 1".to_string()));
    }
    let limit = match cell.mode {
        EvaluationMode::ExactPerPanel => MAX_ACCURACY_EXPERTS,
        EvaluationMode::SimulatedVotes => 64,
    };
    if cell.expert_count == 0 || cell.expert_count > limit {
        return Err(Error::Invalid(format!(
            "expert count {} must be between 1 and {limit}",
            cell.expert_count
        )));
    }
    check_bounds(&cell.experts)?;
    match cell.judges {
        JudgeSource::Fixed(p) if !(0.0..=1.0).contains(&p) => Err(Error::Invalid(format!(
            "fixed judge competence {p} is outside [0, 1]"
        ))),
        JudgeSource::Sampled { count: 0, .. } => {
            Err(Error::Invalid("judge count must be at least 1".to_string()))
        }
        JudgeSource::Sampled { spec, .. } => check_bounds(&spec),
        JudgeSource::Fixed(_) => Ok(()),
    }
}

fn check_bounds(spec: &TruncatedNormalSpec) -> Result<()> {
    if spec.lo() < 0.0 || spec.hi() > 1.0 {
        return Err(Error::InvalidSpec(format!(
            "competence bounds ({}, {}) must lie within [0, 1]",
            spec.lo(),
            spec.hi()
        )));
    }
    Ok(())
}

/// Mean accuracy over `trials` freshly sampled panels, with its standard error.
pub fn cell_accuracy(cell: &CellSpec, rng: &RandomStream) -> Result<CellEstimate> {
    check_cell(cell)?;
    let m = cell.expert_count;
    let judge_count = match cell.judges {
        JudgeSource::Fixed(_) => 1,
        JudgeSource::Sampled { count, .. } => count,
    };
    let mut experts = vec![0.0; m];
    let mut judges = vec![0.0; judge_count];
    let mut row = vec![0.0; m];
    let mut weights = vec![0.0; m];
    let mut moments = Moments::default();

    for t in 0..cell.trials as u64 {
        let trial = rng.derive(&[t]);
        fill_truncated_normal(&cell.experts, &mut trial.derive(&[EXPERT_STREAM]), &mut experts)?;
        match cell.judges {
            JudgeSource::Fixed(p) => judges[0] = p,
            JudgeSource::Sampled { spec, .. } => {
                fill_truncated_normal(&spec, &mut trial.derive(&[JUDGE_STREAM]), &mut judges)?
            }
        }
        aggregate_into(&judges, &experts, cell.policy, &mut row, &mut weights);
        let accuracy = match cell.mode {
            EvaluationMode::ExactPerPanel => exact_accuracy_unchecked(&experts, &weights, cell.fallback),
            EvaluationMode::SimulatedVotes => {
                let rule = effective(&weights, cell.fallback);
                let correct = simulate_election(&experts, rule, &mut trial.derive(&[VOTE_STREAM]));
                if correct {
                    1.0
                } else {
                    0.0
                }
            }
        };
        moments.push(accuracy);
    }
    Ok(moments.estimate())
}

/// Per-agent competence distributions of a sweep along the judge axis.
#[derive(Debug, Clone, PartialEq)]
pub enum JudgeAxis {
    /// A single judge whose competence steps through the grid.
    Fixed { competences: Vec<f64> },
    /// `count` sampled judges per trial, for every `(mu_J, sigma_J)` pair.
    Sampled {
        count: usize,
        mu_grid: Vec<f64>,
        sigma_set: Vec<f64>,
        lo: f64,
        hi: f64,
    },
}

impl JudgeAxis {
    pub fn judge_count(&self) -> usize {
        match self {
            JudgeAxis::Fixed { .. } => 1,
            JudgeAxis::Sampled { count, .. } => *count,
        }
    }
}

/// Grid of distribution parameters plus the estimation settings.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepConfig {
    pub expert_count: usize,
    pub expert_mu_grid: Vec<f64>,
    pub expert_sigma_set: Vec<f64>,
    pub expert_lo: f64,
    pub expert_hi: f64,
    pub judges: JudgeAxis,
    pub policy: WeightPolicy,
    pub trials: usize,
    pub master_seed: u64,
    pub mode: EvaluationMode,
    pub fallback: ZeroWeightFallback,
}

/// `0.1, 0.2, ..., last` without accumulated drift.
pub fn tenths(first: u32, last: u32) -> Vec<f64> {
    (first..=last).map(|k| f64::from(k) / 10.0).collect()
}

pub const DEFAULT_TRIALS: usize = 50_000;

impl SweepConfig {
    /// One judge, competence 0.1..1.0, experts with sigma in {0.1, .., 0.4}.
    pub fn single_judge_default() -> Self {
        Self {
            expert_count: 5,
            expert_mu_grid: tenths(1, 9),
            expert_sigma_set: tenths(1, 4),
            expert_lo: DEFAULT_LO,
            expert_hi: DEFAULT_HI,
            judges: JudgeAxis::Fixed {
                competences: tenths(1, 10),
            },
            policy: WeightPolicy::Unrestricted,
            trials: DEFAULT_TRIALS,
            master_seed: 0,
            mode: EvaluationMode::ExactPerPanel,
            fallback: ZeroWeightFallback::Majority,
        }
    }

    /// Ten sampled judges, both sigma sets {0.1, 0.4}.
    pub fn multi_judge_default(policy: WeightPolicy) -> Self {
        Self {
            expert_count: 5,
            expert_mu_grid: tenths(1, 9),
            expert_sigma_set: vec![0.1, 0.4],
            expert_lo: DEFAULT_LO,
            expert_hi: DEFAULT_HI,
            judges: JudgeAxis::Sampled {
                count: 10,
                mu_grid: tenths(1, 9),
                sigma_set: vec![0.1, 0.4],
                lo: DEFAULT_LO,
                hi: DEFAULT_HI,
            },
            policy,
            trials: DEFAULT_TRIALS,
            master_seed: 0,
            mode: EvaluationMode::ExactPerPanel,
            fallback: ZeroWeightFallback::Majority,
        }
    }

    pub fn cell_count(&self) -> usize {
        let judge_cells = match &self.judges {
            JudgeAxis::Fixed { competences } => competences.len(),
            JudgeAxis::Sampled {
                mu_grid, sigma_set, ..
            } => mu_grid.len() * sigma_set.len(),
        };
        self.expert_mu_grid.len() * self.expert_sigma_set.len() * judge_cells
    }

    pub fn validate(&self) -> Result<()> {
        let field = |f: &str, message: String| Error::Config {
            field: f.to_string(),
            message,
        };
        let limit = match self.mode {
            EvaluationMode::ExactPerPanel => MAX_ACCURACY_EXPERTS,
            EvaluationMode::SimulatedVotes => 64,
        };
        if self.expert_count == 0 || self.expert_count > limit {
            return Err(field(
                "expert_count",
                format!("must be between 1 and {limit} in {} mode", self.mode),
            ));
        }
        if self.trials == 0 {
            return Err(field("trials", "must be at least 1".to_string()));
        }
        check_bound_pair("expert_lo", "expert_hi", self.expert_lo, self.expert_hi)?;
        check_grid("expert_mu_grid", &self.expert_mu_grid, |v| v.is_finite())?;
        check_grid("expert_sigma_set", &self.expert_sigma_set, |v| v.is_finite() && v > 0.0)?;
        match &self.judges {
            JudgeAxis::Fixed { competences } => {
                check_grid("judge_competence_grid", competences, |v| (0.0..=1.0).contains(&v))?;
            }
            JudgeAxis::Sampled {
                count,
                mu_grid,
                sigma_set,
                lo,
                hi,
            } => {
                if *count == 0 {
                    return Err(field("judge_count", "must be at least 1".to_string()));
                }
                check_bound_pair("judge_lo", "judge_hi", *lo, *hi)?;
                check_grid("judge_mu_grid", mu_grid, |v| v.is_finite())?;
                check_grid("judge_sigma_set", sigma_set, |v| v.is_finite() && v > 0.0)?;
            }
        }
        Ok(())
    }
}

fn check_grid(name: &str, values: &[f64], ok: impl Fn(f64) -> bool) -> Result<()> {
    if values.is_empty() {
        return Err(Error::Config {
            field: name.to_string(),
            message: "must contain at least one value".to_string(),
        });
    }
    if let Some(bad) = values.iter().find(|&&v| !ok(v)) {
        return Err(Error::Config {
            field: name.to_string(),
            message: format!("value {bad} is out of range"),
        });
    }
    Ok(())
}

fn check_bound_pair(lo_name: &str, hi_name: &str, lo: f64, hi: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&lo) {
        return Err(Error::Config {
            field: lo_name.to_string(),
            message: format!("{lo} must lie within [0, 1]"),
        });
    }
    if !(0.0..=1.0).contains(&hi) || hi <= lo {
        return Err(Error::Config {
            field: hi_name.to_string(),
            message: format!("{hi} must lie within [0, 1] and exceed {lo_name} = {lo}"),
        });
    }
    Ok(())
}

/// One grid cell of a sweep.
#[derive(Debug, Clone, PartialEq)]
pub struct CellRecord {
    pub sigma_e: f64,
    pub mu_e: f64,
    /// Fixed judge competence, or `mu_J` for sampled judges.
    pub judge_param1: f64,
    /// `sigma_J` for sampled judges.
    pub judge_param2: Option<f64>,
    pub accuracy_mean: f64,
    pub accuracy_stderr: f64,
    pub trials: usize,
    pub seed: u64,
    pub policy: WeightPolicy,
    pub mode: EvaluationMode,
}

impl CellRecord {
    fn coordinates(&self) -> [f64; 4] {
        [
            self.sigma_e,
            self.mu_e,
            self.judge_param1,
            self.judge_param2.unwrap_or(f64::NEG_INFINITY),
        ]
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepResult {
    pub records: Vec<CellRecord>,
}

impl SweepResult {
    pub fn grid_mean(&self) -> f64 {
        self.records.iter().map(|r| r.accuracy_mean).sum::<f64>() / self.records.len() as f64
    }

    /// Standard error of [`grid_mean`](Self::grid_mean), treating cells as independent.
    pub fn grid_mean_stderr(&self) -> f64 {
        let n = self.records.len() as f64;
        self.records
            .iter()
            .map(|r| r.accuracy_stderr * r.accuracy_stderr)
            .sum::<f64>()
            .sqrt()
            / n
    }

    pub fn find(&self, sigma_e: f64, mu_e: f64, judge_param1: f64, judge_param2: Option<f64>) -> Option<&CellRecord> {
        let eq = |a: f64, b: f64| (a - b).abs() < 1e-12;
        self.records.iter().find(|r| {
            eq(r.sigma_e, sigma_e)
                && eq(r.mu_e, mu_e)
                && eq(r.judge_param1, judge_param1)
                && match (r.judge_param2, judge_param2) {
                    (Some(a), Some(b)) => eq(a, b),
                    (None, None) => true,
                    _ => false,
                }
        })
    }
}

struct Job {
    stream_path: [u64; 2],
    sigma_e: f64,
    mu_e: f64,
    judge_param1: f64,
    judge_param2: Option<f64>,
    spec: CellSpec,
}

fn jobs(config: &SweepConfig) -> Result<Vec<Job>> {
    let mut jobs = Vec::with_capacity(config.cell_count());
    for (si, &sigma_e) in config.expert_sigma_set.iter().enumerate() {
        for (mi, &mu_e) in config.expert_mu_grid.iter().enumerate() {
            let experts = TruncatedNormalSpec::new(mu_e, sigma_e, config.expert_lo, config.expert_hi)?;
            let mut push = |judge_param1: f64, judge_param2: Option<f64>, judges: JudgeSource| {
                jobs.push(Job {
                    stream_path: [si as u64, mi as u64],
                    sigma_e,
                    mu_e,
                    judge_param1,
                    judge_param2,
                    spec: CellSpec {
                        experts,
                        expert_count: config.expert_count,
                        judges,
                        policy: config.policy,
                        trials: config.trials,
                        mode: config.mode,
                        fallback: config.fallback,
                    },
                });
            };
            match &config.judges {
                JudgeAxis::Fixed { competences } => {
                    for &p in competences {
                        push(p, None, JudgeSource::Fixed(p));
                    }
                }
                JudgeAxis::Sampled {
                    count,
                    mu_grid,
                    sigma_set,
                    lo,
                    hi,
                } => {
                    for &mu_j in mu_grid {
                        for &sigma_j in sigma_set {
                            let spec = TruncatedNormalSpec::new(mu_j, sigma_j, *lo, *hi)?;
                            push(mu_j, Some(sigma_j), JudgeSource::Sampled { spec, count: *count });
                        }
                    }
                }
            }
        }
    }
    Ok(jobs)
}

fn cell_label(job: &Job) -> String {
    match job.judge_param2 {
        None => format!(
            "(sigma_E={}, mu_E={}, p_j={})",
            job.sigma_e, job.mu_e, job.judge_param1
        ),
        Some(sigma_j) => format!(
            "(sigma_E={}, mu_E={}, mu_J={}, sigma_J={})",
            job.sigma_e, job.mu_e, job.judge_param1, sigma_j
        ),
    }
}

/// Runs every cell of the grid (in parallel on the current rayon pool) and
/// returns records sorted by `(sigma_E, mu_E, judge_param1, judge_param2)`.
pub fn run_sweep(config: &SweepConfig) -> Result<SweepResult> {
    config.validate()?;
    let master = RandomStream::from_seed(config.master_seed);
    let jobs = jobs(config)?;
    let mut records = jobs
        .par_iter()
        .map(|job| {
            let estimate = cell_accuracy(&job.spec, &master.derive(&job.stream_path)).map_err(|e| Error::Cell {
                cell: cell_label(job),
                source: Box::new(e),
            })?;
            Ok(CellRecord {
                sigma_e: job.sigma_e,
                mu_e: job.mu_e,
                judge_param1: job.judge_param1,
                judge_param2: job.judge_param2,
                accuracy_mean: estimate.mean,
                accuracy_stderr: estimate.stderr,
                trials: config.trials,
                seed: config.master_seed,
                policy: config.policy,
                mode: config.mode,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    records.sort_by(|a, b| {
        a.coordinates()
            .iter()
            .zip(b.coordinates().iter())
            .map(|(x, y)| x.total_cmp(y))
            .find(|o| o.is_ne())
            .unwrap_or(std::cmp::Ordering::Equal)
    });
    Ok(SweepResult { records })
}

/// Sweep over a single judge of fixed competences.
pub fn single_judge_sweep(config: &SweepConfig) -> Result<SweepResult> {
    if !matches!(config.judges, JudgeAxis::Fixed { .. }) {
        return Err(Error::Config {
            field: "judge_count".to_string(),
            message: "single-judge sweep needs a fixed judge competence grid".to_string(),
        });
    }
    run_sweep(config)
}

/// Sweep over sampled judge panels.
pub fn multi_judge_sweep(config: &SweepConfig) -> Result<SweepResult> {
    if !matches!(config.judges, JudgeAxis::Sampled { .. }) {
        return Err(Error::Config {
            field: "judge_count".to_string(),
            message: "multi-judge sweep needs sampled judges (mu_J grid and sigma_J set)".to_string(),
        });
    }
    run_sweep(config)
}

/// Exact accuracy of a single judge's scores as its competence goes from 0 to 1.
pub fn judge_curve(panel: &CompetencePanel, resolution: usize) -> Result<Vec<(f64, f64)>> {
    judge_curve_with(panel, resolution, ZeroWeightFallback::Majority)
}

pub fn judge_curve_with(
    panel: &CompetencePanel,
    resolution: usize,
    fallback: ZeroWeightFallback,
) -> Result<Vec<(f64, f64)>> {
    if resolution < 2 {
        return Err(Error::Invalid(format!(
            "curve resolution must be at least 2, got {resolution}"
        )));
    }
    if panel.kind() != PanelKind::Experts {
        return Err(Error::Invalid("curve needs an expert panel".to_string()));
    }
    (0..resolution)
        .map(|k| {
            let pj = k as f64 / (resolution - 1) as f64;
            let scores: WeightVector = judge_scores(pj, panel)?;
            let accuracy = crate::voting::exact_accuracy_with(panel, &scores, fallback)?;
            Ok((pj, accuracy))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::voting::exact_accuracy;
    use crate::weighting::optimal_weights;

    const EXAMPLE: [f64; 5] = [0.6, 0.6, 0.6, 0.7, 0.9];

    fn cell(judges: JudgeSource, mu: f64, sigma: f64, trials: usize) -> CellSpec {
        CellSpec {
            experts: TruncatedNormalSpec::with_default_bounds(mu, sigma).unwrap(),
            expert_count: 5,
            judges,
            policy: WeightPolicy::Unrestricted,
            trials,
            mode: EvaluationMode::ExactPerPanel,
            fallback: ZeroWeightFallback::Majority,
        }
    }

    #[test]
    fn perfect_judge_matches_optimal_rule_and_beats_uninformed() {
        let rng = RandomStream::from_seed(17).derive(&[0, 0]);
        let trials = 2000;
        let perfect = cell_accuracy(&cell(JudgeSource::Fixed(1.0), 0.6, 0.3, trials), &rng).unwrap();
        let uninformed = cell_accuracy(&cell(JudgeSource::Fixed(0.5), 0.6, 0.3, trials), &rng).unwrap();

        // same panels, evaluated independently under the log-odds rule and majority
        let spec = TruncatedNormalSpec::with_default_bounds(0.6, 0.3).unwrap();
        let (mut opt, mut maj) = (0.0, 0.0);
        for t in 0..trials as u64 {
            let mut s = rng.derive(&[t]).derive(&[EXPERT_STREAM]);
            let panel = crate::sampling::sample_panel(5, &spec, &mut s).unwrap();
            opt += exact_accuracy(&panel, &optimal_weights(&panel).unwrap()).unwrap();
            maj += exact_accuracy(&panel, &WeightVector::equal(5).unwrap()).unwrap();
        }
        assert!((perfect.mean - opt / trials as f64).abs() < 1e-12);
        assert!((uninformed.mean - maj / trials as f64).abs() < 1e-12);
        assert!(perfect.mean >= uninformed.mean);
    }

    #[test]
    fn narrow_expert_distribution_approaches_fixed_panel() {
        let rng = RandomStream::from_seed(3);
        let narrow = cell(JudgeSource::Fixed(0.6), 0.6, 1e-6, 200);
        let est = cell_accuracy(&narrow, &rng).unwrap();
        let panel = CompetencePanel::experts(vec![0.6; 5]).unwrap();
        let scores = crate::weighting::judge_scores(0.6, &panel).unwrap();
        let exact = exact_accuracy(&panel, &scores).unwrap();
        assert!((est.mean - exact).abs() < 1e-4);
    }

    #[test]
    fn cell_is_deterministic_and_stderr_consistent() {
        let rng = RandomStream::from_seed(8);
        let c = cell(JudgeSource::Fixed(0.7), 0.5, 0.2, 500);
        let a = cell_accuracy(&c, &rng).unwrap();
        let b = cell_accuracy(&c, &rng).unwrap();
        assert_eq!(a, b);
        assert!(a.stderr > 0.0 && a.stderr < 0.05);
        let one = cell_accuracy(&CellSpec { trials: 1, ..c }, &rng).unwrap();
        assert_eq!(one.stderr, 0.0);
    }

    #[test]
    fn cell_sampling_failure_is_reported() {
        let bad = CellSpec {
            experts: TruncatedNormalSpec::new(0.0, 0.001, 0.8, 0.9).unwrap(),
            ..cell(JudgeSource::Fixed(0.7), 0.5, 0.2, 3)
        };
        let config = SweepConfig {
            expert_mu_grid: vec![0.0],
            expert_sigma_set: vec![0.001],
            expert_lo: 0.8,
            expert_hi: 0.9,
            judges: JudgeAxis::Fixed {
                competences: vec![0.7],
            },
            trials: 3,
            ..SweepConfig::single_judge_default()
        };
        assert!(matches!(
            cell_accuracy(&bad, &RandomStream::from_seed(0)),
            Err(Error::SamplingFailure { .. })
        ));
        let err = run_sweep(&config).unwrap_err();
        assert!(err.to_string().contains("mu_E=0"), "{err}");
    }

    #[test]
    fn default_grids_have_expected_sizes() {
        assert_eq!(SweepConfig::single_judge_default().cell_count(), 360);
        assert_eq!(SweepConfig::multi_judge_default(WeightPolicy::Normalized).cell_count(), 324);
        assert_eq!(tenths(1, 10).last(), Some(&1.0));
    }

    #[test]
    fn validation_names_fields() {
        let mut c = SweepConfig::single_judge_default();
        c.expert_sigma_set = vec![0.1, -0.2];
        match c.validate() {
            Err(Error::Config { field, .. }) => assert_eq!(field, "expert_sigma_set"),
            other => panic!("{other:?}"),
        }
        let mut c = SweepConfig::single_judge_default();
        c.trials = 0;
        assert!(matches!(c.validate(), Err(Error::Config { field, .. }) if field == "trials"));
        let mut c = SweepConfig::multi_judge_default(WeightPolicy::NonNegative);
        c.judges = JudgeAxis::Sampled {
            count: 10,
            mu_grid: vec![],
            sigma_set: vec![0.1],
            lo: 0.1,
            hi: 0.9,
        };
        assert!(matches!(c.validate(), Err(Error::Config { field, .. }) if field == "judge_mu_grid"));
        let c = SweepConfig::single_judge_default();
        assert!(multi_judge_sweep(&c).is_err());
    }

    #[test]
    fn records_are_sorted_and_complete() {
        let config = SweepConfig {
            expert_mu_grid: vec![0.7, 0.3],
            expert_sigma_set: vec![0.2, 0.1],
            judges: JudgeAxis::Fixed {
                competences: vec![0.9, 0.2],
            },
            trials: 20,
            ..SweepConfig::single_judge_default()
        };
        let result = single_judge_sweep(&config).unwrap();
        assert_eq!(result.records.len(), 8);
        let coords: Vec<_> = result.records.iter().map(|r| (r.sigma_e, r.mu_e, r.judge_param1)).collect();
        let mut sorted = coords.clone();
        sorted.sort_by(|a, b| a.partial_cmp(b).unwrap());
        assert_eq!(coords, sorted);
        assert!(result
            .records
            .iter()
            .all(|r| (0.0..=1.0).contains(&r.accuracy_mean) && r.accuracy_stderr >= 0.0));
    }

    #[test]
    fn curve_endpoints_and_symmetry() {
        let panel = CompetencePanel::experts(EXAMPLE.to_vec()).unwrap();
        let curve = judge_curve(&panel, 11).unwrap();
        assert_eq!(curve.len(), 11);
        assert!((curve[10].1 - 0.9).abs() < 1e-9);
        assert!((curve[0].1 - 0.1).abs() < 1e-9);
        assert!((curve[6].1 - 0.898).abs() < 0.0005);
        for k in 0..11 {
            if k != 5 {
                assert!((curve[k].1 + curve[10 - k].1 - 1.0).abs() < 1e-9);
            }
        }
        assert!(judge_curve(&panel, 1).is_err());
        assert_eq!(judge_curve(&panel, 2).unwrap().iter().map(|c| c.0).collect::<Vec<_>>(), vec![0.0, 1.0]);
    }
}
