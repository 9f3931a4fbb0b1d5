//! The `jury` command-line front end.
//!
//! Exit codes: `0` success, `1` a regression or property check failed,
//! `2` usage or configuration error, `3` I/O or runtime failure.

pub mod check;
pub mod commands;
pub mod config;
pub mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::error::Error;
use crate::experiments::{EvaluationMode, SweepConfig};
use crate::voting::ZeroWeightFallback;
use crate::weighting::WeightPolicy;

use self::check::{CheckOptions, SUITES};
use self::config::{fallback_name, ConfigEntries};

pub const SEED_ENV: &str = "JURY_SEED";

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error(transparent)]
    Core(#[from] Error),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) | CliError::Core(Error::Config { .. }) => 2,
            CliError::Io { .. } | CliError::Core(_) => 3,
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "jury", version, about = "Weighted majority voting with judge-assigned expert weights")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Self-checking report for the five-expert example (0.6, 0.6, 0.6, 0.7, 0.9).
    Example1 {
        /// Only print the log-odds weights rounded to two decimals.
        #[arg(long)]
        weights_only: bool,
    },
    /// Exact accuracy of a single judge's scores as its competence sweeps 0..1.
    Curve(CurveArgs),
    /// Monte Carlo accuracy grid over competence distributions.
    Sweep(SweepArgs),
    /// Run the property suites.
    Check(CheckArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum PolicyArg {
    Unrestricted,
    Nonneg,
    Normalized,
}

impl From<PolicyArg> for WeightPolicy {
    fn from(p: PolicyArg) -> Self {
        match p {
            PolicyArg::Unrestricted => WeightPolicy::Unrestricted,
            PolicyArg::Nonneg => WeightPolicy::NonNegative,
            PolicyArg::Normalized => WeightPolicy::Normalized,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    Exact,
    Simulated,
}

impl From<ModeArg> for EvaluationMode {
    fn from(m: ModeArg) -> Self {
        match m {
            ModeArg::Exact => EvaluationMode::ExactPerPanel,
            ModeArg::Simulated => EvaluationMode::SimulatedVotes,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FallbackArg {
    Majority,
    Coinflip,
}

impl From<FallbackArg> for ZeroWeightFallback {
    fn from(f: FallbackArg) -> Self {
        match f {
            FallbackArg::Majority => ZeroWeightFallback::Majority,
            FallbackArg::Coinflip => ZeroWeightFallback::CoinFlip,
        }
    }
}

#[derive(Debug, Args)]
pub struct CurveArgs {
    /// Expert competences, comma separated.
    #[arg(long, value_delimiter = ',', default_value = "0.6,0.6,0.6,0.7,0.9")]
    pub panel: Vec<f64>,
    /// Number of evenly spaced judge competences in [0, 1].
    #[arg(long, default_value_t = 101)]
    pub resolution: usize,
    #[arg(long, value_enum, default_value = "majority")]
    pub zero_weight_fallback: FallbackArg,
    #[arg(long, default_value = "curve.csv")]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    /// Flat `key = value` config file; flags override its entries.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Master seed [default: $JURY_SEED, else 0].
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub trials: Option<usize>,
    #[arg(long, value_enum)]
    pub policy: Option<PolicyArg>,
    #[arg(long, value_enum)]
    pub mode: Option<ModeArg>,
    #[arg(long, value_enum)]
    pub zero_weight_fallback: Option<FallbackArg>,
    /// 1 sweeps a fixed judge competence; more samples judge panels.
    #[arg(long)]
    pub judge_count: Option<usize>,
    /// CSV output; the manifest is written to `<out>.manifest`.
    #[arg(long, default_value = "sweep.csv")]
    pub out: PathBuf,
    /// Worker threads for grid cells [default: all cores].
    #[arg(long)]
    pub threads: Option<usize>,
}

#[derive(Debug, Args)]
pub struct CheckArgs {
    /// Run only the named suite(s).
    #[arg(long, value_parser = clap::builder::PossibleValuesParser::new(SUITES))]
    pub suite: Vec<String>,
    /// Tolerance for the aggregation identities.
    #[arg(long, default_value_t = 1e-9)]
    pub epsilon: f64,
    /// Tolerance for beating the log-odds rule.
    #[arg(long, default_value_t = 1e-12)]
    pub optimality_epsilon: f64,
    /// Randomized cases per suite.
    #[arg(long, default_value_t = 1000)]
    pub cases: usize,
    #[arg(long, default_value_t = 2024)]
    pub seed: u64,
}

impl SweepArgs {
    /// Config file, then flags; the seed falls back to `$JURY_SEED` only when
    /// neither sets it.
    pub fn resolve(&self, env_seed: Option<&str>) -> Result<SweepConfig, CliError> {
        let mut entries = match &self.config {
            Some(path) => {
                let text = std::fs::read_to_string(path).map_err(|source| CliError::Io {
                    path: path.display().to_string(),
                    source,
                })?;
                ConfigEntries::parse(&text)?
            }
            None => ConfigEntries::default(),
        };
        if entries.get("master_seed").is_none() {
            if let Some(seed) = env_seed {
                entries.set("master_seed", seed.trim());
            }
        }
        if let Some(seed) = self.seed {
            entries.set("master_seed", seed.to_string());
        }
        if let Some(trials) = self.trials {
            entries.set("trials", trials.to_string());
        }
        if let Some(policy) = self.policy {
            entries.set("policy", WeightPolicy::from(policy).to_string());
        }
        if let Some(mode) = self.mode {
            entries.set("evaluation_mode", EvaluationMode::from(mode).to_string());
        }
        if let Some(f) = self.zero_weight_fallback {
            entries.set("zero_weight_fallback", fallback_name(f.into()));
        }
        if let Some(n) = self.judge_count {
            entries.set("judge_count", n.to_string());
        }
        Ok(entries.resolve()?)
    }
}

pub fn run(cli: Cli) -> Result<ExitCode, CliError> {
    match cli.command {
        Command::Example1 { weights_only } => {
            let (report, ok) = commands::example1_report(weights_only)?;
            print!("{report}");
            if ok {
                Ok(ExitCode::SUCCESS)
            } else {
                eprintln!("example1: values deviate from the reference");
                Ok(ExitCode::from(1))
            }
        }
        Command::Curve(args) => {
            let rows = commands::curve(&args.panel, args.resolution, args.zero_weight_fallback.into(), &args.out)?;
            eprintln!("wrote {rows} rows to {}", args.out.display());
            Ok(ExitCode::SUCCESS)
        }
        Command::Sweep(args) => {
            let env_seed = std::env::var(SEED_ENV).ok();
            let config = args.resolve(env_seed.as_deref())?;
            let result = commands::sweep(&config, args.threads, &args.out)?;
            eprintln!(
                "wrote {} cells to {} (manifest {})",
                result.records.len(),
                args.out.display(),
                commands::manifest_path(&args.out).display()
            );
            Ok(ExitCode::SUCCESS)
        }
        Command::Check(args) => {
            let opts = CheckOptions {
                seed: args.seed,
                epsilon: args.epsilon,
                optimality_epsilon: args.optimality_epsilon,
                cases: args.cases,
            };
            let names: Vec<&str> = if args.suite.is_empty() {
                SUITES.to_vec()
            } else {
                args.suite.iter().map(String::as_str).collect()
            };
            let mut all_ok = true;
            for name in names {
                let report = check::run_suite(name, &opts)
                    .ok_or_else(|| CliError::Usage(format!("unknown suite `{name}`")))??;
                let status = if report.passed() { "pass" } else { "FAIL" };
                println!("{:<12} {status} ({} cases)", report.name, report.cases);
                for failure in report.failures.iter().take(5) {
                    println!("    {failure}");
                }
                all_ok &= report.passed();
            }
            Ok(if all_ok { ExitCode::SUCCESS } else { ExitCode::from(1) })
        }
    }
}
