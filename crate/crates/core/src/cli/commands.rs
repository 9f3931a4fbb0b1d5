use std::fmt::Write as _;
use std::path::Path;
use std::time::{SystemTime, UNIX_EPOCH};

use crate::error::Result;
use crate::experiments::{judge_curve_with, run_sweep, SweepConfig, SweepResult};
use crate::voting::{exact_accuracy, CompetencePanel, WeightVector, ZeroWeightFallback};
use crate::weighting::{equivalence_threshold, judge_scores, optimal_weights, EquivalenceThreshold};

use super::output::{curve_csv, manifest, sweep_csv};
use super::CliError;

pub const EXAMPLE_PANEL: [f64; 5] = [0.6, 0.6, 0.6, 0.7, 0.9];

/// One reported quantity of the worked five-expert example.
#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: &'static str,
    pub value: String,
    pub target: String,
    pub ok: bool,
}

fn scalar(name: &'static str, value: f64, target: f64, tol: f64) -> Check {
    Check {
        name,
        value: format!("{value:.6}"),
        target: format!("{target} ± {tol:e}"),
        ok: (value - target).abs() <= tol,
    }
}

fn vector(name: &'static str, value: &[f64], target: &[f64], tol: f64) -> Check {
    Check {
        name,
        value: format_rounded(value, 3),
        target: format!("{} ± {tol}", format_rounded(target, 3)),
        ok: value.len() == target.len() && value.iter().zip(target).all(|(a, b)| (a - b).abs() <= tol),
    }
}

fn round_to(x: f64, decimals: i32) -> f64 {
    let f = 10f64.powi(decimals);
    (x * f).round() / f
}

/// `(a, b, c)` with every entry rounded to `decimals` places.
pub fn format_rounded(values: &[f64], decimals: i32) -> String {
    let parts: Vec<String> = values.iter().map(|&v| round_to(v, decimals).to_string()).collect();
    format!("({})", parts.join(", "))
}

/// Every reported value of the five-expert example next to its reference.
pub fn example1_checks() -> Result<Vec<Check>> {
    let panel = CompetencePanel::experts(EXAMPLE_PANEL.to_vec())?;
    let optimal = optimal_weights(&panel)?;
    let rounded: Vec<f64> = optimal.as_slice().iter().map(|&w| round_to(w, 2)).collect();
    let judge = judge_scores(0.6, &panel)?;
    let threshold = equivalence_threshold(&panel)?;

    let mut checks = vec![
        Check {
            name: "log-odds weights (2 d.p.)",
            value: format_rounded(optimal.as_slice(), 2),
            target: "(0.41, 0.41, 0.41, 0.85, 2.2)".to_string(),
            ok: rounded == [0.41, 0.41, 0.41, 0.85, 2.2],
        },
        scalar("log-odds accuracy", exact_accuracy(&panel, &optimal)?, 0.9, 1e-9),
        scalar(
            "equal-weight accuracy",
            exact_accuracy(&panel, &WeightVector::equal(5)?)?,
            0.82,
            0.005,
        ),
        vector("judge 0.6 scores", judge.as_slice(), &[0.08, 0.08, 0.08, 0.16, 0.323], 0.005),
        scalar("judge 0.6 accuracy", exact_accuracy(&panel, &judge)?, 0.898, 0.0005),
    ];
    checks.push(match threshold {
        EquivalenceThreshold::Above(v) => scalar("equivalence threshold", v, 0.962, 0.001),
        other => Check {
            name: "equivalence threshold",
            value: format!("{other:?}"),
            target: "0.962 ± 1e-3".to_string(),
            ok: false,
        },
    });
    Ok(checks)
}

pub fn example1_report(weights_only: bool) -> std::result::Result<(String, bool), CliError> {
    if weights_only {
        let panel = CompetencePanel::experts(EXAMPLE_PANEL.to_vec())?;
        let optimal = optimal_weights(&panel)?;
        return Ok((format!("{}\n", format_rounded(optimal.as_slice(), 2)), true));
    }
    let checks = example1_checks()?;
    let mut out = format!("experts {}\n", format_rounded(&EXAMPLE_PANEL, 2));
    for c in &checks {
        let _ = writeln!(
            out,
            "{:<28} {:<40} target {:<34} {}",
            c.name,
            c.value,
            c.target,
            if c.ok { "ok" } else { "DEVIATES" }
        );
    }
    Ok((out, checks.iter().all(|c| c.ok)))
}

pub fn curve(
    panel: &[f64],
    resolution: usize,
    fallback: ZeroWeightFallback,
    out: &Path,
) -> std::result::Result<usize, CliError> {
    let panel = CompetencePanel::experts(panel.to_vec()).map_err(|e| CliError::Usage(format!("--panel: {e}")))?;
    let curve = judge_curve_with(&panel, resolution, fallback).map_err(|e| CliError::Usage(e.to_string()))?;
    write(out, &curve_csv(&curve))?;
    Ok(curve.len())
}

pub fn manifest_path(out: &Path) -> std::path::PathBuf {
    let mut name = out.as_os_str().to_owned();
    name.push(".manifest");
    name.into()
}

pub fn sweep(config: &SweepConfig, threads: Option<usize>, out: &Path) -> std::result::Result<SweepResult, CliError> {
    let mut pool = rayon::ThreadPoolBuilder::new();
    if let Some(n) = threads {
        pool = pool.num_threads(n);
    }
    let pool = pool.build().map_err(|e| CliError::Usage(format!("--threads: {e}")))?;
    let result = pool.install(|| run_sweep(config))?;
    write(out, &sweep_csv(&result))?;
    let timestamp = SystemTime::now()
        .duration_since(UNIX_EPOCH)
        .map(|d| d.as_secs())
        .unwrap_or(0);
    write(
        &manifest_path(out),
        &manifest(config, &out.display().to_string(), timestamp),
    )?;
    Ok(result)
}

fn write(path: &Path, contents: &str) -> std::result::Result<(), CliError> {
    std::fs::write(path, contents).map_err(|source| CliError::Io {
        path: path.display().to_string(),
        source,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn example_checks_all_pass() {
        let checks = example1_checks().unwrap();
        assert_eq!(checks.len(), 6);
        for c in &checks {
            assert!(c.ok, "{c:?}");
        }
    }

    #[test]
    fn report_is_stable() {
        assert_eq!(example1_report(false).unwrap(), example1_report(false).unwrap());
        let (weights, ok) = example1_report(true).unwrap();
        assert!(ok);
        assert_eq!(weights, "(0.41, 0.41, 0.41, 0.85, 2.2)\n");
    }

    #[test]
    fn manifest_sits_next_to_output() {
        assert_eq!(manifest_path(Path::new("out/a.csv")), Path::new("out/a.csv.manifest"));
    }
}
