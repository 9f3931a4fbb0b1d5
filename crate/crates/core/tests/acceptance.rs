//! Acceptance suite: one pass/fail line per criterion.
//!
//! Runs as a plain binary (`harness = false`) so the report is always
//! printed. `JURY_ACCEPTANCE_TRIALS` overrides the 50k trials of the full
//! heatmap grids for quick local runs.

use std::process::{Command, ExitCode};
use std::time::Instant;

use jury::experiments::{
    cell_accuracy, judge_curve, run_sweep, CellSpec, EvaluationMode, JudgeSource, SweepConfig, SweepResult,
    DEFAULT_TRIALS,
};
use jury::sampling::{RandomStream, TruncatedNormalSpec};
use jury::voting::{exact_accuracy, CompetencePanel, WeightVector, ZeroWeightFallback};
use jury::weighting::{
    aggregate, equivalence_threshold, gm_deviation_alpha, judge_scores, optimal_weights, ScoreMatrix, WeightPolicy,
};
use rand::Rng;

const EXAMPLE: [f64; 5] = [0.6, 0.6, 0.6, 0.7, 0.9];

struct Verdict {
    pass: bool,
    detail: String,
}

fn verdict(pass: bool, detail: impl Into<String>) -> Verdict {
    Verdict {
        pass,
        detail: detail.into(),
    }
}

fn example_panel() -> CompetencePanel {
    CompetencePanel::experts(EXAMPLE.to_vec()).unwrap()
}

fn ln_odds(p: f64) -> f64 {
    p.ln() - (1.0 - p).ln()
}

fn round2(x: f64) -> f64 {
    (x * 100.0).round() / 100.0
}

fn c1_weights() -> Verdict {
    let w = optimal_weights(&example_panel()).unwrap();
    let rounded: Vec<f64> = w.as_slice().iter().map(|&x| round2(x)).collect();
    verdict(rounded == [0.41, 0.41, 0.41, 0.85, 2.2], format!("{rounded:?}"))
}

fn c2_accuracies() -> Verdict {
    let panel = example_panel();
    let opt = exact_accuracy(&panel, &optimal_weights(&panel).unwrap()).unwrap();
    let equal = exact_accuracy(&panel, &WeightVector::equal(5).unwrap()).unwrap();
    let judge = exact_accuracy(&panel, &judge_scores(0.6, &panel).unwrap()).unwrap();
    verdict(
        (opt - 0.9).abs() <= 1e-9 && (equal - 0.82).abs() <= 0.005 && (judge - 0.898).abs() <= 0.0005,
        format!("log-odds {opt:.12}, equal {equal:.6}, judge(0.6) {judge:.6}"),
    )
}

fn c3_threshold() -> Verdict {
    match equivalence_threshold(&example_panel()).unwrap().value() {
        Some(v) => verdict((v - 0.962).abs() <= 0.001, format!("{v:.5}")),
        None => verdict(false, "no interior threshold"),
    }
}

fn c4_curve() -> Verdict {
    let curve = judge_curve(&example_panel(), 101).unwrap();
    let at_one = curve[100].1;
    let at_zero = curve[0].1;
    let worst = (0..=100)
        .filter(|&k| k != 50)
        .map(|k| (curve[k].1 + curve[100 - k].1 - 1.0).abs())
        .fold(0.0, f64::max);
    verdict(
        (at_one - 0.9).abs() <= 1e-9 && (at_zero - 0.1).abs() <= 1e-9 && worst <= 1e-9,
        format!("a(1)={at_one:.12}, a(0)={at_zero:.12}, max|a(p)+a(1-p)-1|={worst:.2e}"),
    )
}

/// Columns of perceived competences (one per expert) whose odds have a
/// geometric mean equal to the expert's true odds.
fn perceived_columns(rng: &mut RandomStream, truth: &[f64], judges: usize) -> Vec<Vec<f64>> {
    let logistic = |x: f64| 1.0 / (1.0 + (-x).exp());
    truth
        .iter()
        .map(|&t| loop {
            let centre = ln_odds(t);
            let mut col: Vec<f64> = (0..judges - 1).map(|_| centre + rng.random_range(-2.0..2.0)).collect();
            col.push(judges as f64 * centre - col.iter().sum::<f64>());
            if col.iter().all(|x| x.abs() <= 6.0) {
                break col.into_iter().map(logistic).collect();
            }
        })
        .collect()
}

fn scores_of(columns: &[Vec<f64>]) -> ScoreMatrix {
    let judges = columns[0].len();
    ScoreMatrix::from_rows(
        (0..judges)
            .map(|j| columns.iter().map(|c| ln_odds(c[j])).collect())
            .collect(),
    )
    .unwrap()
}

fn c5_theorem() -> Verdict {
    let mut rng = RandomStream::from_seed(501);
    let mut worst = 0.0f64;
    for _ in 0..1000 {
        let m = rng.random_range(1..=6);
        let n = rng.random_range(1..=10);
        let truth: Vec<f64> = (0..m).map(|_| rng.random_range(0.05..0.95)).collect();
        let w = aggregate(&scores_of(&perceived_columns(&mut rng, &truth, n)));
        let opt = optimal_weights(&CompetencePanel::experts(truth).unwrap()).unwrap();
        for (a, b) in w.as_slice().iter().zip(opt.as_slice()) {
            worst = worst.max((a - b).abs());
        }
    }
    verdict(worst < 1e-9, format!("1000 constructions, max |aggregate - optimal| = {worst:.2e}"))
}

fn c6_corollary() -> Verdict {
    let mut rng = RandomStream::from_seed(601);
    let mut worst = 0.0f64;
    for _ in 0..1000 {
        let m = rng.random_range(1..=6);
        let n = rng.random_range(1..=10);
        let truth: Vec<f64> = (0..m).map(|_| rng.random_range(0.05..0.95)).collect();
        let columns: Vec<Vec<f64>> = (0..m)
            .map(|_| (0..n).map(|_| rng.random_range(0.02..0.98)).collect())
            .collect();
        let w = aggregate(&scores_of(&columns));
        let opt = optimal_weights(&CompetencePanel::experts(truth.clone()).unwrap()).unwrap();
        for e in 0..m {
            let alpha = gm_deviation_alpha(truth[e], &columns[e]).unwrap();
            worst = worst.max((w.as_slice()[e] - opt.as_slice()[e] - alpha.ln()).abs());
        }
    }
    verdict(worst < 1e-9, format!("1000 sets, max residual = {worst:.2e}"))
}

fn c7_optimality() -> Verdict {
    let mut rng = RandomStream::from_seed(701);
    let mut worst = f64::NEG_INFINITY;
    for _ in 0..500 {
        let m = rng.random_range(1..=5);
        let panel =
            CompetencePanel::experts((0..m).map(|_| rng.random_range(0.01..0.99)).collect()).unwrap();
        let best = exact_accuracy(&panel, &optimal_weights(&panel).unwrap()).unwrap();
        for _ in 0..100 {
            let w = WeightVector::new((0..m).map(|_| rng.random_range(-5.0..5.0)).collect()).unwrap();
            worst = worst.max(exact_accuracy(&panel, &w).unwrap() - best);
        }
    }
    verdict(worst <= 1e-12, format!("max(challenger - log-odds) = {worst:.2e}"))
}

fn c8_modes() -> Verdict {
    let master = RandomStream::from_seed(801);
    let trials = 20_000;
    let mut lines = Vec::new();
    let mut pass = true;
    for (i, (mu, pj)) in [(0.4, 0.6), (0.4, 0.9), (0.7, 0.6), (0.7, 0.9)].into_iter().enumerate() {
        let cell = |mode| CellSpec {
            experts: TruncatedNormalSpec::with_default_bounds(mu, 0.2).unwrap(),
            expert_count: 5,
            judges: JudgeSource::Fixed(pj),
            policy: WeightPolicy::Unrestricted,
            trials,
            mode,
            fallback: ZeroWeightFallback::Majority,
        };
        let rng = master.derive(&[i as u64]);
        let exact = cell_accuracy(&cell(EvaluationMode::ExactPerPanel), &rng).unwrap();
        let sim = cell_accuracy(&cell(EvaluationMode::SimulatedVotes), &rng).unwrap();
        let combined = (exact.stderr.powi(2) + sim.stderr.powi(2)).sqrt();
        let ok = (exact.mean - sim.mean).abs() <= 3.0 * combined;
        pass &= ok;
        lines.push(format!("{:.4}/{:.4}", exact.mean, sim.mean));
    }
    verdict(pass, format!("exact/simulated per cell: {}", lines.join(", ")))
}

fn heatmap_trials() -> usize {
    std::env::var("JURY_ACCEPTANCE_TRIALS")
        .ok()
        .and_then(|v| v.parse().ok())
        .unwrap_or(DEFAULT_TRIALS)
}

fn c9a_single(trials: usize) -> Verdict {
    let config = SweepConfig {
        trials,
        ..SweepConfig::single_judge_default()
    };
    let result = run_sweep(&config).unwrap();
    let mut pass = true;
    let mut worst = f64::INFINITY;
    for &sigma in &config.expert_sigma_set {
        for &mu in &config.expert_mu_grid {
            let perfect = result.find(sigma, mu, 1.0, None).unwrap();
            let uninformed = result.find(sigma, mu, 0.5, None).unwrap();
            let slack = 2.0 * (perfect.accuracy_stderr.powi(2) + uninformed.accuracy_stderr.powi(2)).sqrt();
            let margin = perfect.accuracy_mean - uninformed.accuracy_mean + slack;
            worst = worst.min(margin);
            pass &= margin >= 0.0;
        }
    }
    verdict(
        pass,
        format!("{} cells, {trials} trials; min(a(1.0) - a(0.5) + 2se) = {worst:.2e}", result.records.len()),
    )
}

fn multi(policy: WeightPolicy, trials: usize) -> SweepResult {
    run_sweep(&SweepConfig {
        trials,
        ..SweepConfig::multi_judge_default(policy)
    })
    .unwrap()
}

fn competent_mean(r: &SweepResult) -> f64 {
    let cells: Vec<f64> = r
        .records
        .iter()
        .filter(|c| c.judge_param1 > 0.5 + 1e-9)
        .map(|c| c.accuracy_mean)
        .collect();
    cells.iter().sum::<f64>() / cells.len() as f64
}

fn main() -> ExitCode {
    let started = Instant::now();
    let mut results: Vec<(&str, Verdict)> = Vec::new();
    let mut run = |id: &'static str, name: &str, f: &dyn Fn() -> Verdict| {
        let t = Instant::now();
        let v = f();
        println!(
            "[{}] criterion {id:<4} {name}: {} ({:.1}s)",
            if v.pass { "PASS" } else { "FAIL" },
            v.detail,
            t.elapsed().as_secs_f64()
        );
        results.push((id, v));
    };

    run("1", "example weights", &c1_weights);
    run("2", "example accuracies", &c2_accuracies);
    run("3", "equivalence threshold", &c3_threshold);
    run("4", "judge curve", &c4_curve);
    run("5", "geometric-mean exactness", &c5_theorem);
    run("6", "log-alpha additivity", &c6_corollary);
    run("7", "log-odds optimality", &c7_optimality);
    run("8", "exact vs simulated", &c8_modes);

    let trials = heatmap_trials();
    run("9a", "single judge p_j=1 vs 0.5", &|| c9a_single(trials));

    let t = Instant::now();
    let unrestricted = multi(WeightPolicy::Unrestricted, trials);
    let nonneg = multi(WeightPolicy::NonNegative, trials);
    let normalized = multi(WeightPolicy::Normalized, trials);
    println!(
        "       multi-judge grids: {} cells x 3 policies, {trials} trials ({:.1}s)",
        unrestricted.records.len(),
        t.elapsed().as_secs_f64()
    );
    let (u, nn, nz) = (unrestricted.grid_mean(), nonneg.grid_mean(), normalized.grid_mean());
    let gap = u - nn;
    run("9b", "grid mean unrestricted >= nonneg", &|| {
        verdict(u >= nn, format!("unrestricted {u:.6}, nonneg {nn:.6} (diff {gap:+.2e})"))
    });
    run("9c", "|nonneg - normalized| < gap/2", &|| {
        let d = (nn - nz).abs();
        verdict(d < 0.5 * gap.abs(), format!("|{nn:.6} - {nz:.6}| = {d:.2e} vs gap/2 = {:.2e}", 0.5 * gap.abs()))
    });
    // Supplementary: the same comparisons restricted to competent judges
    // (mu_J > 0.5). The full grid is symmetric under p -> 1 - p for both
    // populations, which pins every policy's full-grid mean at 0.5.
    let (cu, cnn, cnz) = (competent_mean(&unrestricted), competent_mean(&nonneg), competent_mean(&normalized));
    run("9s", "supplementary, mu_J > 0.5 half", &|| {
        let cgap = cu - cnn;
        verdict(
            cgap > 0.0 && (cnn - cnz).abs() < 0.5 * cgap,
            format!("unrestricted {cu:.4}, nonneg {cnn:.4}, normalized {cnz:.4}"),
        )
    });

    run("10", "sweep CSV identical across --threads", &c10_determinism);

    let failed: Vec<&str> = results.iter().filter(|(_, v)| !v.pass).map(|(id, _)| *id).collect();
    println!(
        "acceptance: {}/{} passed in {:.1}s",
        results.len() - failed.len(),
        results.len(),
        started.elapsed().as_secs_f64()
    );
    if failed.is_empty() {
        ExitCode::SUCCESS
    } else {
        println!("failed: {}", failed.join(", "));
        ExitCode::FAILURE
    }
}

fn c10_determinism() -> Verdict {
    let dir = tempfile::tempdir().unwrap();
    let run = |threads: &str, name: &str| {
        let out = dir.path().join(name);
        let status = Command::new(env!("CARGO_BIN_EXE_jury"))
            .args(["sweep", "--judge-count", "10", "--trials", "300", "--seed", "1001", "--threads", threads])
            .arg("--out")
            .arg(&out)
            .env_remove("JURY_SEED")
            .status()
            .unwrap();
        assert!(status.success());
        std::fs::read(out).unwrap()
    };
    let a = run("1", "a.csv");
    let b = run("4", "b.csv");
    let rows = a.iter().filter(|&&c| c == b'\n').count();
    verdict(a == b && rows == 325, format!("{rows} lines, {} bytes, identical = {}", a.len(), a == b))
}
