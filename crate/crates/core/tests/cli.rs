use std::path::Path;
use std::process::{Command, Output};

fn jury(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_jury"))
        .args(args)
        .env_remove("JURY_SEED")
        .output()
        .expect("run jury")
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

#[test]
fn example1_reports_reference_values() {
    let a = jury(&["example1"]);
    assert!(a.status.success(), "{}", stderr(&a));
    let text = stdout(&a);
    for needle in ["0.900000", "0.816480", "0.897840", "0.962"] {
        assert!(text.contains(needle), "missing {needle} in\n{text}");
    }
    assert!(!text.contains("DEVIATES"));
    assert_eq!(stdout(&jury(&["example1"])), text);
}

#[test]
fn example1_weights_only() {
    let o = jury(&["example1", "--weights-only"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o), "(0.41, 0.41, 0.41, 0.85, 2.2)\n");
}

#[test]
fn curve_writes_requested_rows() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("curve.csv");
    let o = jury(&["curve", "--resolution", "101", "--out", path(&out)]);
    assert!(o.status.success(), "{}", stderr(&o));
    let csv = std::fs::read_to_string(&out).unwrap();
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines[0], "p_j,accuracy");
    assert_eq!(lines.len(), 102);
    assert_eq!(lines[101], "1,0.9");
    assert_eq!(lines[1], "0,0.1");
    for line in &lines[1..] {
        let a: f64 = line.split(',').nth(1).unwrap().parse().unwrap();
        assert!((0.0..=1.0).contains(&a));
    }

    let o = jury(&["curve", "--resolution", "2", "--panel", "0.7,0.55", "--out", path(&out)]);
    assert!(o.status.success());
    let csv = std::fs::read_to_string(&out).unwrap();
    let p: Vec<&str> = csv.lines().skip(1).map(|l| l.split(',').next().unwrap()).collect();
    assert_eq!(p, ["0", "1"]);
}

#[test]
fn curve_rejects_bad_panel_and_bad_path() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("c.csv");
    let o = jury(&["curve", "--panel", "0.6,1.0", "--out", path(&out)]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("--panel"));
    let o = jury(&["curve", "--out", "/nonexistent-dir/c.csv"]);
    assert_eq!(o.status.code(), Some(3));
    assert!(stderr(&o).contains("/nonexistent-dir/c.csv"));
}

#[test]
fn single_judge_sweep_layout() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("s.csv");
    let o = jury(&["sweep", "--trials", "40", "--seed", "3", "--out", path(&out)]);
    assert!(o.status.success(), "{}", stderr(&o));
    let csv = std::fs::read_to_string(&out).unwrap();
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(
        lines[0],
        "sigma_E,mu_E,judge_param1,judge_param2,policy,trials,seed,accuracy_mean,accuracy_stderr"
    );
    assert_eq!(lines.len(), 361);
    assert!(lines[1].starts_with("0.1,0.1,0.1,,unrestricted,40,3,"));
    assert!(lines[360].starts_with("0.4,0.9,1,,unrestricted,40,3,"));
    assert!(dir.path().join("s.csv.manifest").exists());
}

#[test]
fn multi_judge_sweep_layout_and_determinism() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.csv");
    let b = dir.path().join("b.csv");
    for out in [&a, &b] {
        let o = jury(&[
            "sweep", "--judge-count", "10", "--policy", "normalized", "--trials", "20", "--seed", "8", "--out",
            path(out),
        ]);
        assert!(o.status.success(), "{}", stderr(&o));
    }
    let csv = std::fs::read(&a).unwrap();
    assert_eq!(csv, std::fs::read(&b).unwrap());
    let text = String::from_utf8(csv).unwrap();
    assert_eq!(text.lines().count(), 325);
    assert!(text.lines().nth(1).unwrap().starts_with("0.1,0.1,0.1,0.1,normalized,20,8,"));
}

#[test]
fn manifest_reproduces_csv() {
    let dir = tempfile::tempdir().unwrap();
    let first = dir.path().join("first.csv");
    let cfg = dir.path().join("cfg.txt");
    std::fs::write(
        &cfg,
        "judge_count = 4\nexpert_mu_grid = 0.3,0.6\nexpert_sigma_set = 0.2\njudge_mu_grid = 0.7\n\
         judge_sigma_set = 0.1,0.3\npolicy = nonneg\nevaluation_mode = simulated\n",
    )
    .unwrap();
    let o = jury(&["sweep", "--config", path(&cfg), "--trials", "50", "--seed", "12", "--out", path(&first)]);
    assert!(o.status.success(), "{}", stderr(&o));
    let manifest = dir.path().join("first.csv.manifest");
    let text = std::fs::read_to_string(&manifest).unwrap();
    assert!(text.contains("master_seed = 12"));
    assert!(text.contains("evaluation_mode = simulated"));
    assert!(text.contains("tool_version = "));

    let second = dir.path().join("second.csv");
    let o = jury(&["sweep", "--config", path(&manifest), "--out", path(&second)]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert_eq!(std::fs::read(&first).unwrap(), std::fs::read(&second).unwrap());
}

#[test]
fn seed_env_is_the_default() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("e.csv");
    let o = Command::new(env!("CARGO_BIN_EXE_jury"))
        .args(["sweep", "--trials", "5", "--out", path(&out)])
        .env("JURY_SEED", "4242")
        .output()
        .unwrap();
    assert!(o.status.success());
    let csv = std::fs::read_to_string(&out).unwrap();
    assert!(csv.lines().nth(1).unwrap().contains(",5,4242,"));
}

#[test]
fn config_errors_name_the_field() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("bad.txt");
    std::fs::write(&cfg, "expert_sigma_set = 0.1,0\n").unwrap();
    let o = jury(&["sweep", "--config", path(&cfg), "--out", path(&dir.path().join("x.csv"))]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("expert_sigma_set"), "{}", stderr(&o));
}

#[test]
fn sampling_failure_names_the_cell() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("narrow.txt");
    std::fs::write(&cfg, "expert_mu_grid = 0.0\nexpert_sigma_set = 0.001\nexpert_lo = 0.8\ntrials = 2\n").unwrap();
    let o = jury(&["sweep", "--config", path(&cfg), "--out", path(&dir.path().join("x.csv"))]);
    assert_eq!(o.status.code(), Some(3));
    assert!(stderr(&o).contains("mu_E=0"), "{}", stderr(&o));
}

#[test]
fn check_runs_selected_suites() {
    let o = jury(&["check", "--suite", "theorem1", "--cases", "200"]);
    assert!(o.status.success(), "{}", stdout(&o));
    let text = stdout(&o);
    assert_eq!(text.lines().count(), 1);
    assert!(text.starts_with("theorem1"));
    assert!(text.contains("pass"));
}

#[test]
fn check_fresh_build_passes() {
    let o = jury(&["check", "--cases", "100"]);
    assert!(o.status.success(), "{}", stdout(&o));
    assert_eq!(stdout(&o).lines().filter(|l| l.contains(" pass ")).count(), 6);
}

#[test]
fn check_failure_exits_nonzero() {
    let o = jury(&["check", "--suite", "corollary1", "--epsilon", "0", "--cases", "10"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("FAIL"));
}
