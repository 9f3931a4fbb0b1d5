//! CSV and manifest serialization.

use std::fmt::Write as _;

use crate::experiments::{SweepConfig, SweepResult};

use super::config;

pub const SWEEP_HEADER: &str =
    "sigma_E,mu_E,judge_param1,judge_param2,policy,trials,seed,accuracy_mean,accuracy_stderr";

/// `%g`-style formatting with `digits` significant digits.
pub fn format_sig(x: f64, digits: usize) -> String {
    if x == 0.0 {
        return "0".to_string();
    }
    if !x.is_finite() {
        return x.to_string();
    }
    let digits = digits.max(1);
    let sci = format!("{:.*e}", digits - 1, x);
    let (mantissa, exp) = sci.split_once('e').expect("exponent form");
    let exp: i32 = exp.parse().expect("integer exponent");
    if exp < -4 || exp >= digits as i32 {
        format!("{}e{}", trim_zeros(mantissa), exp)
    } else {
        let decimals = (digits as i32 - 1 - exp).max(0) as usize;
        trim_zeros(&format!("{x:.decimals$}")).to_string()
    }
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

fn sig6(x: f64) -> String {
    format_sig(x, 6)
}

pub fn sweep_csv(result: &SweepResult) -> String {
    let mut out = String::with_capacity(64 * (result.records.len() + 1));
    out.push_str(SWEEP_HEADER);
    out.push('\n');
    for r in &result.records {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{},{},{}",
            sig6(r.sigma_e),
            sig6(r.mu_e),
            sig6(r.judge_param1),
            r.judge_param2.map(sig6).unwrap_or_default(),
            r.policy,
            r.trials,
            r.seed,
            sig6(r.accuracy_mean),
            sig6(r.accuracy_stderr),
        );
    }
    out
}

pub fn curve_csv(curve: &[(f64, f64)]) -> String {
    let mut out = String::from("p_j,accuracy\n");
    for (pj, a) in curve {
        let _ = writeln!(out, "{},{}", sig6(*pj), sig6(*a));
    }
    out
}

/// Manifest describing how a CSV was produced; parseable as a sweep config.
pub fn manifest(config: &SweepConfig, output: &str, timestamp_unix: u64) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "# jury sweep manifest; pass back with --config to reproduce");
    let _ = writeln!(out, "tool_version = {}", env!("CARGO_PKG_VERSION"));
    let _ = writeln!(out, "timestamp_unix = {timestamp_unix}");
    let _ = writeln!(out, "output = {output}");
    out.push_str(&config::render(config));
    out
}
