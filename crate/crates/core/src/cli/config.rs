//! Flat `key = value` sweep configuration files.
//!
//! ```text
//! # comments and blank lines are ignored
//! judge_count = 10
//! expert_mu_grid = 0.1,0.2,0.3
//! policy = nonneg
//! ```
//!
//! `judge_count = 1` selects a single judge stepping through
//! `judge_competence_grid`; larger counts sample judges from every
//! `(judge_mu_grid, judge_sigma_set)` pair. Keys left out keep the defaults
//! of the selected sweep. Manifests use the same format, so a manifest can be
//! passed back as a config.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::experiments::{EvaluationMode, JudgeAxis, SweepConfig};
use crate::voting::ZeroWeightFallback;
use crate::weighting::WeightPolicy;

pub const CONFIG_KEYS: &[&str] = &[
    "expert_count",
    "judge_count",
    "expert_mu_grid",
    "expert_sigma_set",
    "expert_lo",
    "expert_hi",
    "judge_competence_grid",
    "judge_mu_grid",
    "judge_sigma_set",
    "judge_lo",
    "judge_hi",
    "policy",
    "trials",
    "master_seed",
    "evaluation_mode",
    "zero_weight_fallback",
];

/// Keys written into manifests that carry no configuration.
pub const MANIFEST_KEYS: &[&str] = &["tool_version", "timestamp_unix", "output"];

/// Raw key-value entries, in file order of precedence (later wins).
#[derive(Debug, Clone, Default, PartialEq)]
pub struct ConfigEntries(BTreeMap<String, String>);

impl ConfigEntries {
    pub fn parse(text: &str) -> Result<Self> {
        let mut entries = BTreeMap::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| Error::Config {
                field: format!("line {}", lineno + 1),
                message: format!("expected `key = value`, got `{line}`"),
            })?;
            let key = key.trim();
            if MANIFEST_KEYS.contains(&key) {
                continue;
            }
            if !CONFIG_KEYS.contains(&key) {
                return Err(Error::Config {
                    field: key.to_string(),
                    message: format!("unknown key on line {}", lineno + 1),
                });
            }
            entries.insert(key.to_string(), value.trim().to_string());
        }
        Ok(Self(entries))
    }

    pub fn set(&mut self, key: &str, value: impl Into<String>) {
        debug_assert!(CONFIG_KEYS.contains(&key));
        self.0.insert(key.to_string(), value.into());
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.0.get(key).map(String::as_str)
    }

    /// Fills in defaults and builds a validated config.
    pub fn resolve(&self) -> Result<SweepConfig> {
        let judge_count: usize = self.parsed("judge_count")?.unwrap_or(1);
        let policy: WeightPolicy = self.parsed("policy")?.unwrap_or_default();
        let mut config = if judge_count <= 1 {
            SweepConfig::single_judge_default()
        } else {
            SweepConfig::multi_judge_default(policy)
        };
        config.policy = policy;

        if let Some(v) = self.parsed("expert_count")? {
            config.expert_count = v;
        }
        if let Some(v) = self.list("expert_mu_grid")? {
            config.expert_mu_grid = v;
        }
        if let Some(v) = self.list("expert_sigma_set")? {
            config.expert_sigma_set = v;
        }
        if let Some(v) = self.parsed("expert_lo")? {
            config.expert_lo = v;
        }
        if let Some(v) = self.parsed("expert_hi")? {
            config.expert_hi = v;
        }
        if let Some(v) = self.parsed("trials")? {
            config.trials = v;
        }
        if let Some(v) = self.parsed("master_seed")? {
            config.master_seed = v;
        }
        if let Some(v) = self.parsed::<EvaluationMode>("evaluation_mode")? {
            config.mode = v;
        }
        if let Some(v) = self.get("zero_weight_fallback") {
            config.fallback = parse_fallback(v).map_err(|message| Error::Config {
                field: "zero_weight_fallback".to_string(),
                message,
            })?;
        }

        match &mut config.judges {
            JudgeAxis::Fixed { competences } => {
                if let Some(v) = self.list("judge_competence_grid")? {
                    *competences = v;
                }
                for key in ["judge_mu_grid", "judge_sigma_set", "judge_lo", "judge_hi"] {
                    if self.get(key).is_some() {
                        return Err(Error::Config {
                            field: key.to_string(),
                            message: "only applies when judge_count > 1".to_string(),
                        });
                    }
                }
            }
            JudgeAxis::Sampled {
                count,
                mu_grid,
                sigma_set,
                lo,
                hi,
            } => {
                *count = judge_count;
                if let Some(v) = self.list("judge_mu_grid")? {
                    *mu_grid = v;
                }
                if let Some(v) = self.list("judge_sigma_set")? {
                    *sigma_set = v;
                }
                if let Some(v) = self.parsed("judge_lo")? {
                    *lo = v;
                }
                if let Some(v) = self.parsed("judge_hi")? {
                    *hi = v;
                }
                if self.get("judge_competence_grid").is_some() {
                    return Err(Error::Config {
                        field: "judge_competence_grid".to_string(),
                        message: "only applies when judge_count = 1".to_string(),
                    });
                }
            }
        }
        if judge_count == 0 {
            return Err(Error::Config {
                field: "judge_count".to_string(),
                message: "must be at least 1".to_string(),
            });
        }
        config.validate()?;
        Ok(config)
    }

    fn parsed<T: std::str::FromStr>(&self, key: &str) -> Result<Option<T>>
    where
        T::Err: std::fmt::Display,
    {
        self.get(key)
            .map(|v| {
                v.parse::<T>().map_err(|e| Error::Config {
                    field: key.to_string(),
                    message: format!("cannot parse `{v}`: {e}"),
                })
            })
            .transpose()
    }

    fn list(&self, key: &str) -> Result<Option<Vec<f64>>> {
        self.get(key)
            .map(|v| {
                parse_list(v).map_err(|message| Error::Config {
                    field: key.to_string(),
                    message,
                })
            })
            .transpose()
    }
}

pub fn parse_list(v: &str) -> std::result::Result<Vec<f64>, String> {
    v.split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| s.parse::<f64>().map_err(|e| format!("cannot parse `{s}`: {e}")))
        .collect()
}

pub fn parse_fallback(v: &str) -> std::result::Result<ZeroWeightFallback, String> {
    match v.trim().to_ascii_lowercase().as_str() {
        "majority" => Ok(ZeroWeightFallback::Majority),
        "coinflip" | "coin-flip" => Ok(ZeroWeightFallback::CoinFlip),
        other => Err(format!("unknown fallback `{other}` (expected majority or coinflip)")),
    }
}

pub fn fallback_name(f: ZeroWeightFallback) -> &'static str {
    match f {
        ZeroWeightFallback::Majority => "majority",
        ZeroWeightFallback::CoinFlip => "coinflip",
    }
}

fn join(values: &[f64]) -> String {
    values.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(",")
}

/// Serializes the fully resolved config. Floats use the shortest
/// representation that parses back to the same value.
pub fn render(config: &SweepConfig) -> String {
    let mut out = String::new();
    let mut line = |k: &str, v: String| {
        let _ = writeln!(out, "{k} = {v}");
    };
    line("expert_count", config.expert_count.to_string());
    line("judge_count", config.judges.judge_count().to_string());
    line("expert_mu_grid", join(&config.expert_mu_grid));
    line("expert_sigma_set", join(&config.expert_sigma_set));
    line("expert_lo", config.expert_lo.to_string());
    line("expert_hi", config.expert_hi.to_string());
    match &config.judges {
        JudgeAxis::Fixed { competences } => line("judge_competence_grid", join(competences)),
        JudgeAxis::Sampled {
            mu_grid,
            sigma_set,
            lo,
            hi,
            ..
        } => {
            line("judge_mu_grid", join(mu_grid));
            line("judge_sigma_set", join(sigma_set));
            line("judge_lo", lo.to_string());
            line("judge_hi", hi.to_string());
        }
    }
    line("policy", config.policy.to_string());
    line("trials", config.trials.to_string());
    line("master_seed", config.master_seed.to_string());
    line("evaluation_mode", config.mode.to_string());
    line("zero_weight_fallback", fallback_name(config.fallback).to_string());
    out
}
