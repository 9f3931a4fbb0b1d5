//! Weighted majority voting for binary-voting experts whose weights are set
//! by imperfect judges.
//!
//! - [`voting`]: the weighted majority rule, exact and simulated accuracy,
//!   and winning-coalition structures.
//! - [`weighting`]: log-odds weights, judges' perceived competences and
//!   scores, score policies and aggregation.
//! - [`sampling`]: truncated-normal competence draws and reproducible streams.
//! - [`experiments`]: Monte Carlo sweeps over competence distributions.
//! - [`cli`]: the `jury` command-line front end.

pub mod cli;
pub mod error;
pub mod experiments;
pub mod sampling;
pub mod voting;
pub mod weighting;

pub use error::{Error, Result};
pub use experiments::{EvaluationMode, SweepConfig, SweepResult};
pub use sampling::{RandomStream, TruncatedNormalSpec};
pub use voting::{CompetencePanel, Decision, VoteProfile, WeightVector, ZeroWeightFallback};
pub use weighting::{ScoreMatrix, WeightPolicy};
