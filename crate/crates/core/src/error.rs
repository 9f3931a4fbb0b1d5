use std::fmt;

/// Errors raised by the voting, weighting, sampling and experiment layers.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected} entries, found {found}")]
    Dimension { expected: usize, found: usize },

    #[error("{what} must not be empty")]
    Empty { what: &'static str },

    #[error("non-finite {what} at index {index}: {value}")]
    NonFinite {
        what: &'static str,
        index: usize,
        value: f64,
    },

    #[error("{what} = {value} is outside {range}")]
    Domain {
        what: &'static str,
        value: f64,
        range: Range,
    },

    #[error(
        "{what} needs 2^{size} enumeration, above the limit of {limit}; use Monte Carlo estimation instead"
    )]
    Capacity {
        what: &'static str,
        size: usize,
        limit: usize,
    },

    #[error("invalid truncated normal: {0}")]
    InvalidSpec(String),

    #[error(
        "truncated normal N({mu}, {sigma}) on ({lo}, {hi}) rejected {attempts} consecutive draws"
    )]
    SamplingFailure {
        mu: f64,
        sigma: f64,
        lo: f64,
        hi: f64,
        attempts: usize,
    },

    #[error("cell {cell}: {source}")]
    Cell { cell: String, source: Box<Error> },

    #[error("{field}: {message}")]
    Config { field: String, message: String },

    #[error("invalid argument: {0}")]
    Invalid(String),
}

/// Interval bounds reported in domain errors.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Range {
    Open01,
    Closed01,
}

impl fmt::Display for Range {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Range::Open01 => f.write_str("(0, 1)"),
            Range::Closed01 => f.write_str("[0, 1]"),
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
