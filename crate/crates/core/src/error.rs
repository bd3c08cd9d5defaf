use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// A distribution parameter is outside its admissible range.
    #[error("invalid parameter {name} = {value}: {reason}")]
    InvalidParameter {
        name: &'static str,
        value: f64,
        reason: &'static str,
    },
    /// An argument is outside the domain of the function.
    #[error("value {value} is outside the domain {domain}")]
    Domain { value: f64, domain: &'static str },
    /// A data row could not be read as a number (rows count from 1).
    #[error("row {row}: cannot parse `{content}` as a number")]
    Parse { row: usize, content: String },
    /// An observation lies outside the open unit interval.
    #[error("row {row}: value {value} is outside (0, 1)")]
    OutOfRange { row: usize, value: f64 },
    #[error("no observations")]
    NoData,
    #[error("insufficient data: need at least {needed} observations, got {got}")]
    InsufficientData { needed: usize, got: usize },
    /// The estimation problem has no meaningful solution for this input.
    #[error("ill-posed problem: {0}")]
    IllPosed(String),
    #[error("invalid configuration at `{path}`: {reason}")]
    Config { path: String, reason: String },
    #[error("mismatched inputs: {0}")]
    Mismatch(String),
    #[error("numerical failure: {0}")]
    Numerical(String),
}

impl Error {
    pub(crate) fn param(name: &'static str, value: f64, reason: &'static str) -> Self {
        Error::InvalidParameter {
            name,
            value,
            reason,
        }
    }
}
