use thiserror::Error;

/// Errors raised by the solver library.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("domain error in {func}: argument {arg} outside the supported range ({range})")]
    Domain {
        func: &'static str,
        arg: f64,
        range: &'static str,
    },

    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("length mismatch: expected {expected}, got {got}")]
    LengthMismatch { expected: usize, got: usize },

    #[error("grid mismatch: {0}")]
    GridMismatch(String),

    #[error("non-finite value {value} at node {index} (t = {time})")]
    NonFinite { index: usize, value: f64, time: f64 },

    #[error("step limit of {limit} exceeded before reaching t = {target}")]
    StepLimit { limit: usize, target: f64 },

    #[error("degenerate input: {0}")]
    Degenerate(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Error {
    Error::InvalidParameter {
        name,
        reason: reason.into(),
    }
}
