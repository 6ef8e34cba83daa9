use thiserror::Error;

/// Errors raised by the kernel, the subroutines and the search drivers.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("layout error: {0}")]
    Layout(String),

    #[error("gate construction error: {0}")]
    GateConstruction(String),

    #[error("invalid distribution: {0}")]
    InvalidDistribution(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// A caller-side guarantee did not hold (for example an empty flagged set
    /// handed to amplification).
    #[error("precondition violated: {0}")]
    PreconditionViolation(String),

    /// Signals a bug in this crate rather than bad input.
    #[error("internal error: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
