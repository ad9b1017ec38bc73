use thiserror::Error;

/// Errors raised by format handling, bit sources, distribution specs and generators.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid format: {0}")]
    InvalidFormat(String),

    #[error("code {bits:#x} does not fit in {width} bits")]
    CodeWidth { bits: u64, width: u32 },

    #[error("width mismatch: expected {expected} bits, found {found}")]
    WidthMismatch { expected: u32, found: u32 },

    #[error("no {0} exists for the extremal code")]
    Extremal(&'static str),

    #[error("random bit source exhausted after {consumed} bits")]
    Exhausted { consumed: u64 },

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("forbidden dual dispatch (d, d') = (0, 1)")]
    ForbiddenDispatch,

    #[error("distribution function is not monotone: {0}")]
    SpecViolation(String),

    #[error("construction failed: {0}")]
    Construction(String),

    #[error("validation failed: {0}")]
    Validation(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("parameter error: {0}")]
    Parameter(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
