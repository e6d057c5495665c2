use thiserror::Error;

/// Errors shared by every operation in the crate.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// Input exceeds the size an exact routine is configured for.
    #[error("capacity exceeded: {what} (limit {limit}, got {got})")]
    Capacity {
        what: &'static str,
        limit: usize,
        got: usize,
    },

    /// A hypothesis of the underlying theorem does not hold, so no output is promised.
    #[error("guarantee unavailable: {0}")]
    GuaranteeUnavailable(String),

    /// A guaranteed construction failed. Indicates a bug or a broken invariant upstream.
    #[error("guarantee violated: {0}")]
    GuaranteeViolated(String),

    /// A declared assumption was checked exactly and found false.
    #[error("assumption violated: {0}")]
    AssumptionViolation(String),

    /// A randomized procedure exhausted its retry budget.
    #[error("failure after {attempts} attempts: {detail}")]
    Failure { attempts: usize, detail: String },

    #[error("parse error: {0}")]
    Parse(String),

    #[error("io error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::InvalidArgument(msg.into()))
}
