use thiserror::Error;

/// Errors raised across the crate.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    /// A pipeline stage could not produce its output.
    #[error("infeasible at stage `{stage}`: {reason}")]
    Infeasible { stage: &'static str, reason: String },

    /// A search budget ran out before a definitive answer.
    #[error("budget exhausted: {0}")]
    Budget(String),

    #[error("unsupported: {0}")]
    Unsupported(String),

    /// A post-condition that should follow from the inputs failed.
    #[error("invariant violated: {0}")]
    Invariant(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidArgument(msg.into())
}

pub(crate) fn infeasible(stage: &'static str, reason: impl Into<String>) -> Error {
    Error::Infeasible {
        stage,
        reason: reason.into(),
    }
}
