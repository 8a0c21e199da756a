use thiserror::Error;

/// Errors raised by the numerical routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument is outside the mathematical domain of the function.
    #[error("domain error: {0}")]
    Domain(String),
    /// The arguments are valid but violate the regime an evaluator requires (e.g. `k <= lambda`).
    #[error("precondition violated: {0}")]
    Precondition(String),
    /// Two independent evaluation routes disagreed beyond tolerance.
    #[error("internal consistency failure: {0}")]
    Consistency(String),
    /// An exact constructor was asked for an instance too large to enumerate.
    #[error("instance too large for exact evaluation: {0}")]
    SizeGuard(String),
    /// A result could not be certified to the requested accuracy.
    #[error("accuracy requirement not met: {0}")]
    Accuracy(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain(msg: impl Into<String>) -> Error {
    Error::Domain(msg.into())
}

pub(crate) fn precondition(msg: impl Into<String>) -> Error {
    Error::Precondition(msg.into())
}
