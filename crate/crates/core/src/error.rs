use thiserror::Error;

/// Errors raised by the library operations.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument lies outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// A certified sum could not reach the requested tolerance.
    #[error("series did not converge: {0}")]
    NonConvergent(String),

    /// The radius equation has no sign change on the working range.
    #[error("no root of the radius equation on (0, {r_max}]")]
    NoRootInRange { r_max: f64 },

    /// A structural precondition of an operation does not hold.
    #[error("contract violated: {0}")]
    Contract(String),

    /// A configuration object could not be turned into a model.
    #[error("invalid configuration: {0}")]
    Config(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain(msg: impl Into<String>) -> Error {
    Error::Domain(msg.into())
}

pub(crate) fn contract(msg: impl Into<String>) -> Error {
    Error::Contract(msg.into())
}
