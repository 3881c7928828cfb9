use thiserror::Error;

/// Failure modes shared by every operation in the crate.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// An argument lies outside the domain of the operation (n = 0, non-prime modulus, ...).
    #[error("domain error: {0}")]
    Domain(String),
    /// A mathematical precondition of the statement being checked does not hold.
    #[error("precondition failed: {0}")]
    Precondition(String),
    /// The requested computation exceeds the configured work or size budget.
    #[error("resource budget exceeded: {0}")]
    Resource(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Domain(msg.into()))
}
