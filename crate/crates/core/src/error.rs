use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// An argument lies outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),
    /// An iterative kernel (eigensolver, SVD) failed to converge.
    #[error("numerical failure: {0}")]
    NumericalFailure(String),
    /// A computed result violated a stated post-condition.
    #[error("contract violation: {0}")]
    ContractViolation(String),
    /// Malformed wire data.
    #[error("format error: {0}")]
    Format(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Domain(msg.into()))
}
