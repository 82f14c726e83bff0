use thiserror::Error;

/// Errors raised by the library.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    Parameter(String),
    #[error("point {0} lies outside the interval [l0, r0]")]
    Domain(String),
    #[error("singular input: {0}")]
    Singular(String),
    #[error("orbit terminated at 0")]
    Terminated,
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("internal consistency check failed: {0}")]
    Consistency(String),
    #[error("cannot parse {0:?}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
