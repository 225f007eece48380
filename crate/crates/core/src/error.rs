use thiserror::Error;

/// Contract violations raised by the algebra operations.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("degree mismatch: {left} vs {right}")]
    DegreeMismatch { left: i64, right: i64 },
    #[error("context mismatch: {0}")]
    ContextMismatch(String),
    #[error("{0} is not a minimal double coset representative")]
    NotMinimalRepresentative(String),
    #[error("matrix is not in Theta(n, r): {0}")]
    NotInTheta(String),
    #[error("element does not lie in u(n)_h: {0}")]
    NotAMember(String),
    #[error("malformed input: {0}")]
    Malformed(String),
    #[error("verification failed: {0}")]
    Verification(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn precondition(cond: bool, msg: impl FnOnce() -> String) -> Result<()> {
    if cond {
        Ok(())
    } else {
        Err(Error::Precondition(msg()))
    }
}
