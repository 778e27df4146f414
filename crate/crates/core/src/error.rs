use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid coefficient ring: {0}")]
    InvalidRing(String),
    #[error("argument out of range: {0}")]
    OutOfRange(String),
    #[error("mismatched presentations: {0}")]
    PresentationMismatch(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("homology is not supported over this ring: {0}")]
    UnsupportedHomologyRing(String),
    #[error("internal invariant breached: {0}")]
    Internal(String),
}
