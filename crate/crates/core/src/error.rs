use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("resource limit exceeded: {what} needs {needed}, cap is {cap}")]
    ResourceLimit {
        what: &'static str,
        needed: u128,
        cap: u128,
    },
    #[error("domain error: {0}")]
    Domain(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("shape mismatch: bottom has {bottom} roots, top has {top}")]
    ShapeMismatch { bottom: usize, top: usize },
    #[error("palette mismatch: {left} colors vs {right} colors")]
    PaletteMismatch { left: usize, right: usize },
    #[error("parse error: {0}")]
    Parse(String),
    #[error("construction unsound: {0}")]
    Unsound(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn limit(what: &'static str, needed: impl Into<u128>, cap: impl Into<u128>) -> Error {
    Error::ResourceLimit {
        what,
        needed: needed.into(),
        cap: cap.into(),
    }
}
