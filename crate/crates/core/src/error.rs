use alloc::string::String;

/// Failures reported by the numerical routines.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("empty region")]
    EmptyRegion,
    #[error("no separating mu at this resolution")]
    NoSeparatingMu,
    #[error("grid truncation: {0}")]
    GridTruncation(String),
    #[error("mismatched grids: {0}")]
    MismatchedGrids(String),
    #[error("under-resolved mollifier: {0}")]
    UnderResolvedMollifier(String),
    #[error("nothing to test")]
    NothingToTest,
    #[error("insufficient radial range: {0}")]
    InsufficientRadialRange(String),
    #[error("inside excision ball")]
    InsideExcision,
    #[error("flow enters degenerate region")]
    DegenerateFlow,
    #[error("basis too small: {0}")]
    BasisTooSmall(String),
    #[error("grid escape: {0}")]
    GridEscape(String),
    #[error("internal error: {0}")]
    Internal(String),
}

pub type Result<T> = core::result::Result<T, Error>;

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidParameter(msg.into())
}
