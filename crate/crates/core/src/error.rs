use thiserror::Error;

/// Errors reported by the library.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("empty input")]
    EmptyInput,
    #[error("invalid length")]
    InvalidLength,
    #[error("m must be ≥ 1")]
    ZeroM,
    #[error("unsorted run")]
    UnsortedRun,
    #[error("buffer too small")]
    BufferTooSmall,
    #[error("not a PowerSort tree")]
    NotPowerSortTree,
    #[error("mismatched n: report has {report}, entropy has {entropy}")]
    MismatchedN { report: usize, entropy: usize },
    #[error("alpha must be a rational number > 1, got {0:?}")]
    InvalidAlpha(String),
    #[error("impossible dual-run profile: {0}")]
    ImpossibleProfile(String),
    #[error("invalid merge tree: {0}")]
    InvalidTree(String),
}

pub type Result<T> = std::result::Result<T, Error>;
