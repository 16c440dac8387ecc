use thiserror::Error;

/// Failure modes shared across the toolkit.
///
/// Every certified decision either succeeds, is refuted, or ends in one of
/// the "could not decide" variants below. None of them is ever guessed.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("precision exhausted: {0}")]
    PrecisionExhausted(String),

    #[error("ambiguous enclosure: {0}")]
    AmbiguousEnclosure(String),

    #[error("continued fraction expansion is ambiguous after {certified} certified quotients")]
    AmbiguousExpansion { certified: usize },

    #[error("undecidable: {0}")]
    Undecidable(String),

    #[error("branch undecidable: {0}")]
    BranchUndecidable(String),

    #[error("empty delta window: gamma does not exceed 11/12 + eta/4")]
    EmptyWindow,

    #[error("not a witness: |f(u)| exceeds epsilon")]
    NotAWitness,

    #[error("first coordinate of the candidate vector is zero")]
    ZeroFirstCoordinate,

    #[error("factorization budget exhausted on cofactor {0}")]
    FactorizationTimeout(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
