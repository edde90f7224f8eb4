use thiserror::Error;

/// Errors raised by parameter validation across the crate.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("invalid ground [{lo},{n}] with k={k}")]
    InvalidGround { lo: u32, n: u32, k: u32 },
    #[error("set {0} does not fit the ground")]
    OutsideGround(String),
    #[error("ground mismatch: {0}")]
    GroundMismatch(String),
    #[error("rank {rank} out of range (total {total})")]
    RankOutOfRange { rank: u64, total: u64 },
    #[error("parameter out of range: {0}")]
    OutOfRange(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("families are not cross-intersecting")]
    NotCrossIntersecting,
    #[error("instance too large: {0}")]
    TooLarge(String),
    #[error("unknown lemma id `{0}`")]
    UnknownLemma(String),
    #[error("malformed document: {0}")]
    Format(String),
}

pub type Result<T> = std::result::Result<T, Error>;
