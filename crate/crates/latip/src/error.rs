use thiserror::Error;

/// Errors shared by all solver and linear-algebra routines.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("matrix is rank deficient (expected full column rank)")]
    RankDeficient,

    #[error("matrix is singular")]
    Singular,

    #[error("bad structure: {0}")]
    Structure(String),

    #[error("index out of range: {0}")]
    Range(String),

    #[error("invalid parameter: {0}")]
    Parameter(String),

    #[error("unsupported shape: {0}")]
    UnsupportedShape(String),

    #[error("resource limit exceeded: {0}")]
    Resource(String),

    #[error("internal inconsistency: {0}")]
    Internal(String),

    #[error("generation failed: {0}")]
    Generation(String),

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
