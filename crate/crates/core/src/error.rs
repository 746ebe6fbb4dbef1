use thiserror::Error;

/// Errors surfaced by the twisted-chain pipeline.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension overflow: {0}")]
    DimensionOverflow(String),
    #[error("singular system: {0}")]
    Singular(String),
    #[error("non-generic spectrum: {0}")]
    NonGenericSpectrum(String),
    #[error("non-generic twist: {0}")]
    NonGenericTwist(String),
    #[error("linking unsolvable: {0}")]
    LinkingUnsolvable(String),
    #[error("TQ inconsistent: {0}")]
    TqInconsistent(String),
    #[error("rapidity collision: {0}")]
    Collision(String),
    #[error("not on-shell: {0}")]
    OffShell(String),
    #[error("invalid input: {0}")]
    Invalid(String),
}

pub type Result<T> = std::result::Result<T, Error>;
