use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// Regimes the library deliberately rejects, e.g. a torsion-free loop
    /// fed to the rank oracle, or g - d + r < 0.
    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("parse error: {0}")]
    Parse(String),

    /// An eagerly-checked internal identity failed; indicates a construction
    /// bug, not bad user input.
    #[error("internal consistency failure: {0}")]
    Internal(String),

    #[error("refusing to run: {0}")]
    Refused(String),
}

pub type Result<T> = std::result::Result<T, Error>;
