use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid ring: {0}")]
    InvalidRing(String),
    #[error("ring axiom violated: {axiom} (witness: {})", witness.join(", "))]
    Axiom { axiom: String, witness: Vec<String> },
    #[error("infinite-dimensional quotient: the ideal contains no power of `{0}`")]
    InfiniteDimensional(String),
    #[error("invalid module: {0}")]
    InvalidModule(String),
    #[error("unknown ring `{0}`")]
    UnknownRing(String),
    #[error("unknown module `{0}`")]
    UnknownModule(String),
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("contract violation: {0}")]
    Contract(String),
    #[error("internal invariant failed: {0}")]
    Invariant(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// Process exit code used by the command-line driver.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Invariant(_) => 3,
            _ => 2,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
