use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    Dimension { expected: usize, got: usize },
    #[error("invalid input: {0}")]
    Input(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("unknown preset {0:?}")]
    UnknownPreset(String),
    #[error("algebra verification failed: {0}")]
    Verification(String),
    #[error("not an automorphism: {0}")]
    NotAutomorphism(String),
    #[error("elements belong to different algebras")]
    AlgebraMismatch,
    #[error("lattice is not full: {0}")]
    NonFullLattice(String),
    #[error("unmapped generator {0}")]
    Unmapped(String),
    #[error("relator index {0} out of range")]
    RelatorIndex(usize),
    #[error("hypothesis violated: {0}")]
    Hypothesis(String),
    #[error("limits exhausted: {0}")]
    LimitsExhausted(String),
    #[error("segment at scale 2^{scale} has length {length} > cap {cap}")]
    SegmentTooLong { scale: u32, length: usize, cap: usize },
    #[error("filling failed verification: {0}")]
    BadFilling(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("io: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// A search cap was hit; the question is undecided rather than failed.
    pub fn is_limit(&self) -> bool {
        matches!(self, Error::LimitsExhausted(_) | Error::SegmentTooLong { .. })
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Parse(e.to_string())
    }
}
