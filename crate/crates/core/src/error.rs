use thiserror::Error;

/// Errors raised across the library.
///
/// The variant names double as the machine-readable `kind` in JSON error
/// records written by the CLI.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("matrix is not square ({rows}x{cols})")]
    NonSquare { rows: usize, cols: usize },
    #[error("matrix is singular")]
    Singular,
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("determinant is not a unit modulo {k}")]
    NotAUnit { k: u64 },
    #[error("code is not free and LCD")]
    NotFreeLcd,
    #[error("modulus {k} is unsupported (must be odd or 2 mod 4, and at least 2)")]
    BadModulus { k: u64 },
    #[error("rejection sampling exceeded {draws} draws")]
    Timeout { draws: usize },
    #[error("lattice basis is not integral")]
    NotIntegral,
    #[error("lattice does not contain {k}Z^n")]
    DoesNotContainKZn { k: u64 },
    #[error("lattice is not a scaled rotation of Z^n: {0}")]
    NotARotation(String),
    #[error("matrix is not symmetric")]
    NotSymmetric,
    #[error("instance too large for exhaustive search (n = {n}, limit {limit})")]
    TooLarge { n: usize, limit: usize },
    #[error("no pair-respecting isomorphism found: {0}")]
    ExtractionExhausted(String),
    #[error("verification failed: {0}")]
    VerificationFailed(String),
    #[error("no admissible modulus candidate: {0}")]
    NoCandidate(String),
    #[error("hull is not k*O*Z^n: {0}")]
    HullNotTrivial(String),
    #[error("ZLIP solver failed: {0}")]
    ZlipFailed(String),
    #[error("signed permutation equivalence failed: {0}")]
    SpepFailed(String),
    #[error("lattices are not isomorphic: {0}")]
    NotIsomorphic(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("I/O error: {0}")]
    Io(String),
}

impl Error {
    /// Short variant name, used as the `kind` field of error records.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::NonSquare { .. } => "NonSquare",
            Error::Singular => "Singular",
            Error::DimensionMismatch(_) => "DimensionMismatch",
            Error::NotAUnit { .. } => "NotAUnit",
            Error::NotFreeLcd => "NotFreeLcd",
            Error::BadModulus { .. } => "BadModulus",
            Error::Timeout { .. } => "Timeout",
            Error::NotIntegral => "NotIntegral",
            Error::DoesNotContainKZn { .. } => "DoesNotContainKZn",
            Error::NotARotation(_) => "NotARotation",
            Error::NotSymmetric => "NotSymmetric",
            Error::TooLarge { .. } => "TooLarge",
            Error::ExtractionExhausted(_) => "ExtractionExhausted",
            Error::VerificationFailed(_) => "VerificationFailed",
            Error::NoCandidate(_) => "NoCandidate",
            Error::HullNotTrivial(_) => "HullNotTrivial",
            Error::ZlipFailed(_) => "ZlipFailed",
            Error::SpepFailed(_) => "SpepFailed",
            Error::NotIsomorphic(_) => "NotIsomorphic",
            Error::Parse(_) => "ParseError",
            Error::Io(_) => "Io",
        }
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Parse(e.to_string())
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
