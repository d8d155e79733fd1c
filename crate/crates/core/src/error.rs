use exactalg::AlgError;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CoreError {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("validation failed: {0}")]
    Validation(String),
    #[error("nonlinear core has {0} unknowns, more than the supported 4")]
    TooLarge(usize),
    #[error("elimination blowup: degree {degree} exceeds cap {cap}")]
    EliminationBlowup { degree: usize, cap: usize },
    #[error("separation failure: {0}")]
    SeparationFailure(String),
    #[error("numeric failure: {0}")]
    Numeric(String),
    #[error("branch is unbounded as mu -> 0")]
    Unbounded,
    #[error("root tracking ambiguity: {0}")]
    TrackingAmbiguity(String),
    #[error("certification failed: {0}")]
    Certification(String),
    #[error("instance has no strictly feasible start")]
    NoStart,
    #[error("no positive-valuation branch: {0}")]
    NoPositiveValuation(String),
    #[error(transparent)]
    Alg(AlgError),
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

impl From<AlgError> for CoreError {
    fn from(e: AlgError) -> Self {
        match e {
            AlgError::EliminationBlowup { degree, cap } => CoreError::EliminationBlowup { degree, cap },
            other => CoreError::Alg(other),
        }
    }
}

pub type Result<T> = std::result::Result<T, CoreError>;

impl CoreError {
    /// Process exit status: 2 validation, 3 elimination, 4 numeric.
    pub fn exit_code(&self) -> i32 {
        match self {
            CoreError::Parse(_) | CoreError::Validation(_) | CoreError::NoStart | CoreError::Io(_) => 2,
            CoreError::TooLarge(_) | CoreError::EliminationBlowup { .. } | CoreError::SeparationFailure(_) | CoreError::Alg(_) => 3,
            CoreError::Numeric(_)
            | CoreError::Unbounded
            | CoreError::TrackingAmbiguity(_)
            | CoreError::Certification(_)
            | CoreError::NoPositiveValuation(_) => 4,
        }
    }

    /// Short machine-readable kind.
    pub fn kind(&self) -> &'static str {
        match self {
            CoreError::Parse(_) => "parse",
            CoreError::Validation(_) => "validation",
            CoreError::NoStart => "no-start",
            CoreError::Io(_) => "io",
            CoreError::TooLarge(_) => "too-large",
            CoreError::EliminationBlowup { .. } => "elimination-blowup",
            CoreError::SeparationFailure(_) => "separation-failure",
            CoreError::Alg(_) => "algebra",
            CoreError::Numeric(_) => "numeric",
            CoreError::Unbounded => "unbounded",
            CoreError::TrackingAmbiguity(_) => "tracking-ambiguity",
            CoreError::Certification(_) => "certification",
            CoreError::NoPositiveValuation(_) => "no-positive-valuation",
        }
    }
}
