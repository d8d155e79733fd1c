use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AlgError {
    #[error("zero polynomial where a nonzero one is required ({0})")]
    ZeroPolynomial(&'static str),
    #[error("polynomial is constant in the eliminated variable")]
    ConstantInVariable,
    #[error("elimination blowup: degree {degree} exceeds cap {cap}")]
    EliminationBlowup { degree: usize, cap: usize },
    #[error("parse error: {0}")]
    Parse(String),
    #[error("thom encoding {0:?} is not realized by any real root")]
    ThomNotRealized(Vec<i8>),
    #[error("factorization failed: {0}")]
    Factorization(String),
}

pub type Result<T> = std::result::Result<T, AlgError>;
