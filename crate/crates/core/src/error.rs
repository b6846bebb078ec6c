use thiserror::Error;

/// Errors raised by the algebra kernels and the higher-level checkers.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("resource limit exceeded: {0}")]
    ResourceLimit(String),
    #[error("parse error at {line}:{column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("validation error: {0}")]
    Validation(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("negative exponent on non-invertible variable `{0}`")]
    NegativeExponent(String),
    #[error("inexpressible exponential: {0}")]
    InexpressibleExponential(String),
    #[error("non-integral exponent: {0}")]
    NonIntegralExponent(String),
    #[error("flag contradiction at step {step}: {message}")]
    FlagContradiction { step: usize, message: String },
    #[error("ambient mismatch: {0}")]
    AmbientMismatch(String),
    #[error("character not constant on coset {0}")]
    CharacterNotConstant(usize),
    #[error("non-colinear translations: {0}")]
    NonColinear(String),
    #[error("polynomial does not involve X1: {0}")]
    IndependentOfX1(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl Error {
    pub(crate) fn parse(line: usize, column: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            line,
            column,
            message: message.into(),
        }
    }
}
