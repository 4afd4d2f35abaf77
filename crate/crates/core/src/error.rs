use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("ambient dimension {0} exceeds the supported maximum of 6")]
    DimensionTooLarge(usize),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("empty input: {0}")]
    EmptyInput(&'static str),

    #[error("halfspace system does not describe a bounded set")]
    Unbounded,

    #[error("input is not in the nonnegative orthant")]
    NotInOrthant,

    #[error("input is not Borel-fixed: {0}")]
    NotBorelFixed(String),

    #[error("the zero form has no valuation")]
    ZeroForm,

    #[error("retry cap exceeded after {attempts} attempts: {reason}")]
    RetryCapExceeded { attempts: usize, reason: String },

    #[error("no Zariski decomposition supported on the listed curves: {0}")]
    NoDecomposition(String),

    #[error("invalid surface model: {0}")]
    InvalidModel(String),

    #[error("the ray L_t stays pseudoeffective beyond every support region (unbounded ray)")]
    UnboundedRay,

    #[error("an endpoint of the ray is irrational: {0}")]
    IrrationalEndpoint(String),

    #[error("the origin is not contained in the body")]
    OriginNotInBody,

    #[error("sample {0} outside the admissible range")]
    SampleOutOfRange(String),

    #[error("invariant violated: {0}")]
    Invariant(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
