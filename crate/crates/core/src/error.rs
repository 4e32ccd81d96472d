//! Error types shared across the crate.

use thiserror::Error;

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;

/// Errors produced by ladder construction, quadrature, and verification.
#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("invalid ladder: {0}")]
    InvalidLadder(String),

    #[error("invalid mollifier: {0}")]
    InvalidMollifier(String),

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("ladder mismatch: families were built on different scale ladders")]
    LadderMismatch,

    #[error("derivative order {requested} exceeds declared smoothness {declared}")]
    SmoothnessExceeded { requested: usize, declared: String },

    #[error("unbounded integrand: {0}")]
    UnboundedIntegrand(String),

    #[error(
        "resolution too coarse at level {level}: {got} cells per unit, \
         narrowest feature needs at least {required}"
    )]
    ResolutionTooCoarse {
        level: usize,
        required: u32,
        got: u32,
    },

    #[error("neither convolution factor is compactly supported")]
    NeitherCompactlySupported,

    #[error(
        "finite-difference step underflow at level {level}: step {step:e} below \
         {limit:e} for evaluation radius {radius}"
    )]
    StepUnderflow { level: usize, step: f64, limit: f64, radius: f64 },

    #[error("divergent family: {witness}")]
    DivergentFamily { witness: String },

    #[error("battery class mismatch: claim {claim} needs {required}, battery is {got}")]
    BatteryClassMismatch {
        claim: String,
        required: String,
        got: String,
    },

    #[error("unknown name: {0}")]
    UnknownName(String),

    #[error("fundamental solution verification failed for {name}: {detail}")]
    VerificationFailed { name: String, detail: String },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("empty grid")]
    EmptyGrid,

    #[error("io error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<csv::Error> for Error {
    fn from(e: csv::Error) -> Self {
        Error::Io(e.to_string())
    }
}
