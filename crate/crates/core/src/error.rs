use thiserror::Error;

/// Errors raised by the symbolic engine.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("unsupported dimension {0}: the engine handles 1 <= n <= {max}", max = crate::poly::MAX_DIM)]
    UnsupportedDimension(usize),

    #[error("polynomial is not homogeneous of degree {expected}")]
    NotHomogeneous { expected: usize },

    #[error("polynomial of degree {0} is not harmonic")]
    NotHarmonic(usize),

    #[error("degree mismatch: expected {expected}, found {found}")]
    DegreeMismatch { expected: usize, found: usize },

    #[error("Poisson solve rejected r^{sigma}: only sigma <= -2 is supported")]
    NonDecaying { sigma: i64 },

    #[error("exceptional right-hand side r^{sigma} (log r)^{logpow} G_{degree} in dimension {n}")]
    UnexpectedExceptional {
        n: usize,
        sigma: i64,
        logpow: u32,
        degree: usize,
    },

    #[error("expansion has a constant term; reciprocal needs a decaying argument")]
    ConstantTerm,

    #[error("Kelvin transform of log terms is not supported ({count} log terms present)")]
    LogTerms { count: usize },

    #[error("odd dimension {0}: the Kelvin polynomial check needs even n > 4")]
    OddDimension(usize),

    #[error("dimension {0} is too small for this operation")]
    DimensionTooSmall(usize),

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("log depth {found} exceeds guard {guard}")]
    LogDepthExceeded { found: u32, guard: u32 },

    #[error("metric is not positive definite at the sample point")]
    NotPositiveDefinite,

    #[error("samples along direction {direction} are below the noise floor at some radii only")]
    BelowNoiseFloor { direction: usize },

    #[error("invalid sample plan: {0}")]
    InvalidPlan(String),

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
