use thiserror::Error;

/// Errors raised anywhere in the crate.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("matrix is singular (pivot {pivot:e} below threshold {threshold:e})")]
    SingularMatrix { pivot: f64, threshold: f64 },

    #[error("matrix is not symmetric (relative asymmetry {asymmetry:e})")]
    NotSymmetric { asymmetry: f64 },

    #[error("matrix is not positive definite (smallest eigenvalue {min_eigenvalue:e})")]
    NotPositiveDefinite { min_eigenvalue: f64 },

    #[error("iteration did not converge after {iterations} steps (best estimate {estimate})")]
    NoConvergence { iterations: usize, estimate: f64 },

    #[error("cos F is singular: the semigroup is at an exceptional time")]
    SingularCosine,

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("quadratic form is not real positive definite")]
    NotPositive,

    #[error("quadratic form is not elliptic")]
    NotElliptic,

    #[error("Mobius map has a pole at gamma = {re} + {im}i")]
    PoleAtGamma { re: f64, im: f64 },

    #[error("exceptional time: {0}")]
    ExceptionalTime(String),

    #[error("geometric and algebraic boundedness tests disagree at theta = {theta}, t = {re} + {im}i")]
    CharacterizationMismatch { theta: f64, re: f64, im: f64 },

    #[error("Gaussian symbol is not integrable (Re A not positive definite)")]
    NotIntegrable,

    #[error("internal error: {0}")]
    Internal(String),

    #[error("time lies outside the boundedness region")]
    OutsideRegion,

    #[error("operator is unbounded (a = {a}, b = {b}, deficit {deficit:e})")]
    Unbounded { a: f64, b: f64, deficit: f64 },

    #[error("semigroup is unbounded: |exp(-tM)| = {spectral_norm}")]
    UnboundedSemigroup { spectral_norm: f64 },

    #[error("singular values are not of oscillator type (delta = 0)")]
    NotOscillatorType,

    #[error("weight is not strictly plurisubharmonic (alpha = {alpha})")]
    NotPlurisubharmonic { alpha: f64 },

    #[error("internal contract violated: {0}")]
    InternalContractViolation(String),

    #[error("Gaussian fiber integral diverges (Re of the xi-block is not positive definite)")]
    NonIntegrableFiber,

    #[error("kernel composition diverges (Re of the inner block is not positive definite)")]
    NonIntegrableComposition,

    #[error("grid too coarse: doubling the resolution moved the norm by {change:e}")]
    GridTooCoarse { change: f64 },

    #[error("quadrature overflow: {0}")]
    QuadratureOverflow(String),

    #[error("Gaussian weight integral diverges")]
    Divergent,

    #[error("grid of {points} points exceeds the limit of {limit}")]
    GridGuard { points: usize, limit: usize },

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
