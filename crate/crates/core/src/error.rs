use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("mask has no interior cells")]
    EmptyMask,

    #[error("interior cell ({i}, {j}) lies on the grid border")]
    BorderCell { i: usize, j: usize },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("shape does not fit inside the grid")]
    ShapeOutsideGrid,

    #[error("half-space boundary is not aligned with cell centers or midpoints")]
    IncompatibleHalfSpace,

    #[error("reflection of interior cell ({i}, {j}) leaves the grid")]
    ReflectionLeavesGrid { i: usize, j: usize },

    #[error("mask is not polarization invariant for this half-space")]
    NotInvariant,

    #[error("fields live on different masks")]
    MaskMismatch,

    #[error("field length {got} does not match {expected} interior cells")]
    LengthMismatch { expected: usize, got: usize },

    #[error("non-finite value at interior slot {0}")]
    InvalidValue(usize),

    #[error("negative value at interior slot {0}; operation requires f >= 0")]
    NegativeValue(usize),

    #[error("mask is not Steiner symmetric about a horizontal line")]
    NotSteinerMask,

    #[error("mask is not radial for the requested axis")]
    NonRadialMask,

    #[error("operator is not coercive (lambda_min(A) = {lambda_min:e})")]
    NonCoercive { lambda_min: f64 },

    #[error("weight has no positive part")]
    NoPositiveWeight,

    #[error("no iterate had a positive weighted mass")]
    NoPositiveDirection,

    #[error("eigensolver did not converge after {iters} iterations (residual {residual:e})")]
    NotConverged { iters: usize, residual: f64 },

    #[error("computed eigenvector is not strictly positive")]
    NotPositive,

    #[error("Rayleigh quotient denominator is not positive")]
    NonPositiveDenominator,

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
