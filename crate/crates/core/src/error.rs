use thiserror::Error;

/// Errors raised by the clustering algorithms and their inputs.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("point {0} is assigned more than once")]
    DuplicatePoint(usize),
    #[error("point {0} has no assignment")]
    MissingPoint(usize),
    #[error("point {point} is out of range for {n} points")]
    PointOutOfRange { point: usize, n: usize },
    #[error("{0} points exceed the supported maximum of 2^32")]
    TooManyPoints(usize),
    #[error("clusterings cover different point sets ({left} vs {right} points)")]
    PointSetMismatch { left: usize, right: usize },
    #[error("color class {0} is empty")]
    EmptyColorClass(usize),
    #[error("point {point} has color {color}, but only {k} colors exist")]
    ColorOutOfRange { point: usize, color: usize, k: usize },
    #[error("color classes do not all have the same size")]
    UnequalColorClasses,
    #[error("number of colors {0} is not a power of two")]
    NotPowerOfTwo(usize),
    #[error("profile {profile:?} is inconsistent with global color counts {counts:?}")]
    InconsistentProfile { profile: Vec<u64>, counts: Vec<u64> },
    #[error("clustering is not p-divisible")]
    NotPDivisible,
    #[error("edge ({0}, {1}) is a self-loop or out of range")]
    InvalidEdge(usize, usize),
    #[error("edge ({0}, {1}) is listed twice")]
    DuplicateEdge(usize, usize),
    #[error("consensus instance has no input clusterings")]
    NoInputs,
    #[error("norm exponent must be positive")]
    InvalidNorm,
    #[error("{n} points exceed the oracle limit of {limit}")]
    OracleLimit { n: usize, limit: usize },
    #[error("oracle limit {0} is above the hard maximum of 15")]
    OracleLimitTooHigh(usize),
    #[error("internal invariant violated: {0}")]
    Invariant(String),
}

pub type Result<T> = std::result::Result<T, Error>;
