use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("duplicate factor name `{0}`")]
    DuplicateFactor(String),

    #[error("unknown factor `{0}`")]
    UnknownFactor(String),

    #[error("factor `{0}` must have a positive dimension")]
    ZeroDimension(String),

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("states live on different bases")]
    BasisMismatch,

    #[error("state has zero norm")]
    ZeroNorm,

    #[error("not a valid density matrix: {0}")]
    InvalidDensityMatrix(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("a scan needs at least 2 steps, got {0}")]
    TooFewSteps(usize),

    #[error("anharmonicity must be nonnegative (unbounded potential), got {0}")]
    NegativeAnharmonicity(f64),

    #[error("truncation must be at least {min}, got {found}")]
    TruncationTooSmall { min: usize, found: usize },

    #[error("level {level} outside truncated basis of size {truncation}")]
    LevelOutOfRange { level: usize, truncation: usize },

    #[error("both photons assigned to level {0}; the mode mapping must be one-to-one")]
    DuplicateLevel(usize),

    #[error("projection onto the |1,1> sector is empty")]
    EmptyProjection,

    #[error("branch superposition has zero norm")]
    DegenerateGram,

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("adiabatic timescale hierarchy violated: r1 = {r1:.4}, r2 = {r2:.4}, threshold {threshold}")]
    AdiabaticViolation { r1: f64, r2: f64, threshold: f64 },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
