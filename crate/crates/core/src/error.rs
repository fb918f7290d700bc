use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid measure: {0}")]
    InvalidMeasure(String),

    #[error("ambient dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("frequency {0} is not an integer, but the measure contains a mod-1 image")]
    NonIntegerFrequency(f64),

    #[error("scale is singular or not invertible")]
    SingularScale,

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("did not converge: {0}")]
    NotConverged(String),

    #[error("quadrature tolerance {tol:e} unreachable (estimated error {achieved:e})")]
    QuadratureTolerance { tol: f64, achieved: f64 },

    #[error("schedule spans {found} dyadic windows, at least {required} required")]
    ScheduleTooShort { found: usize, required: usize },

    #[error("measure has zero mass after restriction")]
    ZeroMeasure,

    #[error("support violation: {0}")]
    SupportViolation(String),

    #[error("cutoff too small: {0}")]
    CutoffTooSmall(String),
}

pub type Result<T> = std::result::Result<T, Error>;
