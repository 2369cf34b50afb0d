use thiserror::Error;

/// Errors produced by state construction, operator algebra and estimators.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid dimension {dim}: need dim >= 2")]
    InvalidDimension { dim: usize },

    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("degenerate sampling: {attempts} draws collinear with the reference state")]
    DegenerateSampling { attempts: usize },

    #[error("singular deformation: smallest eigenvalue {p_min} is not invertible")]
    SingularDeformation { p_min: f64 },

    #[error("target value {value} outside the open spectral range ({min}, {max})")]
    OutOfRange { value: f64, min: f64, max: f64 },

    #[error("numeric failure: {0}")]
    Numeric(String),

    #[error("resource limit: {n} spins exceeds cap {cap}")]
    ResourceLimit { n: usize, cap: usize },

    #[error("unsupported moment order {order}: at most {max} factors")]
    UnsupportedOrder { order: usize, max: usize },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("state norm {norm} departs from 1 beyond tolerance")]
    NotNormalized { norm: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;
