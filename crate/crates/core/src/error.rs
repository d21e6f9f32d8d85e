use thiserror::Error;

/// Errors raised anywhere in the pipeline.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid domain: {0}")]
    InvalidDomain(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("non-finite value {value} at x = {point}")]
    Evaluation { point: f64, value: f64 },
    #[error("point lies on a branch cut or contour; a side must be given")]
    SideRequired,
    #[error("point outside the admissible domain: {0}")]
    Domain(String),
    #[error("contour geometry: {0}")]
    Geometry(String),
    #[error("collocation matrix is ill-conditioned (estimate {cond:.3e}); use more nodes or re-truncate")]
    IllPosed { cond: f64 },
    #[error("equilibrium Newton iteration did not converge in {iterations} steps")]
    NoSingleInterval { iterations: usize },
    #[error("equilibrium density is negative at x = {x}; multi-interval support is not supported")]
    MultiInterval { x: f64 },
    #[error("weight is not normalizable: {0}")]
    NonNormalizable(String),
    #[error("scaling root-finder failed: {0}")]
    ScalingFailure(String),
    #[error("invalid recurrence coefficient {0}")]
    InvalidCoefficient(f64),
    #[error("overflow: {0}")]
    Overflow(String),
    #[error("inconsistent extraction: {0}")]
    Extraction(String),
    #[error("eigensolver failed to converge")]
    Eigen,
    #[error("did not converge: {0}")]
    Convergence(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("row {n}: {source}")]
    Row {
        n: usize,
        #[source]
        source: Box<Error>,
    },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
