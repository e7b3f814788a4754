use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("dimension {dim} exceeds the cap of {cap}")]
    DimensionCap { dim: usize, cap: usize },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("map is not trace preserving (residual {residual:.3e})")]
    NotTracePreserving { residual: f64 },

    #[error("matrix is not positive semidefinite (min eigenvalue {min_eigenvalue:.3e})")]
    NotPositive { min_eigenvalue: f64 },

    #[error("non-finite matrix entry")]
    NonFinite,

    #[error("not a density matrix: {0}")]
    NotDensity(String),

    #[error("channel is not square ({d_in} -> {d_out})")]
    NonSquare { d_in: usize, d_out: usize },

    #[error("quantum Fisher information diverges at theta = {theta}")]
    FisherDivergence { theta: f64 },

    #[error("out of domain: {0}")]
    OutOfDomain(String),

    #[error("length mismatch: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
