use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// Argument outside the mathematical domain of a function.
    #[error("domain error: {0}")]
    Domain(String),

    /// Result does not fit the scalar type (e.g. K_ν(x) for x → 0).
    #[error("overflow: {0}")]
    Overflow(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("target too short: lag {needed} required, only lags 0..={available} available")]
    InsufficientTarget { needed: usize, available: usize },

    /// The linear system built from the target is singular or ill-conditioned.
    #[error("non-invertible target system (condition number {condition:e})")]
    NonInvertible { condition: f64 },

    #[error("target not realizable: {0}")]
    NotRealizable(String),

    #[error("model is not stationary (spectral radius {spectral_radius})")]
    NonStationary { spectral_radius: f64 },

    #[error("no convergence after {iterations} iterations (residual {residual:e})")]
    Convergence { iterations: usize, residual: f64 },

    #[error("resource limit: {0}")]
    Resource(String),

    #[error("optimization failed: {0}")]
    OptimizationFailed(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// True for failures of the numerics rather than of the caller's input or the filesystem.
    pub fn is_numeric(&self) -> bool {
        matches!(
            self,
            Error::Domain(_)
                | Error::Overflow(_)
                | Error::NonInvertible { .. }
                | Error::NotRealizable(_)
                | Error::NonStationary { .. }
                | Error::Convergence { .. }
                | Error::Resource(_)
                | Error::OptimizationFailed(_)
        )
    }
}
