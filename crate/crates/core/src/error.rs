use thiserror::Error;

/// Errors raised by constructors and operations of this crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameter `{name}` = {value}: {reason}")]
    InvalidParameter {
        name: &'static str,
        value: f64,
        reason: &'static str,
    },

    #[error("matrix is not symmetric (asymmetry residual {residual:e})")]
    Asymmetric { residual: f64 },

    #[error("negative evolution time {0}; the semigroup only runs forward")]
    NegativeTime(f64),

    #[error("environment is not thermal: {0}")]
    NonThermal(&'static str),

    #[error("closed form requires D_xy = 0, got {0}")]
    CrossDiffusionNonZero(f64),

    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("linear system is singular (pivot {pivot:e} at column {column})")]
    Singular { column: usize, pivot: f64 },

    #[error("unphysical: {0}")]
    Unphysical(String),
}

pub type Result<T> = std::result::Result<T, Error>;
