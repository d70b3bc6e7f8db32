use std::io;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid domain: [{x_min}, {x_max}] x [{y_min}, {y_max}]")]
    InvalidDomain {
        x_min: f64,
        x_max: f64,
        y_min: f64,
        y_max: f64,
    },
    #[error("element counts must be positive, got nx={nx}, ny={ny}")]
    InvalidCounts { nx: usize, ny: usize },
    #[error("invalid exponent: {0}")]
    InvalidExponent(String),
    #[error("edge {0} is a boundary edge; jumps and averages live on interior edges only")]
    BoundaryEdge(usize),
    #[error("field has {found} coefficients, mesh has {expected} elements")]
    SizeMismatch { expected: usize, found: usize },
    #[error("invalid solver configuration: {0}")]
    InvalidConfig(String),
    #[error("step size rho={rho} violates the convergence condition ({condition}) for r={r}")]
    StepSize {
        rho: f64,
        r: f64,
        condition: &'static str,
    },
    #[error("system matrix is not positive definite (pivot {pivot} at row {row})")]
    NotPositiveDefinite { row: usize, pivot: f64 },
    #[error("linear solve failed: {0}")]
    Linear(String),
    #[error("{0}")]
    Input(String),
    #[error(transparent)]
    Io(#[from] io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
