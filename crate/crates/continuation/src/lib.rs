//! Time marching with Borel–Padé–Laplace steps: an adaptive driver that grows
//! Δt while the residual stays below ε, and a fixed-step driver.

mod driver;
mod problem;
mod trace;

pub use driver::{advance, fixed_step_integrate};
pub use problem::{ContinuationParams, Problem, ResidualScope, StepPolicy};
pub use trace::{integrated_residual, ContinuationTrace, StepRecord, Termination};

use resummation::ResumError;
use series_engine::SeriesError;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ContinuationError {
    #[error(transparent)]
    Series(#[from] SeriesError),
    #[error(transparent)]
    Resum(#[from] ResumError),
    #[error("integrated residual needs at least 2 records, got {got}")]
    TooFewPoints { got: usize },
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("csv: {0}")]
    Csv(String),
}
