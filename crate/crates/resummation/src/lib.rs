//! Borel–Padé–Laplace summation of time-series expansions.
//!
//! Terms u_0..u_m are Borel-transformed, prolonged pointwise by robust Padé
//! approximants and mapped back by Gauss–Laguerre quadrature of the Laplace
//! integral.

mod borel;
mod flow;
mod pade;
mod residual;

pub use borel::{borel, formal_laplace, partial_sum_radius, BorelSeries};
pub use flow::FlowEvaluator;
pub use pade::{pade, PadeSet, Rational, RANK_TOL};
pub use residual::{residual, ResidualNorm};

use quad_linalg::LinalgError;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ResumError {
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error("highest term vanishes; the truncated series is exact")]
    ZeroHighestTerm,
    #[error("first term vanishes")]
    ZeroFirstTerm,
    #[error("need at least {min} terms, got {got}")]
    TooFewTerms { min: usize, got: usize },
    #[error("all series coefficients are zero")]
    AllZeroSeries,
    #[error("Padé orders r={r}, s={s} need {} coefficients, got {len}", r + s + 1)]
    BadOrders { r: usize, s: usize, len: usize },
    #[error("denominator vanishes on the Laplace path at node {node}, t={t}")]
    PoleOnPath { node: usize, t: f64 },
    #[error("time derivative vanishes (‖A(u)‖ = {residual})")]
    ZeroDerivative { residual: f64 },
    #[error("length mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("csv: {0}")]
    Csv(String),
}
