//! Time-series-expansion terms u_k of FE-discretized parabolic models.
//!
//! Terms follow the (optionally stabilized) recurrence
//! (M + α_k K) u_{k+1} = A_k(u_0, …, u_k)/(k+1) on interior degrees of freedom.

mod alpha;
mod diagnostics;
mod model;
mod oracle;
mod plan;
mod report;
mod terms;

pub use alpha::{find_alpha0, find_ratio, AlphaSearch, Grid, InverseNorm};
pub use diagnostics::{
    amplification_factor, dmp_norm, dmp_threshold, dmp_threshold_oracle, AmplificationNorm,
};
pub use model::{ModelKind, RecurrenceModel};
pub use oracle::{exact_heat_term, exact_inviscid_term, exact_viscous_term, INVISCID_MAX_ORDER};
pub use plan::{PlanMode, StabilizationPlan};
pub use report::{error_report, fit_slope, two_regime_fit, ErrorNorm, ErrorReport, TwoRegime};
pub use terms::{compute_terms, SeriesTerms, TermEngine};

use quad_linalg::LinalgError;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SeriesError {
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error("term {k} is not finite")]
    NonFinite { k: usize },
    #[error("closed form only available up to order {max}, requested {k}")]
    OrderTooHigh { k: usize, max: usize },
    #[error("fewer than 3 finite points to fit")]
    DegenerateFit,
    #[error("heat amplification undefined without diffusion")]
    NoDiffusion,
    #[error("length mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
}
