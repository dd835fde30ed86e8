//! Dense and banded linear algebra kernels and Gauss quadrature rules.
//!
//! Dense routines wrap `nalgebra`; the banded path exists so condition-number
//! scans on fine high-order meshes stay tractable.

mod band;
mod dense;
mod error;
mod quadrature;

pub use band::{cond2_band, extreme_singular_values, inv_frobenius_band, BandLu, BandMatrix};
pub use dense::{
    cond2, cond2_auto, cond_frobenius, frobenius, inv_frobenius, op_norm, solve_dense, svd, LuSolver,
    SvdResult, DENSE_LIMIT,
};
pub use error::LinalgError;
pub use quadrature::{gauss_rule, QuadKind, QuadratureRule, MAX_ORDER};

pub type Matrix = nalgebra::DMatrix<f64>;
pub type Vector = nalgebra::DVector<f64>;
