//! One-dimensional Lagrange finite elements on uniform meshes.
//!
//! Assembles the mass matrix M, stiffness matrix K and the convection tensor
//! D_{ijl} = ∫ φⁱ φʲ_x φˡ, with helpers for lumping and homogeneous Dirichlet
//! boundary handling.

mod assembly;
mod basis;
mod space;

pub use assembly::{
    assemble, dirichlet_identity, lump_mass, reduce_dirichlet, BoundaryTreatment, ConvectionTensor,
    LumpKind, Operators,
};
pub use basis::LagrangeBasis;
pub use space::{build_space, FemSpace, Mesh1D, MAX_DEGREE};

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum FemError {
    #[error("polynomial degree {0} outside 1..={MAX_DEGREE}")]
    BadDegree(usize),
    #[error("invalid mesh: {reason}")]
    BadMesh { reason: String },
}
