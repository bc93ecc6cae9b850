//! Reference-element bases, quadrature, Lagrange spaces, and global assembly.

pub mod assembly;
pub mod basis;
pub mod quadrature;
mod space;

pub use assembly::{
    apply_dirichlet, assemble_filter_matrix, assemble_load, assemble_operator, evaluate_at,
    BasisAtQuadrature, ConstrainedSystem, ElementGeometry,
};
pub use basis::{reference_basis, BasisEval, MAX_LOCAL_DOFS};
pub use quadrature::{quadrature_rule, QuadratureRule};
pub use space::{interpolate, FEField, FESpace};
