//! Finite element toolkit for advection-dominated advection-diffusion-reaction
//! problems on the unit square.
//!
//! The crate provides:
//!
//! - structured triangulations of `(0,1)²` ([`mesh`]),
//! - P1/P2 Lagrange spaces, quadrature, and global assembly ([`fem`]),
//! - CSR storage with CG/BiCGStab solves ([`sparse`]),
//! - classical residual-based stabilization terms ([`stab`]),
//! - the evolve-filter-relax algorithm with a deconvolution-based
//!   indicator function ([`efr`]),
//! - a backward Euler time-stepping driver ([`simulation`]),
//! - the manufactured-solution benchmark with exact error norms
//!   ([`benchmark`]).
//!
//! All numerics are generic over the scalar type through [`scalar::Real`];
//! the `*64` aliases below fix `f64`, which is what the benchmark harness
//! uses.

pub mod benchmark;
pub mod efr;
mod error;
pub mod fem;
pub mod mesh;
pub mod scalar;
pub mod simulation;
pub mod sparse;
pub mod stab;

pub use error::{EfrStage, Error, Result};
pub use scalar::Real;

/// Structured triangulation over `f64`.
pub type Mesh64 = mesh::StructuredTriMesh<f64>;
/// P1/P2 Lagrange space over `f64`.
pub type Space64 = fem::FESpace<f64>;
/// Coefficient vector over `f64`.
pub type Field64 = fem::FEField<f64>;
/// CSR matrix over `f64`.
pub type Csr64 = sparse::CsrMatrix<f64>;

/// Structured triangulation over `f32`.
pub type Mesh32 = mesh::StructuredTriMesh<f32>;
/// P1/P2 Lagrange space over `f32`.
pub type Space32 = fem::FESpace<f32>;
/// Coefficient vector over `f32`.
pub type Field32 = fem::FEField<f32>;
/// CSR matrix over `f32`.
pub type Csr32 = sparse::CsrMatrix<f32>;
