//! Compressed-sparse-row matrices and the linear solves used by the evolve,
//! filter, and indicator systems.

mod csr;
mod solve;

pub use csr::{CsrMatrix, SparsityPattern};
pub use solve::{solve, SolveMethod, SolveOptions, SolveStats};
