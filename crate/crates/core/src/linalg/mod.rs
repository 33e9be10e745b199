//! Exact linear algebra: F₂ elimination, Smith normal form over ℤ, integer
//! left kernels, and linear systems over the circle group ℝ/ℤ.

mod f2;
mod matrix;
pub mod rational;
mod ring;
mod snf;
mod torus;

use thiserror::Error;

pub use f2::{f2_solve, F2Matrix, F2Solution, F2Vec};
pub use matrix::{IntMatrix, SparseRow};
pub use rational::Rational;
pub use snf::{left_kernel_basis, smith_normal_form, SnfDecomposition};
pub use torus::{torus_solve, torus_solve_sparse, TorusSolution};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LinalgError {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("internal consistency check failed: {0}")]
    Internal(&'static str),
}
