//! Dense complex matrices and linear spans of matrices.

mod algebra;
mod dense;
pub mod eigen;
mod subspace;

use thiserror::Error;

pub use algebra::{
    algebra_unit, center, check_star_algebra, minimal_central_projections,
    wedderburn_block_count, StructureConstants,
};
pub use dense::{pauli_x, pauli_z, Matrix};
pub use subspace::MatrixSubspace;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum MatrixError {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("not a *-algebra: {0}")]
    NotAnAlgebra(String),
    #[error("algebra has no unit of its own")]
    NotUnital,
    #[error("non-finite matrix entry")]
    NonFinite,
}
