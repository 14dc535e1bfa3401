//! Section algebras of graded bundles and the crossed product by the
//! grading coaction.

mod crossed;
mod section;

use thiserror::Error;

use crate::matrix::MatrixError;

pub use crossed::{verify_covariant_pair, CrossedProduct, CrossedReport};
pub use section::SectionAlgebra;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SectionalError {
    #[error("bundle fails the Fell axioms: {0}")]
    AxiomViolation(String),
    #[error("matrix is not in the section algebra")]
    NotInAlgebra,
    #[error("map is not a *-homomorphism: {0}")]
    NotAHomomorphism(String),
    #[error("projections are not orthogonal with sum 1")]
    ProjectionsNotResolving,
    #[error("representation is degenerate")]
    DegenerateRepresentation,
    #[error(transparent)]
    Matrix(#[from] MatrixError),
}
