//! Fell bundles over finite groups: concrete gradings, formula-defined
//! bundles, the standard constructions and isomorphism checks.

mod abstract_bundle;
mod action;
mod constructions;
mod graded;
mod iso;
mod multiplier;

use thiserror::Error;

use crate::group::GroupError;
use crate::matrix::MatrixError;

pub use abstract_bundle::{AbstractBundle, Concretization};
pub use action::{semidirect_bundle, twisted_class, twisted_semidirect_bundle, TwistedAction};
pub use constructions::{direct_sum, pullback, pullback_coefficient, pullback_element, restrict, trivial_bundle};
pub use graded::{Axiom, AxiomReport, GradedBundle, Violation};
pub use iso::{isomorphic, verify_bundle_isomorphism, IsoReport};
pub use multiplier::{canonical_multiplier_family, orbit_representative, quotient_bundle, regular_family, MultiplierFamily};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum BundleError {
    #[error("bundle is graded over a different group")]
    GroupMismatch,
    #[error("not a *-algebra: {0}")]
    NotAnAlgebra(String),
    #[error("invalid action: {0}")]
    InvalidAction(String),
    #[error("invalid twist: {0}")]
    InvalidTwist(String),
    #[error("element set is not a subgroup")]
    NotASubgroup,
    #[error("unit fiber has no unit")]
    NonUnitalUnitFiber,
    #[error("invalid multiplier family: {0}")]
    InvalidMultiplierFamily(String),
    #[error("functional is not faithful on the section space")]
    DegenerateFunctional,
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error(transparent)]
    Matrix(#[from] MatrixError),
    #[error(transparent)]
    Group(#[from] GroupError),
}
