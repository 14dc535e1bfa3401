//! Fell bundles over finite groups, realized as gradings of matrix algebras.

pub mod bundle;
pub mod catalog;
pub mod duality;
pub mod ep;
pub mod group;
pub mod imprimitivity;
pub mod matrix;
pub mod scalar;
pub mod sectional;

pub use group::{FiniteGroup, GroupError, Quotient, Subgroup};
pub use matrix::{Matrix, MatrixError, MatrixSubspace};
pub use scalar::{cx, Cx, Real};

pub type CMatrix = Matrix<f64>;
pub type Subspace = MatrixSubspace<f64>;
pub type CMatrix32 = Matrix<f32>;
pub type Subspace32 = MatrixSubspace<f32>;

pub use bundle::{AbstractBundle, BundleError, GradedBundle, MultiplierFamily, TwistedAction};

pub type Bundle = GradedBundle<f64>;
pub type Bundle32 = GradedBundle<f32>;

pub use duality::{DualityError, GSetAction, ObstructionReport};
pub use ep::{EpError, EpWitness};
pub use imprimitivity::{Imprimitivity, ImprimitivityError};
pub use sectional::{CrossedProduct, SectionAlgebra, SectionalError};
