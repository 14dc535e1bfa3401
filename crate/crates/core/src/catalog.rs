//! Small example bundles and actions used throughout the tests and the CLI.

use std::sync::Arc;

use crate::bundle::{trivial_bundle, twisted_semidirect_bundle, BundleError, Concretization, GradedBundle, TwistedAction};
use crate::duality::GSetAction;
use crate::group::{permutations, FiniteGroup, Quotient};
use crate::matrix::{pauli_x, Matrix, MatrixSubspace};
use crate::scalar::{cx, Real};

/// `ℂ·1` inside `M_n`.
pub fn scalar_algebra<T: Real>(n: usize, tol: T) -> Result<MatrixSubspace<T>, BundleError> {
    Ok(MatrixSubspace::orthonormalize(n, &[Matrix::identity(n)], tol)?)
}

/// All of `M_n`.
pub fn full_matrix_algebra<T: Real>(n: usize, tol: T) -> Result<MatrixSubspace<T>, BundleError> {
    let units: Vec<Matrix<T>> = (0..n * n).map(|k| Matrix::unit(n, k / n, k % n)).collect();
    Ok(MatrixSubspace::orthonormalize(n, &units, tol)?)
}

/// `M_2` graded by `ℤ/2`: `D_0 = ℂ1`, `D_1 = ℂX`.
pub fn pauli_z2<T: Real>(tol: T) -> Result<GradedBundle<T>, BundleError> {
    let g = Arc::new(FiniteGroup::cyclic(2)?);
    pauli_over(g, tol)
}

fn pauli_over<T: Real>(g: Arc<FiniteGroup>, tol: T) -> Result<GradedBundle<T>, BundleError> {
    GradedBundle::from_spanning(g, 2, &[vec![Matrix::identity(2)], vec![pauli_x()]], tol)
}

/// The Pauli bundle over `ℤ/4 / {0, 2}`.
pub fn pauli_quotient<T: Real>(tol: T) -> Result<(Quotient, GradedBundle<T>), BundleError> {
    let q = Quotient::new(Arc::new(FiniteGroup::cyclic(4)?), &[0, 2])?;
    let d = pauli_over(q.quotient_group().clone(), tol)?;
    Ok((q, d))
}

/// `ℂ` in every fiber over `group`.
pub fn trivial_scalar_bundle<T: Real>(group: Arc<FiniteGroup>, tol: T) -> Result<GradedBundle<T>, BundleError> {
    trivial_bundle(group, &scalar_algebra(1, tol)?, tol)
}

/// `(ℂ, ℤ/4, {0, 2})` with trivial `α` and `τ(2) = sign`.
pub fn twisted_z4<T: Real>(sign: f64, tol: T) -> Result<TwistedAction<T>, BundleError> {
    let q = Quotient::new(Arc::new(FiniteGroup::cyclic(4)?), &[0, 2])?;
    let one = Matrix::identity(1);
    let tau = [(0, one.clone()), (2, one.scale(cx(sign, 0.0)))];
    TwistedAction::new(scalar_algebra(1, tol)?, q, |_, b| b.clone(), &tau, tol)
}

/// `ℤ/2` swapping the two points of `ℂ²`.
pub fn swap_action<T: Real>(tol: T) -> Result<TwistedAction<T>, BundleError> {
    GSetAction::translation(Arc::new(FiniteGroup::cyclic(2)?)).function_algebra_action(tol)
}

/// `S₃` acting on `S₃/⟨(0 1)⟩` by left translation.
pub fn s3_coset_action() -> GSetAction {
    let s3 = Arc::new(FiniteGroup::symmetric(3).expect("S3"));
    GSetAction::on_cosets(s3, &[0, 2]).expect("(0 1) generates a subgroup")
}

/// The two-dimensional irreducible unitary representation of `S₃`, in the
/// element order of [`FiniteGroup::symmetric`].
pub fn standard_rep_s3<T: Real>() -> Vec<Matrix<T>> {
    let r2 = 2f64.sqrt();
    let r6 = 6f64.sqrt();
    let v = [[1.0 / r2, 1.0 / r6], [-1.0 / r2, 1.0 / r6], [0.0, -2.0 / r6]];
    permutations(3)
        .iter()
        .map(|p| {
            Matrix::from_fn(2, 2, |i, j| {
                let entry: f64 = (0..3).map(|x| v[p[x]][i] * v[x][j]).sum();
                cx(entry, 0.0)
            })
        })
        .collect()
}

/// `(ℂ, S₃, A₃)` with trivial `α` and `τ ≡ 1`, and its concretized twisted
/// semidirect product bundle over `S₃/A₃`.
pub fn s3_scalar_example<T: Real>(tol: T) -> Result<(TwistedAction<T>, Concretization<T>), BundleError> {
    let q = Quotient::new(Arc::new(FiniteGroup::symmetric(3)?), &[0, 3, 4])?;
    let tau: Vec<_> = [0, 3, 4].iter().map(|&n| (n, Matrix::identity(1))).collect();
    let action = TwistedAction::new(scalar_algebra(1, tol)?, q, |_, b| b.clone(), &tau, tol)?;
    let d = twisted_semidirect_bundle(&action).concretize(tol)?;
    Ok((action, d))
}

/// `(M₂, S₃, A₃)` with `α = Ad π` and `τ = π|_{A₃}` for the standard representation `π`.
pub fn s3_matrix_action<T: Real>(tol: T) -> Result<TwistedAction<T>, BundleError> {
    let q = Quotient::new(Arc::new(FiniteGroup::symmetric(3)?), &[0, 3, 4])?;
    let pi = standard_rep_s3::<T>();
    let tau: Vec<_> = [0, 3, 4].iter().map(|&n| (n, pi[n].clone())).collect();
    TwistedAction::inner(full_matrix_algebra(2, tol)?, q, &pi, &tau, tol)
}
