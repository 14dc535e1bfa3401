use std::sync::Arc;

use num_traits::Zero;

use crate::bundle::{BundleError, GradedBundle};
use crate::group::{left_regular, FiniteGroup, Quotient, Subgroup};
use crate::matrix::{algebra_unit, check_star_algebra, Matrix, MatrixSubspace};
use crate::scalar::{Cx, Real};

/// `d ⊗ λ_s` in `M_n ⊗ M_|G|`.
pub fn pullback_element<T: Real>(d: &Matrix<T>, g: &FiniteGroup, s: usize) -> Matrix<T> {
    d.kron(&left_regular(g, s))
}

/// Recovers `d` from `d ⊗ λ_s`: `d_ij` sits at row `i|G| + s`, column `j|G|`.
pub fn pullback_coefficient<T: Real>(x: &Matrix<T>, g: &FiniteGroup, s: usize) -> Matrix<T> {
    let order = g.order();
    let n = x.rows() / order;
    Matrix::from_fn(n, n, |i, j| x[(i * order + s, j * order)])
}

fn tensor_fiber<T: Real>(f: &MatrixSubspace<T>, g: &FiniteGroup, s: usize, tol: T) -> Result<MatrixSubspace<T>, BundleError> {
    let scale = T::one() / T::from_usize(g.order()).expect("small order").sqrt();
    let basis = f
        .basis()
        .iter()
        .map(|d| pullback_element(d, g, s).scale_real(scale))
        .collect();
    Ok(MatrixSubspace::from_orthonormal(f.ambient_dim() * g.order(), basis, tol)?)
}

/// `A ⊗ λ_s` in every fiber, for a unital *-algebra `A`.
pub fn trivial_bundle<T: Real>(group: Arc<FiniteGroup>, unit_algebra: &MatrixSubspace<T>, tol: T) -> Result<GradedBundle<T>, BundleError> {
    check_star_algebra(unit_algebra, tol).map_err(|e| BundleError::NotAnAlgebra(e.to_string()))?;
    algebra_unit(unit_algebra, tol).map_err(|e| BundleError::NotAnAlgebra(e.to_string()))?;
    let fibers = group
        .elements()
        .map(|s| tensor_fiber(unit_algebra, &group, s, tol))
        .collect::<Result<Vec<_>, _>>()?;
    GradedBundle::new(group.clone(), unit_algebra.ambient_dim() * group.order(), fibers)
}

/// Pull-back of a bundle over `G/N` along the quotient map: the fiber over
/// `s` is `D_{sN} ⊗ λ_s`.
pub fn pullback<T: Real>(d: &GradedBundle<T>, q: &Quotient, tol: T) -> Result<GradedBundle<T>, BundleError> {
    if **d.group() != **q.quotient_group() {
        return Err(BundleError::GroupMismatch);
    }
    let g = q.group();
    let fibers = g
        .elements()
        .map(|s| tensor_fiber(d.fiber(q.q(s)), g, s, tol))
        .collect::<Result<Vec<_>, _>>()?;
    GradedBundle::new(g.clone(), d.ambient_dim() * g.order(), fibers)
}

/// Restriction to a subgroup `H`, graded over `H` as a group of its own
/// (element `i` of the result is `members[i]`).
pub fn restrict<T: Real>(a: &GradedBundle<T>, members: &[usize]) -> Result<(GradedBundle<T>, Subgroup), BundleError> {
    let h = Subgroup::new(a.group().clone(), members).map_err(|_| BundleError::NotASubgroup)?;
    let fibers = h.members().iter().map(|&s| a.fiber(s).clone()).collect();
    let bundle = GradedBundle::new(Arc::new(h.as_group()), a.ambient_dim(), fibers)?;
    Ok((bundle, h))
}

/// Block-diagonal sum `A ⊕ B` of two bundles over the same group.
pub fn direct_sum<T: Real>(a: &GradedBundle<T>, b: &GradedBundle<T>, tol: T) -> Result<GradedBundle<T>, BundleError> {
    if **a.group() != **b.group() {
        return Err(BundleError::GroupMismatch);
    }
    let (n, m) = (a.ambient_dim(), b.ambient_dim());
    let place = |x: &Matrix<T>, off: usize| {
        Matrix::from_fn(n + m, n + m, |i, j| {
            let inside = |k: usize| k >= off && k < off + x.rows();
            if inside(i) && inside(j) {
                x[(i - off, j - off)]
            } else {
                Cx::zero()
            }
        })
    };
    let fibers = a
        .group()
        .elements()
        .map(|s| {
            let mut basis: Vec<Matrix<T>> = a.fiber(s).basis().iter().map(|x| place(x, 0)).collect();
            basis.extend(b.fiber(s).basis().iter().map(|x| place(x, n)));
            MatrixSubspace::from_orthonormal(n + m, basis, tol)
        })
        .collect::<Result<Vec<_>, _>>()?;
    GradedBundle::new(a.group().clone(), n + m, fibers)
}
