use num_traits::{One, Zero};

use crate::matrix::eigen::{least_squares, null_space};
use crate::matrix::{Matrix, MatrixError};
use crate::scalar::{Cx, Real};

/// A linear span of `n x n` matrices held as a Hilbert–Schmidt orthonormal basis.
#[derive(Clone, Debug)]
pub struct MatrixSubspace<T> {
    ambient: usize,
    basis: Vec<Matrix<T>>,
    // indices of nonzero entries of each basis element
    support: Vec<Vec<usize>>,
}

fn support_of<T: Real>(m: &Matrix<T>) -> Vec<usize> {
    m.as_slice()
        .iter()
        .enumerate()
        .filter(|(_, x)| !x.is_zero())
        .map(|(i, _)| i)
        .collect()
}

impl<T: Real> MatrixSubspace<T> {
    pub fn zero(ambient: usize) -> Self {
        MatrixSubspace {
            ambient,
            basis: Vec::new(),
            support: Vec::new(),
        }
    }

    /// Gram–Schmidt (with one reorthogonalization pass) over `mats`. Inputs
    /// whose residual falls below `tol` times the largest input norm are dropped.
    pub fn orthonormalize(ambient: usize, mats: &[Matrix<T>], tol: T) -> Result<Self, MatrixError> {
        for m in mats {
            if m.rows() != ambient || m.cols() != ambient {
                return Err(MatrixError::DimensionMismatch {
                    expected: ambient,
                    found: if m.rows() != ambient { m.rows() } else { m.cols() },
                });
            }
            if !m.is_finite() {
                return Err(MatrixError::NonFinite);
            }
        }
        let scale = mats.iter().map(Matrix::hs_norm).fold(T::zero(), T::max);
        let mut out = Self::zero(ambient);
        if scale == T::zero() {
            return Ok(out);
        }
        for m in mats {
            let mut r = m.clone();
            for _ in 0..2 {
                for (b, supp) in out.basis.iter().zip(&out.support) {
                    let c = sparse_inner(b, supp, &r);
                    r.add_scaled(-c, b);
                }
            }
            let norm = r.hs_norm();
            if norm > tol * scale {
                let b = r.scale_real(T::one() / norm);
                out.support.push(support_of(&b));
                out.basis.push(b);
            }
        }
        Ok(out)
    }

    /// Wraps an already orthonormal list, checking orthonormality to `tol`.
    pub fn from_orthonormal(ambient: usize, basis: Vec<Matrix<T>>, tol: T) -> Result<Self, MatrixError> {
        for (i, a) in basis.iter().enumerate() {
            if a.rows() != ambient || a.cols() != ambient {
                return Err(MatrixError::DimensionMismatch { expected: ambient, found: a.rows() });
            }
            for (j, b) in basis.iter().enumerate().skip(i) {
                let target = if i == j { Cx::one() } else { Cx::zero() };
                if (a.hs_inner(b) - target).norm() > tol {
                    return Self::orthonormalize(ambient, &basis, tol);
                }
            }
        }
        let support = basis.iter().map(support_of).collect();
        Ok(MatrixSubspace { ambient, basis, support })
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn is_zero(&self) -> bool {
        self.basis.is_empty()
    }

    pub fn basis(&self) -> &[Matrix<T>] {
        &self.basis
    }

    fn check_dim(&self, m: &Matrix<T>) -> Result<(), MatrixError> {
        if m.rows() != self.ambient || m.cols() != self.ambient {
            return Err(MatrixError::DimensionMismatch { expected: self.ambient, found: m.rows() });
        }
        Ok(())
    }

    /// Coordinates of the orthogonal projection of `m` in the basis.
    pub fn coords(&self, m: &Matrix<T>) -> Vec<Cx<T>> {
        self.basis
            .iter()
            .zip(&self.support)
            .map(|(b, s)| sparse_inner(b, s, m))
            .collect()
    }

    /// Matrix with the given basis coordinates.
    pub fn combine(&self, coords: &[Cx<T>]) -> Matrix<T> {
        let mut out = Matrix::zeros(self.ambient, self.ambient);
        for (c, b) in coords.iter().zip(&self.basis) {
            out.add_scaled(*c, b);
        }
        out
    }

    pub fn project(&self, m: &Matrix<T>) -> Matrix<T> {
        self.combine(&self.coords(m))
    }

    /// Hilbert–Schmidt distance from `m` to the subspace.
    pub fn residual(&self, m: &Matrix<T>) -> T {
        (m - &self.project(m)).hs_norm()
    }

    /// `true` iff `‖m − proj(m)‖ ≤ tol · max(1, ‖m‖)`.
    pub fn contains(&self, m: &Matrix<T>, tol: T) -> Result<bool, MatrixError> {
        self.check_dim(m)?;
        Ok(self.residual(m) <= tol * m.hs_norm().max(T::one()))
    }

    /// Largest relative residual of `other`'s basis against `self`.
    pub fn excess(&self, other: &MatrixSubspace<T>) -> T {
        other
            .basis
            .iter()
            .map(|b| self.residual(b))
            .fold(T::zero(), T::max)
    }

    pub fn contains_subspace(&self, other: &MatrixSubspace<T>, tol: T) -> bool {
        self.ambient == other.ambient && self.excess(other) <= tol
    }

    pub fn same_span(&self, other: &MatrixSubspace<T>, tol: T) -> bool {
        self.dim() == other.dim() && self.contains_subspace(other, tol)
    }

    /// Span of all pairwise products of basis elements.
    pub fn product_span(&self, other: &MatrixSubspace<T>, tol: T) -> Result<Self, MatrixError> {
        if self.ambient != other.ambient {
            return Err(MatrixError::DimensionMismatch { expected: self.ambient, found: other.ambient });
        }
        let prods: Vec<Matrix<T>> = self
            .basis
            .iter()
            .flat_map(|a| other.basis.iter().map(move |b| a * b))
            .collect();
        Self::orthonormalize(self.ambient, &prods, tol)
    }

    /// `{m^* : m ∈ self}`; the adjoint of an orthonormal basis stays orthonormal.
    pub fn adjoint_span(&self) -> Self {
        let basis: Vec<Matrix<T>> = self.basis.iter().map(Matrix::adjoint).collect();
        let support = basis.iter().map(support_of).collect();
        MatrixSubspace { ambient: self.ambient, basis, support }
    }

    pub fn join(&self, other: &MatrixSubspace<T>, tol: T) -> Result<Self, MatrixError> {
        let all: Vec<Matrix<T>> = self.basis.iter().chain(&other.basis).cloned().collect();
        Self::orthonormalize(self.ambient, &all, tol)
    }

    pub fn intersect(&self, other: &MatrixSubspace<T>, tol: T) -> Result<Self, MatrixError> {
        if self.ambient != other.ambient {
            return Err(MatrixError::DimensionMismatch { expected: self.ambient, found: other.ambient });
        }
        let (p, q) = (self.dim(), other.dim());
        if p == 0 || q == 0 {
            return Ok(Self::zero(self.ambient));
        }
        // x in both iff x = Σ a_i s_i = Σ b_j o_j: null space of [S | -O] in coordinates of the join
        let join = self.join(other, tol)?;
        let n = join.dim();
        let mut sys = Matrix::zeros(n, p + q);
        for (j, b) in self.basis.iter().enumerate() {
            for (i, c) in join.coords(b).into_iter().enumerate() {
                sys[(i, j)] = c;
            }
        }
        for (j, b) in other.basis.iter().enumerate() {
            for (i, c) in join.coords(b).into_iter().enumerate() {
                sys[(i, p + j)] = -c;
            }
        }
        let mats: Vec<Matrix<T>> = null_space(&sys, tol)
            .into_iter()
            .map(|v| self.combine(&v[..p]))
            .collect();
        Self::orthonormalize(self.ambient, &mats, tol)
    }

    /// Coordinates of `m` with respect to an arbitrary (not necessarily
    /// orthonormal) list, by least squares.
    pub fn solve_in(list: &[Matrix<T>], m: &Matrix<T>, tol: T) -> Vec<Cx<T>> {
        let rows = m.rows() * m.cols();
        let mut a = Matrix::zeros(rows, list.len());
        for (j, l) in list.iter().enumerate() {
            for (i, &x) in l.as_slice().iter().enumerate() {
                a[(i, j)] = x;
            }
        }
        least_squares(&a, m.as_slice(), tol)
    }
}

fn sparse_inner<T: Real>(b: &Matrix<T>, support: &[usize], m: &Matrix<T>) -> Cx<T> {
    let (bs, ms) = (b.as_slice(), m.as_slice());
    support.iter().map(|&i| bs[i].conj() * ms[i]).sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::{pauli_x, pauli_z};
    use proptest::prelude::*;

    const TOL: f64 = 1e-9;

    fn e(n: usize, i: usize, j: usize) -> Matrix<f64> {
        Matrix::unit(n, i, j)
    }

    #[test]
    fn orthonormalize_examples() {
        let id = Matrix::<f64>::identity(2);
        let s = MatrixSubspace::orthonormalize(2, &[id.clone(), id.scale_real(2.0)], TOL).unwrap();
        assert_eq!(s.dim(), 1);
        let s = MatrixSubspace::orthonormalize(2, &[id.clone(), pauli_x()], TOL).unwrap();
        assert_eq!(s.dim(), 2);
        let g = s.basis()[0].hs_inner(&s.basis()[1]);
        assert!(g.norm() < 1e-14);
        let s = MatrixSubspace::<f64>::orthonormalize(2, &[], TOL).unwrap();
        assert_eq!(s.dim(), 0);
    }

    #[test]
    fn orthonormalize_rejects_wrong_shape() {
        let err = MatrixSubspace::orthonormalize(2, &[Matrix::<f64>::identity(3)], TOL).unwrap_err();
        assert!(matches!(err, MatrixError::DimensionMismatch { .. }));
    }

    #[test]
    fn contains_examples() {
        let id = Matrix::<f64>::identity(2);
        let s = MatrixSubspace::orthonormalize(2, &[id.clone()], TOL).unwrap();
        assert!(s.contains(&id.scale_real(3.0), TOL).unwrap());
        assert!(!s.contains(&pauli_x(), TOL).unwrap());
        assert!(s.contains(&Matrix::zeros(2, 2), TOL).unwrap());
        assert!(s.contains(&Matrix::zeros(3, 3), TOL).is_err());
    }

    #[test]
    fn product_span_examples() {
        let x = MatrixSubspace::orthonormalize(2, &[pauli_x()], TOL).unwrap();
        let xx = x.product_span(&x, TOL).unwrap();
        assert_eq!(xx.dim(), 1);
        assert!(xx.contains(&Matrix::identity(2), TOL).unwrap());
        assert_eq!(x.product_span(&MatrixSubspace::zero(2), TOL).unwrap().dim(), 0);
        let a = MatrixSubspace::orthonormalize(2, &[e(2, 0, 1)], TOL).unwrap();
        let b = MatrixSubspace::orthonormalize(2, &[e(2, 1, 0)], TOL).unwrap();
        let ab = a.product_span(&b, TOL).unwrap();
        assert!(ab.same_span(&MatrixSubspace::orthonormalize(2, &[e(2, 0, 0)], TOL).unwrap(), TOL));
    }

    #[test]
    fn product_span_is_associative() {
        let a = MatrixSubspace::orthonormalize(2, &[pauli_x(), e(2, 0, 1)], TOL).unwrap();
        let b = MatrixSubspace::orthonormalize(2, &[pauli_z()], TOL).unwrap();
        let c = MatrixSubspace::orthonormalize(2, &[e(2, 1, 1)], TOL).unwrap();
        let left = a.product_span(&b, TOL).unwrap().product_span(&c, TOL).unwrap();
        let right = a.product_span(&b.product_span(&c, TOL).unwrap(), TOL).unwrap();
        assert!(left.same_span(&right, 1e-9));
    }

    #[test]
    fn intersection_and_join() {
        let a = MatrixSubspace::orthonormalize(2, &[e(2, 0, 0), e(2, 0, 1)], TOL).unwrap();
        let b = MatrixSubspace::orthonormalize(2, &[e(2, 0, 1), e(2, 1, 1)], TOL).unwrap();
        let i = a.intersect(&b, TOL).unwrap();
        assert_eq!(i.dim(), 1);
        assert!(i.contains(&e(2, 0, 1), TOL).unwrap());
        assert_eq!(a.join(&b, TOL).unwrap().dim(), 3);
    }

    fn matrix_strategy() -> impl Strategy<Value = Matrix<f64>> {
        proptest::collection::vec((-2.0f64..2.0, -2.0f64..2.0), 9).prop_map(|v| {
            Matrix::from_vec(3, 3, v.into_iter().map(|(re, im)| Cx::new(re, im)).collect())
        })
    }

    proptest! {
        #[test]
        fn orthonormalized_span_contains_inputs(mats in proptest::collection::vec(matrix_strategy(), 0..5)) {
            let s = MatrixSubspace::orthonormalize(3, &mats, TOL).unwrap();
            for m in &mats {
                prop_assert!(s.contains(m, 1e-9).unwrap());
            }
        }

        #[test]
        fn cstar_identity(a in matrix_strategy()) {
            let lhs = (&a.adjoint() * &a).op_norm();
            let rhs = a.op_norm().powi(2);
            prop_assert!((lhs - rhs).abs() <= 1e-8 * rhs.max(1.0));
        }

        #[test]
        fn gram_matrices_are_psd(a in matrix_strategy()) {
            prop_assert!((&a.adjoint() * &a).is_psd(1e-9));
        }
    }
}
