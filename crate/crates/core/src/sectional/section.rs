use num_complex::Complex;
use num_traits::Zero;

use crate::bundle::GradedBundle;
use crate::matrix::eigen::hermitian_eigen;
use crate::matrix::{wedderburn_block_count, Matrix, MatrixSubspace};
use crate::scalar::{Cx, Real};
use crate::sectional::SectionalError;

/// The algebra `Γ(𝒜) = ⊕_s A_s` of a graded bundle together with its
/// grading projections `δ_s`.
#[derive(Clone, Debug)]
pub struct SectionAlgebra<T> {
    bundle: GradedBundle<T>,
    total: MatrixSubspace<T>,
    // fiber bases side by side; fibers need not be mutually orthogonal
    combined: Vec<Matrix<T>>,
    offsets: Vec<usize>,
    gram_inverse: Matrix<T>,
    tol: T,
}

impl<T: Real> SectionAlgebra<T> {
    pub fn new(bundle: &GradedBundle<T>, tol: T) -> Result<Self, SectionalError> {
        let report = bundle.verify(tol);
        if !report.passed() {
            let names: Vec<&str> = report.violations.iter().map(|v| v.axiom.name()).collect();
            return Err(SectionalError::AxiomViolation(names.join(", ")));
        }
        let mut combined = Vec::with_capacity(bundle.total_dim());
        let mut offsets = Vec::with_capacity(bundle.group().order());
        for f in bundle.fibers() {
            offsets.push(combined.len());
            combined.extend(f.basis().iter().cloned());
        }
        let k = combined.len();
        let gram = Matrix::from_fn(k, k, |i, j| combined[i].hs_inner(&combined[j]));
        let eig = hermitian_eigen(&gram);
        let mut gram_inverse = Matrix::zeros(k, k);
        for j in 0..k {
            let v = eig.vectors.column(j);
            let w = Complex::new(T::one() / eig.values[j], T::zero());
            gram_inverse.add_scaled(w, &Matrix::from_fn(k, k, |a, b| v[a] * v[b].conj()));
        }
        let total = MatrixSubspace::orthonormalize(bundle.ambient_dim(), &combined, tol)?;
        Ok(SectionAlgebra { bundle: bundle.clone(), total, combined, offsets, gram_inverse, tol })
    }

    pub fn bundle(&self) -> &GradedBundle<T> {
        &self.bundle
    }

    pub fn total(&self) -> &MatrixSubspace<T> {
        &self.total
    }

    pub fn dim(&self) -> usize {
        self.combined.len()
    }

    /// Coordinates of `a` in the fiber bases, one vector per group element.
    pub fn decompose(&self, a: &Matrix<T>) -> Result<Vec<Vec<Cx<T>>>, SectionalError> {
        if !self.total.contains(a, self.tol.sqrt())? {
            return Err(SectionalError::NotInAlgebra);
        }
        let rhs: Vec<Cx<T>> = self.combined.iter().map(|b| b.hs_inner(a)).collect();
        let c = self.gram_inverse.apply(&rhs);
        let dims = self.bundle.fiber_dims();
        Ok(self.offsets.iter().zip(&dims).map(|(&o, &d)| c[o..o + d].to_vec()).collect())
    }

    /// `δ_s(a)`, the component of `a` in `A_s`.
    pub fn component(&self, s: usize, a: &Matrix<T>) -> Result<Matrix<T>, SectionalError> {
        let parts = self.decompose(a)?;
        Ok(self.bundle.fiber(s).combine(&parts[s]))
    }

    /// The conditional expectation `E = δ_e` onto the unit fiber.
    pub fn conditional_expectation(&self, a: &Matrix<T>) -> Result<Matrix<T>, SectionalError> {
        self.component(0, a)
    }

    /// Matrix with the given fiber coordinates.
    pub fn compose(&self, parts: &[Vec<Cx<T>>]) -> Matrix<T> {
        let n = self.bundle.ambient_dim();
        let mut m = Matrix::zeros(n, n);
        for (s, c) in parts.iter().enumerate() {
            for (x, b) in c.iter().zip(self.bundle.fiber(s).basis()) {
                if !x.is_zero() {
                    m.add_scaled(*x, b);
                }
            }
        }
        m
    }

    pub fn block_count(&self) -> Result<usize, SectionalError> {
        Ok(wedderburn_block_count(&self.total, self.tol)?)
    }
}
