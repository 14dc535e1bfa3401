use std::sync::Arc;

use crate::bundle::GradedBundle;
use crate::group::{left_regular, right_regular, FiniteGroup};
use crate::matrix::{eigen::rank, wedderburn_block_count, Matrix, MatrixSubspace};
use crate::scalar::Real;
use crate::sectional::{SectionAlgebra, SectionalError};

/// `A ×_δ G`, realized in `M_n ⊗ M_|G|` by `(a_s, t) ↦ a_s ⊗ E_{st,t}`.
#[derive(Clone, Debug)]
pub struct CrossedProduct<T> {
    base: GradedBundle<T>,
    algebra: MatrixSubspace<T>,
}

/// Largest residuals of the crossed-product identities, plus the dimension
/// law and faithfulness of `j_A`.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct CrossedReport {
    pub groupoid_product: f64,
    pub groupoid_adjoint: f64,
    pub isometry: f64,
    pub covariance: f64,
    pub dual_action: f64,
    pub dimension_law: bool,
    pub faithful: bool,
}

impl CrossedReport {
    pub fn holds(&self, tol: f64) -> bool {
        self.dimension_law && self.faithful && self.max_residual() <= tol
    }

    pub fn max_residual(&self) -> f64 {
        [self.groupoid_product, self.groupoid_adjoint, self.isometry, self.covariance, self.dual_action]
            .into_iter()
            .fold(0.0, f64::max)
    }
}

fn matrix_unit<T: Real>(order: usize, i: usize, j: usize) -> Matrix<T> {
    Matrix::unit(order, i, j)
}

impl<T: Real> CrossedProduct<T> {
    pub fn new(a: &GradedBundle<T>, tol: T) -> Result<Self, SectionalError> {
        let report = a.verify(tol);
        if !report.passed() {
            let names: Vec<&str> = report.violations.iter().map(|v| v.axiom.name()).collect();
            return Err(SectionalError::AxiomViolation(names.join(", ")));
        }
        let g = a.group();
        let mut gens = Vec::with_capacity(g.order() * a.total_dim());
        for s in g.elements() {
            for t in g.elements() {
                for x in a.fiber(s).basis() {
                    gens.push(x.kron(&matrix_unit(g.order(), g.mul(s, t), t)));
                }
            }
        }
        // generators are orthonormal: distinct (s, t) occupy distinct matrix-unit slots
        let algebra = MatrixSubspace::from_orthonormal(a.ambient_dim() * g.order(), gens, tol)?;
        Ok(CrossedProduct { base: a.clone(), algebra })
    }

    pub fn base(&self) -> &GradedBundle<T> {
        &self.base
    }

    pub fn group(&self) -> &Arc<FiniteGroup> {
        self.base.group()
    }

    pub fn algebra(&self) -> &MatrixSubspace<T> {
        &self.algebra
    }

    pub fn dim(&self) -> usize {
        self.algebra.dim()
    }

    pub fn ambient_dim(&self) -> usize {
        self.algebra.ambient_dim()
    }

    /// `(a_s, t) ↦ a_s ⊗ E_{st,t}`.
    pub fn embed(&self, s: usize, t: usize, a: &Matrix<T>) -> Matrix<T> {
        let g = self.group();
        a.kron(&matrix_unit(g.order(), g.mul(s, t), t))
    }

    /// `j_A(a_s) = a_s ⊗ λ_s = Σ_t a_s ⊗ E_{st,t}`.
    pub fn j_a(&self, s: usize, a: &Matrix<T>) -> Matrix<T> {
        a.kron(&left_regular(self.group(), s))
    }

    /// `j_G(χ_t) = 1 ⊗ E_{t,t}`.
    pub fn j_g(&self, t: usize) -> Matrix<T> {
        Matrix::identity(self.base.ambient_dim()).kron(&matrix_unit(self.group().order(), t, t))
    }

    /// `1 ⊗ ρ_r`, implementing the dual action.
    pub fn dual_unitary(&self, r: usize) -> Matrix<T> {
        Matrix::identity(self.base.ambient_dim()).kron(&right_regular(self.group(), r))
    }

    /// `δ̂_r(x) = (1 ⊗ ρ_r) x (1 ⊗ ρ_r)*`, sending `(a_s, t)` to `(a_s, tr⁻¹)`.
    pub fn dual_action(&self, r: usize, x: &Matrix<T>) -> Matrix<T> {
        let u = self.dual_unitary(r);
        &(&u * x) * &u.adjoint()
    }

    pub fn block_count(&self, tol: T) -> Result<usize, SectionalError> {
        Ok(wedderburn_block_count(&self.algebra, tol)?)
    }

    pub fn verify(&self, tol: T) -> CrossedReport {
        let g = self.group().clone();
        let a = &self.base;
        let rel = |x: T, scale: T| (x / scale.max(T::one())).to_f64().unwrap_or(f64::INFINITY);
        let mut r = CrossedReport::default();
        let expected_dim = g.order() * a.total_dim();
        r.dimension_law = self.dim() == expected_dim;
        for s in g.elements() {
            for x in a.fiber(s).basis() {
                let norm = x.op_norm();
                let jx = self.j_a(s, x);
                for t in g.elements() {
                    let ex = self.embed(s, t, x);
                    r.isometry = r.isometry.max(rel((ex.op_norm() - norm).abs(), norm));
                    let adj = self.embed(g.inv(s), g.mul(s, t), &x.adjoint());
                    r.groupoid_adjoint = r.groupoid_adjoint.max(rel((&ex.adjoint() - &adj).hs_norm(), norm));
                    let cov = &(&jx * &self.j_g(t)) - &(&self.j_g(g.mul(s, t)) * &jx);
                    r.covariance = r.covariance.max(rel(cov.hs_norm(), norm));
                    for u in g.elements() {
                        let moved = self.dual_action(u, &ex);
                        let target = self.embed(s, g.mul(t, g.inv(u)), x);
                        r.dual_action = r.dual_action.max(rel((&moved - &target).hs_norm(), norm));
                        for y in a.fiber(u).basis() {
                            for v in g.elements() {
                                let prod = &ex * &self.embed(u, v, y);
                                let expected = if t == g.mul(u, v) {
                                    self.embed(g.mul(s, u), v, &(x * y))
                                } else {
                                    Matrix::zeros(prod.rows(), prod.cols())
                                };
                                r.groupoid_product = r.groupoid_product.max(rel((&prod - &expected).hs_norm(), norm));
                            }
                        }
                    }
                }
            }
        }
        for p in g.elements() {
            for q in g.elements() {
                let lhs = &self.dual_unitary(p) * &self.dual_unitary(q);
                r.dual_action = r.dual_action.max(rel((&lhs - &self.dual_unitary(g.mul(p, q))).hs_norm(), T::one()));
            }
        }
        let images: Vec<Matrix<T>> = g
            .elements()
            .flat_map(|s| a.fiber(s).basis().iter().map(move |x| (s, x)))
            .map(|(s, x)| self.j_a(s, x))
            .collect();
        let k = images.len();
        let gram = Matrix::from_fn(k, k, |i, j| images[i].hs_inner(&images[j]));
        r.faithful = k == 0 || rank(&gram, tol) == a.total_dim();
        r
    }
}

/// Checks that `(π, μ)` is a covariant pair for the grading of `section`:
/// `π` a *-homomorphism given on fiber elements, `μ_t` orthogonal projections
/// summing to 1, and `π(a_s) μ_t = μ_{st} π(a_s)`. When covariance holds the
/// integrated form `(a_s, t) ↦ π(a_s) μ_t` is also checked to be a
/// *-homomorphism of the crossed product.
pub fn verify_covariant_pair<T: Real>(
    section: &SectionAlgebra<T>,
    pi: impl Fn(usize, &Matrix<T>) -> Matrix<T>,
    mu: &[Matrix<T>],
    tol: T,
) -> Result<bool, SectionalError> {
    let bundle = section.bundle();
    let g = bundle.group();
    if mu.len() != g.order() {
        return Err(SectionalError::ProjectionsNotResolving);
    }
    let m = mu[0].rows();
    let close = |a: &Matrix<T>, b: &Matrix<T>| (a - b).hs_norm() <= tol.sqrt() * a.hs_norm().max(b.hs_norm()).max(T::one());
    let mut sum = Matrix::zeros(m, m);
    for (i, p) in mu.iter().enumerate() {
        if p.rows() != m || !close(&(p * p), p) || !close(&p.adjoint(), p) {
            return Err(SectionalError::ProjectionsNotResolving);
        }
        for q in &mu[i + 1..] {
            if (p * q).hs_norm() > tol.sqrt() {
                return Err(SectionalError::ProjectionsNotResolving);
            }
        }
        sum = &sum + p;
    }
    if !close(&sum, &Matrix::identity(m)) {
        return Err(SectionalError::ProjectionsNotResolving);
    }
    let mut nonzero = false;
    for s in g.elements() {
        for x in bundle.fiber(s).basis() {
            let px = pi(s, x);
            if px.rows() != m {
                return Err(SectionalError::NotAHomomorphism(format!("π on A_{s} has the wrong size")));
            }
            nonzero |= px.hs_norm() > tol.sqrt();
            if !close(&pi(g.inv(s), &x.adjoint()), &px.adjoint()) {
                return Err(SectionalError::NotAHomomorphism(format!("π is not *-preserving on A_{s}")));
            }
            for t in g.elements() {
                for y in bundle.fiber(t).basis() {
                    if !close(&pi(g.mul(s, t), &(x * y)), &(&px * &pi(t, y))) {
                        return Err(SectionalError::NotAHomomorphism(format!("π is not multiplicative on A_{s} A_{t}")));
                    }
                }
            }
        }
    }
    if !nonzero {
        return Err(SectionalError::DegenerateRepresentation);
    }
    for s in g.elements() {
        for x in bundle.fiber(s).basis() {
            let px = pi(s, x);
            for t in g.elements() {
                if !close(&(&px * &mu[t]), &(&mu[g.mul(s, t)] * &px)) {
                    return Ok(false);
                }
            }
        }
    }
    // integrated form on generators of the crossed product
    let rho = |s: usize, t: usize, x: &Matrix<T>| &pi(s, x) * &mu[t];
    for s in g.elements() {
        for x in bundle.fiber(s).basis() {
            for t in g.elements() {
                let rx = rho(s, t, x);
                if !close(&rx.adjoint(), &rho(g.inv(s), g.mul(s, t), &x.adjoint())) {
                    return Err(SectionalError::NotAHomomorphism("integrated form is not *-preserving".into()));
                }
                for u in g.elements() {
                    for y in bundle.fiber(u).basis() {
                        for v in g.elements() {
                            let prod = &rx * &rho(u, v, y);
                            let ok = if t == g.mul(u, v) {
                                close(&prod, &rho(g.mul(s, u), v, &(x * y)))
                            } else {
                                prod.hs_norm() <= tol.sqrt()
                            };
                            if !ok {
                                return Err(SectionalError::NotAHomomorphism("integrated form is not multiplicative".into()));
                            }
                        }
                    }
                }
            }
        }
    }
    Ok(true)
}
