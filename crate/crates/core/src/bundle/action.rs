use std::sync::Arc;

use num_traits::{One, Zero};

use crate::bundle::{AbstractBundle, BundleError};
use crate::group::{FiniteGroup, Quotient};
use crate::matrix::{algebra_unit, check_star_algebra, eigen::rank, Matrix, MatrixSubspace};
use crate::scalar::{Cx, Real};

/// A Green-twisted action `(B, G, N, α, τ)`: `α` a `G`-action on the unital
/// *-algebra `B` and `τ` a unitary homomorphism on `N` implementing `α|_N`.
#[derive(Clone, Debug)]
pub struct TwistedAction<T> {
    algebra: MatrixSubspace<T>,
    unit: Matrix<T>,
    quotient: Quotient,
    // alpha[s] acts on coordinates in the orthonormal basis of B
    alpha: Vec<Matrix<T>>,
    // tau[n] for n in N, indexed by group element (unused slots are None)
    tau: Vec<Option<Matrix<T>>>,
}

impl<T: Real> TwistedAction<T> {
    /// `alpha(s, b)` gives the image of `b` under `α_s`; `tau` lists
    /// `(n, τ_n)` for every `n ∈ N`. All invariants are verified.
    pub fn new(
        algebra: MatrixSubspace<T>,
        quotient: Quotient,
        alpha: impl Fn(usize, &Matrix<T>) -> Matrix<T>,
        tau: &[(usize, Matrix<T>)],
        tol: T,
    ) -> Result<Self, BundleError> {
        check_star_algebra(&algebra, tol).map_err(|e| BundleError::NotAnAlgebra(e.to_string()))?;
        let unit = algebra_unit(&algebra, tol).map_err(|e| BundleError::NotAnAlgebra(e.to_string()))?;
        let g = quotient.group().clone();
        let k = algebra.dim();
        let mut maps = Vec::with_capacity(g.order());
        for s in g.elements() {
            let mut m = Matrix::zeros(k, k);
            for (j, b) in algebra.basis().iter().enumerate() {
                let image = alpha(s, b);
                if image.rows() != algebra.ambient_dim() || !algebra.contains(&image, tol.sqrt())? {
                    return Err(BundleError::InvalidAction(format!("α_{s} leaves B")));
                }
                for (i, c) in algebra.coords(&image).into_iter().enumerate() {
                    m[(i, j)] = c;
                }
            }
            maps.push(m);
        }
        let mut slots = vec![None; g.order()];
        for (n, t) in tau {
            if *n >= g.order() || !quotient.normal().contains(*n) {
                return Err(BundleError::InvalidTwist(format!("τ given at {n} outside N")));
            }
            slots[*n] = Some(t.clone());
        }
        if let Some(&n) = quotient.normal().members().iter().find(|&&n| slots[n].is_none()) {
            return Err(BundleError::InvalidTwist(format!("τ missing at {n}")));
        }
        let action = TwistedAction { algebra, unit, quotient, alpha: maps, tau: slots };
        action.verify(tol)?;
        Ok(action)
    }

    /// `α_s = Ad u_s` for unitaries `u_s` normalizing `B`.
    pub fn inner(algebra: MatrixSubspace<T>, quotient: Quotient, unitaries: &[Matrix<T>], tau: &[(usize, Matrix<T>)], tol: T) -> Result<Self, BundleError> {
        if unitaries.len() != quotient.group().order() {
            return Err(BundleError::ShapeMismatch("one unitary per group element".into()));
        }
        Self::new(algebra, quotient, |s, b| &(&unitaries[s] * b) * &unitaries[s].adjoint(), tau, tol)
    }

    /// An action of `G` with `N = {e}` and `τ_e = 1`.
    pub fn untwisted(algebra: MatrixSubspace<T>, group: Arc<FiniteGroup>, alpha: impl Fn(usize, &Matrix<T>) -> Matrix<T>, tol: T) -> Result<Self, BundleError> {
        let unit = algebra_unit(&algebra, tol).map_err(|e| BundleError::NotAnAlgebra(e.to_string()))?;
        let quotient = Quotient::new(group, &[0])?;
        Self::new(algebra, quotient, alpha, &[(0, unit)], tol)
    }

    /// The same `α` with the twist forgotten (`N = {e}`).
    pub fn untwisted_part(&self) -> Self {
        let quotient = Quotient::new(self.quotient.group().clone(), &[0]).expect("trivial subgroup is normal");
        let mut tau = vec![None; self.tau.len()];
        tau[0] = Some(self.unit.clone());
        TwistedAction { algebra: self.algebra.clone(), unit: self.unit.clone(), quotient, alpha: self.alpha.clone(), tau }
    }

    pub fn algebra(&self) -> &MatrixSubspace<T> {
        &self.algebra
    }

    pub fn unit(&self) -> &Matrix<T> {
        &self.unit
    }

    pub fn quotient(&self) -> &Quotient {
        &self.quotient
    }

    pub fn group(&self) -> &Arc<FiniteGroup> {
        self.quotient.group()
    }

    /// `α_s` as a matrix on coordinates of `B`.
    pub fn alpha_matrix(&self, s: usize) -> &Matrix<T> {
        &self.alpha[s]
    }

    /// `α_s` on coordinates of `B`.
    pub fn alpha_coords(&self, s: usize, b: &[Cx<T>]) -> Vec<Cx<T>> {
        self.alpha[s].apply(b)
    }

    pub fn alpha(&self, s: usize, b: &Matrix<T>) -> Matrix<T> {
        self.algebra.combine(&self.alpha_coords(s, &self.algebra.coords(b)))
    }

    /// `τ_n`; panics when `n ∉ N`.
    pub fn tau(&self, n: usize) -> &Matrix<T> {
        self.tau[n].as_ref().expect("τ is defined on N only")
    }

    pub fn verify(&self, tol: T) -> Result<(), BundleError> {
        let g = self.group();
        let basis = self.algebra.basis();
        let close = |a: &Matrix<T>, b: &Matrix<T>| (a - b).hs_norm() <= tol.sqrt() * a.hs_norm().max(b.hs_norm()).max(T::one());
        for s in g.elements() {
            if rank(&self.alpha[s], tol) != self.algebra.dim() {
                return Err(BundleError::InvalidAction(format!("α_{s} is not bijective")));
            }
            for x in basis {
                let ax = self.alpha(s, x);
                if !close(&self.alpha(s, &x.adjoint()), &ax.adjoint()) {
                    return Err(BundleError::InvalidAction(format!("α_{s} is not *-preserving")));
                }
                for y in basis {
                    if !close(&self.alpha(s, &(x * y)), &(&ax * &self.alpha(s, y))) {
                        return Err(BundleError::InvalidAction(format!("α_{s} is not multiplicative")));
                    }
                }
            }
            for t in g.elements() {
                let composed = &self.alpha[s] * &self.alpha[t];
                if !close(&composed, &self.alpha[g.mul(s, t)]) {
                    return Err(BundleError::InvalidAction(format!("α_{s} α_{t} ≠ α_st")));
                }
            }
        }
        let normal = self.quotient.normal().members();
        for &n in normal {
            let t = self.tau(n);
            if !self.algebra.contains(t, tol.sqrt())? {
                return Err(BundleError::InvalidTwist(format!("τ_{n} ∉ B")));
            }
            if !close(&(t * &t.adjoint()), &self.unit) || !close(&(&t.adjoint() * t), &self.unit) {
                return Err(BundleError::InvalidTwist(format!("τ_{n} is not unitary in B")));
            }
            for &m in normal {
                if !close(&(t * self.tau(m)), self.tau(g.mul(n, m))) {
                    return Err(BundleError::InvalidTwist(format!("τ_{n} τ_{m} ≠ τ_nm")));
                }
            }
            for s in g.elements() {
                if !close(&self.alpha(s, t), self.tau(g.conjugate(s, n))) {
                    return Err(BundleError::InvalidTwist(format!("α_{s}(τ_{n}) ≠ τ_(sns⁻¹)")));
                }
            }
            for b in basis {
                if !close(&self.alpha(n, b), &(&(t * b) * &t.adjoint())) {
                    return Err(BundleError::InvalidTwist(format!("α_{n} ≠ Ad τ_{n}")));
                }
            }
        }
        Ok(())
    }
}

/// The semidirect product bundle `B × G` of `α` (any twist is ignored):
/// `(b, s)(c, t) = (b α_s(c), st)`, `(b, s)* = (α_{s⁻¹}(b)*, s⁻¹)`, with
/// the trace as functional.
pub fn semidirect_bundle<T: Real>(action: &TwistedAction<T>) -> AbstractBundle<T> {
    let g = action.group().clone();
    let b = action.algebra();
    let k = b.dim();
    let e = |i: usize| unit_vector::<T>(k, i);
    AbstractBundle::new(
        g.clone(),
        vec![k; g.order()],
        |s, i, _t, j| b.coords(&(&b.basis()[i] * &b.combine(&action.alpha_coords(s, &e(j))))),
        |s, i| {
            let moved = b.combine(&action.alpha_coords(g.inv(s), &e(i)));
            b.coords(&moved.adjoint())
        },
        b.basis().iter().map(Matrix::trace).collect(),
    )
    .expect("shapes follow from the action")
}

/// Normal form of the orbit class `[b, s]`: with `s = n c(sN)` for the
/// section `c`, `[b, s] = [b τ_n, c(sN)]`. Returns the coset and the
/// coordinates of `b τ_n` in `B`.
pub fn twisted_class<T: Real>(action: &TwistedAction<T>, b: &Matrix<T>, s: usize) -> (usize, Vec<Cx<T>>) {
    let q = action.quotient();
    let g = q.group();
    let k = q.q(s);
    let n = g.mul(s, g.inv(q.section(k)));
    (k, action.algebra().coords(&(b * action.tau(n))))
}

/// The twisted semidirect product bundle over `G/N`: classes of
/// `(b, s)` under `(b, s)·n = (bτ_n, n⁻¹s)`, each fiber represented at the
/// section `c`.
pub fn twisted_semidirect_bundle<T: Real>(action: &TwistedAction<T>) -> AbstractBundle<T> {
    let q = action.quotient();
    let g = q.group();
    let b = action.algebra();
    let k = b.dim();
    let e = |i: usize| unit_vector::<T>(k, i);
    let quotient = q.quotient_group().clone();
    AbstractBundle::new(
        quotient.clone(),
        vec![k; quotient.order()],
        |x, i, y, j| {
            let (s, t) = (q.section(x), q.section(y));
            let prod = &b.basis()[i] * &b.combine(&action.alpha_coords(s, &e(j)));
            twisted_class(action, &prod, g.mul(s, t)).1
        },
        |x, i| {
            let s = q.section(x);
            let moved = b.combine(&action.alpha_coords(g.inv(s), &e(i))).adjoint();
            twisted_class(action, &moved, g.inv(s)).1
        },
        b.basis().iter().map(Matrix::trace).collect(),
    )
    .expect("shapes follow from the action")
}

fn unit_vector<T: Real>(k: usize, i: usize) -> Vec<Cx<T>> {
    let mut v = vec![Cx::zero(); k];
    v[i] = Cx::one();
    v
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::wedderburn_block_count;

    const TOL: f64 = 1e-9;

    fn scalars() -> MatrixSubspace<f64> {
        MatrixSubspace::orthonormalize(1, &[Matrix::identity(1)], TOL).unwrap()
    }

    fn twisted_z4(sign: f64) -> TwistedAction<f64> {
        let q = Quotient::new(Arc::new(FiniteGroup::cyclic(4).unwrap()), &[0, 2]).unwrap();
        let tau = [(0, Matrix::identity(1)), (2, Matrix::identity(1).scale_real(sign))];
        TwistedAction::new(scalars(), q, |_, b| b.clone(), &tau, TOL).unwrap()
    }

    #[test]
    fn orbit_relation_normal_form() {
        let t = twisted_z4(-1.0);
        let one = Matrix::identity(1);
        // [b, n s] = [b τ_n, s]
        for s in 0..4 {
            let (k1, c1) = twisted_class(&t, &one, (s + 2) % 4);
            let (k2, c2) = twisted_class(&t, t.tau(2), s);
            assert_eq!(k1, k2);
            assert!((c1[0] - c2[0]).norm() < 1e-12);
        }
    }

    #[test]
    fn twisted_z4_bundle() {
        let t = twisted_z4(-1.0);
        let a = twisted_semidirect_bundle(&t);
        assert_eq!(a.dims(), &[1, 1]);
        assert!(a.axiom_residual() < 1e-12);
        let c = a.concretize(TOL).unwrap();
        assert!(c.bundle.verify(TOL).passed());
        assert_eq!(c.bundle.total_dim(), 2);
    }

    #[test]
    fn bad_twists_rejected() {
        let q = Quotient::new(Arc::new(FiniteGroup::cyclic(4).unwrap()), &[0, 2]).unwrap();
        let i = Matrix::identity(1).scale(Cx::new(0.0, 1.0));
        // τ_2 = i is unitary but τ_2² ≠ τ_0
        let tau = [(0, Matrix::identity(1)), (2, i)];
        let err = TwistedAction::new(scalars(), q.clone(), |_, b| b.clone(), &tau, TOL).unwrap_err();
        assert!(matches!(err, BundleError::InvalidTwist(_)));
        let err = TwistedAction::new(scalars(), q, |_, b| b.clone(), &[(0, Matrix::identity(1))], TOL).unwrap_err();
        assert!(matches!(err, BundleError::InvalidTwist(_)));
    }

    #[test]
    fn swap_semidirect_is_full_matrix_algebra() {
        let diag: Vec<_> = (0..2).map(|i| Matrix::<f64>::unit(2, i, i)).collect();
        let b = MatrixSubspace::orthonormalize(2, &diag, TOL).unwrap();
        let g = Arc::new(FiniteGroup::cyclic(2).unwrap());
        let x = crate::matrix::pauli_x::<f64>();
        let t = TwistedAction::untwisted(b, g, |s, m| if s == 0 { m.clone() } else { &(&x * m) * &x }, TOL).unwrap();
        let c = semidirect_bundle(&t).concretize(TOL).unwrap();
        assert!(c.bundle.verify(TOL).passed());
        let total: Vec<_> = c.bundle.fibers().iter().flat_map(|f| f.basis().to_vec()).collect();
        let span = MatrixSubspace::orthonormalize(4, &total, TOL).unwrap();
        assert_eq!(wedderburn_block_count(&span, TOL).unwrap(), 1);
    }

    #[test]
    fn non_multiplicative_alpha_rejected() {
        let diag: Vec<_> = (0..2).map(|i| Matrix::<f64>::unit(2, i, i)).collect();
        let b = MatrixSubspace::orthonormalize(2, &diag, TOL).unwrap();
        let g = Arc::new(FiniteGroup::cyclic(2).unwrap());
        let err = TwistedAction::untwisted(b, g, |s, m| if s == 0 { m.clone() } else { m.scale_real(2.0) }, TOL).unwrap_err();
        assert!(matches!(err, BundleError::InvalidAction(_)));
    }
}
