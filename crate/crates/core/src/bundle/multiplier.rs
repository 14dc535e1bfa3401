use std::sync::Arc;

use crate::bundle::constructions::pullback_element;
use crate::bundle::{AbstractBundle, BundleError, GradedBundle};
use crate::group::{left_regular, FiniteGroup, Quotient, Subgroup};
use crate::matrix::Matrix;
use crate::scalar::Real;

/// Ambient unitaries `u_n` indexed by a subgroup, acting as multipliers of a
/// graded bundle.
#[derive(Clone, Debug)]
pub struct MultiplierFamily<T> {
    domain: Subgroup,
    unitaries: Vec<Matrix<T>>,
}

impl<T: Real> MultiplierFamily<T> {
    /// `unitaries[i]` belongs to `members[i]`.
    pub fn new(group: Arc<FiniteGroup>, members: &[usize], unitaries: Vec<Matrix<T>>) -> Result<Self, BundleError> {
        if members.len() != unitaries.len() {
            return Err(BundleError::ShapeMismatch("one unitary per member".into()));
        }
        let domain = Subgroup::new(group, members).map_err(|_| BundleError::NotASubgroup)?;
        let mut sorted = vec![None; domain.order()];
        for (&n, u) in members.iter().zip(unitaries) {
            let pos = domain.members().binary_search(&n).expect("member of its own subgroup");
            sorted[pos] = Some(u);
        }
        let unitaries = sorted.into_iter().map(|u| u.ok_or(BundleError::NotASubgroup)).collect::<Result<_, _>>()?;
        Ok(MultiplierFamily { domain, unitaries })
    }

    pub fn domain(&self) -> &Subgroup {
        &self.domain
    }

    pub fn get(&self, n: usize) -> Option<&Matrix<T>> {
        self.domain.members().binary_search(&n).ok().map(|i| &self.unitaries[i])
    }

    fn at(&self, n: usize) -> &Matrix<T> {
        self.get(n).expect("element of the domain")
    }

    /// Checks that every `u_n` is unitary on the bundle's support, has order
    /// `order(n)` (`u_n A_t ⊆ A_{order(n) t}` and `A_t u_n ⊆ A_{t order(n)}`)
    /// and that `n ↦ u_n` is multiplicative on the support.
    pub fn verify_on(&self, bundle: &GradedBundle<T>, order: impl Fn(usize) -> usize, tol: T) -> Result<(), BundleError> {
        let g = bundle.group();
        let hg = self.domain.group();
        let fail = |msg: String| Err(BundleError::InvalidMultiplierFamily(msg));
        let close = |a: &Matrix<T>, b: &Matrix<T>| (a - b).hs_norm() <= tol.sqrt() * a.hs_norm().max(b.hs_norm()).max(T::one());
        for (&n, u) in self.domain.members().iter().zip(&self.unitaries) {
            if u.rows() != bundle.ambient_dim() {
                return Err(BundleError::ShapeMismatch(format!("u_{n} has the wrong size")));
            }
            let uu = &u.adjoint() * u;
            let vv = u * &u.adjoint();
            let o = order(n);
            for t in g.elements() {
                for a in bundle.fiber(t).basis() {
                    if !close(&(&uu * a), a) || !close(&(&vv * a), a) || !close(&(a * &uu), a) || !close(&(a * &vv), a) {
                        return fail(format!("u_{n} is not unitary on the support"));
                    }
                    let left = u * a;
                    let right = a * u;
                    if bundle.fiber(g.mul(o, t)).residual(&left) > tol.sqrt() * left.hs_norm().max(T::one())
                        || bundle.fiber(g.mul(t, o)).residual(&right) > tol.sqrt() * right.hs_norm().max(T::one())
                    {
                        return fail(format!("u_{n} is not a multiplier of order {o}"));
                    }
                }
            }
            for (&m, w) in self.domain.members().iter().zip(&self.unitaries) {
                let prod = u * w;
                let target = self.at(hg.mul(n, m));
                for t in g.elements() {
                    for a in bundle.fiber(t).basis() {
                        if !close(&(&prod * a), &(target * a)) {
                            return fail(format!("u_{n} u_{m} ≠ u_nm"));
                        }
                    }
                }
            }
        }
        Ok(())
    }

    /// Covariance `a_s u_n = u_{sns⁻¹} a_s` on every fiber basis element of a
    /// bundle over the family's own group.
    pub fn verify_covariance(&self, bundle: &GradedBundle<T>, tol: T) -> Result<(), BundleError> {
        let g = bundle.group();
        for &n in self.domain.members() {
            for s in g.elements() {
                let v = self.at(g.conjugate(s, n));
                for a in bundle.fiber(s).basis() {
                    let lhs = a * self.at(n);
                    let rhs = v * a;
                    if (&lhs - &rhs).hs_norm() > tol.sqrt() * lhs.hs_norm().max(T::one()) {
                        return Err(BundleError::InvalidMultiplierFamily(format!("a_{s} u_{n} ≠ u_(sns⁻¹) a_{s}")));
                    }
                }
            }
        }
        Ok(())
    }
}

/// `u_n = 1_D ⊗ λ_n` on the pull-back of `D` along `q`.
pub fn canonical_multiplier_family<T: Real>(d: &GradedBundle<T>, q: &Quotient, tol: T) -> Result<MultiplierFamily<T>, BundleError> {
    let one = d.unit(tol).ok_or(BundleError::NonUnitalUnitFiber)?;
    let g = q.group();
    let members = q.normal().members().to_vec();
    let unitaries = members.iter().map(|&n| pullback_element(&one, g, n)).collect();
    MultiplierFamily::new(g.clone(), &members, unitaries)
}

/// Representative `a u_{n_s}*` in `A_{c(sN)}` of the orbit class of `a ∈ A_s`.
pub fn orbit_representative<T: Real>(a: &Matrix<T>, s: usize, u: &MultiplierFamily<T>, q: &Quotient) -> Matrix<T> {
    a * &u.at(q.n_of(s)).adjoint()
}

/// The bundle of `N`-orbits `[a]` over `G/N`, represented on the fibers
/// `A_{c(k)}`: `[a][b] = [a b u_m*]` with `m = c(kl)⁻¹ c(k) c(l)`.
pub fn quotient_bundle<T: Real>(a: &GradedBundle<T>, u: &MultiplierFamily<T>, q: &Quotient, tol: T) -> Result<AbstractBundle<T>, BundleError> {
    if **a.group() != **q.group() || u.domain().members() != q.normal().members() {
        return Err(BundleError::GroupMismatch);
    }
    u.verify_on(a, |n| n, tol)?;
    u.verify_covariance(a, tol)?;
    let g = q.group();
    let h = q.quotient_group().clone();
    let c = |k: usize| q.section(k);
    let fiber = |k: usize| a.fiber(c(k));
    AbstractBundle::new(
        h.clone(),
        (0..h.order()).map(|k| fiber(k).dim()).collect(),
        |k, i, l, j| {
            let kl = h.mul(k, l);
            let m = g.mul(g.inv(c(kl)), g.mul(c(k), c(l)));
            let p = &(&fiber(k).basis()[i] * &fiber(l).basis()[j]) * &u.at(m).adjoint();
            fiber(kl).coords(&p)
        },
        |k, i| {
            let ki = h.inv(k);
            let m = g.mul(g.inv(c(ki)), g.inv(c(k)));
            fiber(ki).coords(&(&fiber(k).basis()[i].adjoint() * &u.at(m).adjoint()))
        },
        a.fiber(0).basis().iter().map(Matrix::trace).collect(),
    )
}

/// Left-regular unitaries `1 ⊗ λ_n` for the trivial bundle, used as a
/// non-canonical but valid family in tests and examples.
pub fn regular_family<T: Real>(unit: &Matrix<T>, q: &Quotient) -> Result<MultiplierFamily<T>, BundleError> {
    let g = q.group();
    let members = q.normal().members().to_vec();
    let unitaries = members.iter().map(|&n| unit.kron(&left_regular(g, n))).collect();
    MultiplierFamily::new(g.clone(), &members, unitaries)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bundle::{pullback, trivial_bundle};
    use crate::matrix::{pauli_x, MatrixSubspace};

    const TOL: f64 = 1e-9;

    fn pauli() -> GradedBundle<f64> {
        let z2 = Arc::new(FiniteGroup::cyclic(2).unwrap());
        GradedBundle::from_spanning(z2, 2, &[vec![Matrix::identity(2)], vec![pauli_x()]], TOL).unwrap()
    }

    fn z4_over_z2() -> Quotient {
        Quotient::new(Arc::new(FiniteGroup::cyclic(4).unwrap()), &[0, 2]).unwrap()
    }

    #[test]
    fn canonical_family_on_pauli_pullback() {
        let q = z4_over_z2();
        let p = pullback(&pauli(), &q, TOL).unwrap();
        let u = canonical_multiplier_family(&pauli(), &q, TOL).unwrap();
        u.verify_on(&p, |n| n, TOL).unwrap();
        u.verify_covariance(&p, TOL).unwrap();
        assert!((u.get(0).unwrap() - &Matrix::identity(8)).max_abs() < 1e-12);
        // u_2 A_1 = A_3
        let moved = u.get(2).unwrap() * &p.fiber(1).basis()[0];
        assert!(p.fiber(3).contains(&moved, TOL).unwrap());
    }

    #[test]
    fn scaled_family_rejected() {
        let q = z4_over_z2();
        let p = pullback(&pauli(), &q, TOL).unwrap();
        let bad = MultiplierFamily::new(
            q.group().clone(),
            &[0, 2],
            vec![Matrix::identity(8), pullback_element(&Matrix::identity(2), q.group(), 2).scale_real(2.0)],
        )
        .unwrap();
        assert!(matches!(bad.verify_on(&p, |n| n, TOL), Err(BundleError::InvalidMultiplierFamily(_))));
    }

    #[test]
    fn quotient_of_trivial_z4_bundle() {
        let q = z4_over_z2();
        let scalars = MatrixSubspace::orthonormalize(1, &[Matrix::identity(1)], TOL).unwrap();
        let a = trivial_bundle(q.group().clone(), &scalars, TOL).unwrap();
        let u = regular_family(&Matrix::identity(1), &q).unwrap();
        let d = quotient_bundle(&a, &u, &q, TOL).unwrap();
        assert_eq!(d.dims(), &[1, 1]);
        assert!(d.axiom_residual() < 1e-12);
        assert!(d.concretize(TOL).unwrap().bundle.verify(TOL).passed());
    }

    #[test]
    fn non_unital_unit_fiber_rejected() {
        let z2 = Arc::new(FiniteGroup::cyclic(2).unwrap());
        let nil = GradedBundle::from_spanning(z2, 2, &[vec![Matrix::unit(2, 0, 1)], vec![]], TOL).unwrap();
        let err = canonical_multiplier_family(&nil, &Quotient::new(Arc::new(FiniteGroup::cyclic(4).unwrap()), &[0, 2]).unwrap(), TOL);
        assert_eq!(err.unwrap_err(), BundleError::NonUnitalUnitFiber);
    }
}
