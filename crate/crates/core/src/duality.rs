//! Pull-back characterization, twisted Landstad duality, the
//! Olesen–Pedersen correspondence and the induction obstruction.

use std::sync::Arc;

use num_traits::One;
use thiserror::Error;

use crate::bundle::{
    canonical_multiplier_family, orbit_representative, pullback, pullback_element, quotient_bundle, semidirect_bundle,
    twisted_class, twisted_semidirect_bundle, verify_bundle_isomorphism, BundleError, Concretization, GradedBundle,
    IsoReport, MultiplierFamily, TwistedAction,
};
use crate::group::{FiniteGroup, GroupError, Quotient};
use crate::matrix::eigen::least_squares;
use crate::matrix::{minimal_central_projections, Matrix, MatrixError, MatrixSubspace};
use crate::scalar::{Cx, Real};
use crate::sectional::{SectionAlgebra, SectionalError};

/// Subsets of central summands are enumerated exhaustively up to this many blocks.
pub const MAX_BLOCKS: usize = 16;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum DualityError {
    #[error("multiplier family is not order compatible: {0}")]
    MultiplierNotOrderCompatible(String),
    #[error("fiber over coset {0} is not D_N u_s")]
    FiberNotPrincipal(usize),
    #[error("normal subgroup must be nontrivial")]
    TrivialN,
    #[error("invalid multiplier family: {0}")]
    InvalidMultiplierFamily(String),
    #[error("too many central summands ({0}) to enumerate ideals")]
    TooManyBlocks(usize),
    #[error("bundle is graded over a different group")]
    GroupMismatch,
    #[error(transparent)]
    Bundle(#[from] BundleError),
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error(transparent)]
    Sectional(#[from] SectionalError),
    #[error(transparent)]
    Matrix(#[from] MatrixError),
}

/// Coordinates `c` in `a`'s fiber `s` basis with `phi(Σ c_i a_i) = y`,
/// for a linear `phi` into a subspace `target`.
fn preimage<T: Real>(
    source: &MatrixSubspace<T>,
    target: &MatrixSubspace<T>,
    phi: impl Fn(&Matrix<T>) -> Matrix<T>,
    y: &Matrix<T>,
    tol: T,
) -> Matrix<T> {
    let images: Vec<Vec<Cx<T>>> = source.basis().iter().map(|a| target.coords(&phi(a))).collect();
    let sys = Matrix::from_fn(target.dim(), source.dim(), |i, j| images[j][i]);
    source.combine(&least_squares(&sys, &target.coords(y), tol))
}

/// Both round trips of the pull-back characterization for `D` over `G/N`:
/// `D ≅ quotient(pullback(D), u)` through `d ↦ [d ⊗ λ_{c(k)}]` and
/// `A ≅ pullback(quotient(A, u))` through `a_s ↦ ([a_s], s)`, with `A`
/// the pull-back and `u` its canonical family.
pub fn pullback_round_trips<T: Real>(d: &GradedBundle<T>, q: &Quotient, tol: T) -> Result<(IsoReport, IsoReport), DualityError> {
    let p = pullback(d, q, tol)?;
    let u = canonical_multiplier_family(d, q, tol)?;
    let first = quotient_round_trip(d, &p, &u, q, tol)?;
    let second = pullback_quotient_round_trip(&p, &u, q, tol)?;
    Ok((first, second))
}

/// `D ≅ quotient(A, u)` through `d ↦ [d ⊗ λ_{c(k)}]` when `A = pullback(D)`.
pub fn quotient_round_trip<T: Real>(
    d: &GradedBundle<T>,
    a: &GradedBundle<T>,
    u: &MultiplierFamily<T>,
    q: &Quotient,
    tol: T,
) -> Result<IsoReport, DualityError> {
    let e = quotient_bundle(a, u, q, tol)?.concretize(tol)?;
    let g = q.group();
    let psi = |k: usize, x: &Matrix<T>| {
        let c = q.section(k);
        e.realize(k, &a.fiber(c).coords(&pullback_element(x, g, c)))
    };
    Ok(verify_bundle_isomorphism(d, &e.bundle, psi, tol)?)
}

/// `A ≅ pullback(quotient(A, u))` through `a_s ↦ ([a_s], s)`.
pub fn pullback_quotient_round_trip<T: Real>(
    a: &GradedBundle<T>,
    u: &MultiplierFamily<T>,
    q: &Quotient,
    tol: T,
) -> Result<IsoReport, DualityError> {
    let e = quotient_bundle(a, u, q, tol)?.concretize(tol)?;
    let back = pullback(&e.bundle, q, tol)?;
    let g = q.group();
    let phi = |s: usize, x: &Matrix<T>| {
        let k = q.q(s);
        let rep = orbit_representative(x, s, u, q);
        let class = e.realize(k, &a.fiber(q.section(k)).coords(&rep));
        pullback_element(&class, g, s)
    };
    Ok(verify_bundle_isomorphism(a, &back, phi, tol)?)
}

/// Canonical unitaries `u_s = [1, s]` of a concretized twisted semidirect
/// product bundle, as a family over all of `G`.
pub fn twisted_unitaries<T: Real>(action: &TwistedAction<T>, d: &Concretization<T>) -> Result<MultiplierFamily<T>, DualityError> {
    let g = action.group();
    let members: Vec<usize> = g.elements().collect();
    let unitaries = members
        .iter()
        .map(|&s| {
            let (k, c) = twisted_class(action, action.unit(), s);
            d.realize(k, &c)
        })
        .collect();
    Ok(MultiplierFamily::new(g.clone(), &members, unitaries)?)
}

#[derive(Clone, Debug)]
pub struct LandstadResult<T> {
    pub action: TwistedAction<T>,
    pub isomorphism: IsoReport,
}

/// Rebuilds `(B, G, N, α, τ)` from a bundle `D` over `G/N` and unitary
/// multipliers `u_s` of order `sN`: `B = D_N`, `α_s = Ad u_s`, `τ = u|_N`.
/// The isomorphism `[b, s] ↦ b u_s` onto `D` is verified.
pub fn landstad_reconstruct<T: Real>(
    d: &GradedBundle<T>,
    q: &Quotient,
    u: &MultiplierFamily<T>,
    tol: T,
) -> Result<LandstadResult<T>, DualityError> {
    if **d.group() != **q.quotient_group() || u.domain().order() != q.group().order() {
        return Err(DualityError::GroupMismatch);
    }
    u.verify_on(d, |s| q.q(s), tol).map_err(|e| DualityError::MultiplierNotOrderCompatible(e.to_string()))?;
    let unitary = |s: usize| u.get(s).expect("family over all of G");
    let b = d.fiber(0).clone();
    let one = d.unit(tol).ok_or(BundleError::NonUnitalUnitFiber)?;
    for k in 0..q.index() {
        let moved: Vec<Matrix<T>> = b.basis().iter().map(|x| x * unitary(q.section(k))).collect();
        let span = MatrixSubspace::orthonormalize(d.ambient_dim(), &moved, tol)?;
        if !span.same_span(d.fiber(k), tol.sqrt()) {
            return Err(DualityError::FiberNotPrincipal(k));
        }
    }
    let tau: Vec<(usize, Matrix<T>)> = q.normal().members().iter().map(|&n| (n, unitary(n) * &one)).collect();
    let action = TwistedAction::new(b, q.clone(), |s, x| &(unitary(s) * x) * &unitary(s).adjoint(), &tau, tol)?;
    let twisted = twisted_semidirect_bundle(&action).concretize(tol)?;
    let basis = action.algebra().clone();
    let phi = |k: usize, x: &Matrix<T>| &basis.combine(&twisted.coords(k, x)) * unitary(q.section(k));
    let isomorphism = verify_bundle_isomorphism(&twisted.bundle, d, phi, tol)?;
    Ok(LandstadResult { action, isomorphism })
}

/// The semidirect product bundle of `α`, the twisted semidirect product
/// bundle and its pull-back, with the verified isomorphism
/// `(b, s) ↦ ([b, s], s)`.
#[derive(Clone, Debug)]
pub struct OlesenPedersen<T> {
    pub semidirect: Concretization<T>,
    pub twisted: Concretization<T>,
    pub pullback: GradedBundle<T>,
    pub isomorphism: IsoReport,
}

impl<T: Real> OlesenPedersen<T> {
    pub fn dim_semidirect(&self) -> usize {
        self.semidirect.bundle.total_dim()
    }

    pub fn dim_pullback(&self) -> usize {
        self.pullback.total_dim()
    }
}

fn op_map<T: Real>(action: &TwistedAction<T>, a: &Concretization<T>, d: &Concretization<T>, s: usize, x: &Matrix<T>) -> Matrix<T> {
    let b = action.algebra().combine(&a.coords(s, x));
    let (k, c) = twisted_class(action, &b, s);
    pullback_element(&d.realize(k, &c), action.group(), s)
}

pub fn olesen_pedersen_forward<T: Real>(action: &TwistedAction<T>, tol: T) -> Result<OlesenPedersen<T>, DualityError> {
    let a = semidirect_bundle(action).concretize(tol)?;
    let d = twisted_semidirect_bundle(action).concretize(tol)?;
    let p = pullback(&d.bundle, action.quotient(), tol)?;
    let isomorphism = verify_bundle_isomorphism(&a.bundle, &p, |s, x| op_map(action, &a, &d, s, x), tol)?;
    Ok(OlesenPedersen { semidirect: a, twisted: d, pullback: p, isomorphism })
}

/// The canonical family `1 ⊗ λ_n` of the pull-back, carried back to the
/// semidirect product bundle through the forward isomorphism.
pub fn transported_family<T: Real>(action: &TwistedAction<T>, op: &OlesenPedersen<T>, tol: T) -> Result<MultiplierFamily<T>, DualityError> {
    let q = action.quotient();
    let u = canonical_multiplier_family(&op.twisted.bundle, q, tol)?;
    let members = q.normal().members().to_vec();
    let mut unitaries = Vec::with_capacity(members.len());
    for &n in &members {
        let target = u.get(n).expect("canonical family covers N");
        let pre = preimage(
            op.semidirect.bundle.fiber(n),
            op.pullback.fiber(n),
            |x| op_map(action, &op.semidirect, &op.twisted, n, x),
            target,
            tol,
        );
        unitaries.push(pre);
    }
    Ok(MultiplierFamily::new(q.group().clone(), &members, unitaries)?)
}

/// `τ_n = (1, n) u_{n⁻¹}`, read off in `B`, for a family `u` over `N` on the
/// concretized semidirect product bundle of `action`. The result is checked
/// to be a twist for `α`.
pub fn extract_twist<T: Real>(
    action: &TwistedAction<T>,
    semidirect: &Concretization<T>,
    u: &MultiplierFamily<T>,
    tol: T,
) -> Result<Vec<(usize, Matrix<T>)>, DualityError> {
    let q = action.quotient();
    let g = q.group();
    let bad = |e: BundleError| DualityError::InvalidMultiplierFamily(e.to_string());
    u.verify_on(&semidirect.bundle, |n| n, tol).map_err(bad)?;
    u.verify_covariance(&semidirect.bundle, tol).map_err(bad)?;
    let b = action.algebra();
    let one = b.coords(action.unit());
    let mut tau = Vec::new();
    for &n in q.normal().members() {
        let un = u.get(g.inv(n)).ok_or_else(|| DualityError::InvalidMultiplierFamily(format!("u missing at {n}")))?;
        let t = &semidirect.realize(n, &one) * un;
        tau.push((n, b.combine(&semidirect.coords(0, &t))));
    }
    TwistedAction::new(b.clone(), q.clone(), |s, x| action.alpha(s, x), &tau, tol).map_err(bad)?;
    Ok(tau)
}

/// All two-sided ideals invariant under every grading projection, as sums
/// of minimal central summands; sorted by dimension, including 0 and the
/// whole algebra.
pub fn graded_ideals<T: Real>(section: &SectionAlgebra<T>, tol: T) -> Result<Vec<MatrixSubspace<T>>, DualityError> {
    let total = section.total();
    let projections = minimal_central_projections(total, tol)?;
    let m = projections.len();
    if m > MAX_BLOCKS {
        return Err(DualityError::TooManyBlocks(m));
    }
    let n = total.ambient_dim();
    let g = section.bundle().group().clone();
    let mut ideals = Vec::new();
    for mask in 0u32..(1u32 << m) {
        let mut p = Matrix::zeros(n, n);
        for (i, q) in projections.iter().enumerate() {
            if mask & (1 << i) != 0 {
                p = &p + q;
            }
        }
        let gens: Vec<Matrix<T>> = total.basis().iter().map(|b| &p * b).collect();
        let ideal = MatrixSubspace::orthonormalize(n, &gens, tol)?;
        let mut invariant = true;
        'check: for x in ideal.basis() {
            for s in g.elements() {
                if !ideal.contains(&section.component(s, x)?, tol.sqrt())? {
                    invariant = false;
                    break 'check;
                }
            }
        }
        if invariant {
            ideals.push(ideal);
        }
    }
    ideals.sort_by_key(MatrixSubspace::dim);
    Ok(ideals)
}

/// No graded ideals besides 0 and the whole algebra.
pub fn is_g_simple<T: Real>(section: &SectionAlgebra<T>, tol: T) -> Result<bool, DualityError> {
    let ideals = graded_ideals(section, tol)?;
    Ok(ideals.len() == 2 || (ideals.len() == 1 && section.dim() == 0))
}

/// A finite `G`-set: `perm[s][x] = s·x`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GSetAction {
    group: Arc<FiniteGroup>,
    perm: Vec<Vec<usize>>,
}

impl GSetAction {
    pub fn new(group: Arc<FiniteGroup>, perm: Vec<Vec<usize>>) -> Result<Self, GroupError> {
        let bad = || GroupError::InvalidParameters("not a group action on a finite set".into());
        if perm.len() != group.order() {
            return Err(bad());
        }
        let size = perm[0].len();
        for p in &perm {
            let mut seen = vec![false; size];
            if p.len() != size || p.iter().any(|&x| x >= size || std::mem::replace(&mut seen[x], true)) {
                return Err(bad());
            }
        }
        if (0..size).any(|x| perm[0][x] != x) {
            return Err(bad());
        }
        for s in group.elements() {
            for t in group.elements() {
                if (0..size).any(|x| perm[group.mul(s, t)][x] != perm[s][perm[t][x]]) {
                    return Err(bad());
                }
            }
        }
        Ok(GSetAction { group, perm })
    }

    /// Left translation of `G` on itself.
    pub fn translation(group: Arc<FiniteGroup>) -> Self {
        let perm = group.elements().map(|s| group.elements().map(|x| group.mul(s, x)).collect()).collect();
        GSetAction { group, perm }
    }

    pub fn trivial(group: Arc<FiniteGroup>, size: usize) -> Self {
        let perm = vec![(0..size).collect(); group.order()];
        GSetAction { group, perm }
    }

    /// Left translation on the left cosets `gH`, numbered by first appearance.
    pub fn on_cosets(group: Arc<FiniteGroup>, subgroup: &[usize]) -> Result<Self, GroupError> {
        if !group.is_subgroup(subgroup) {
            return Err(GroupError::NotASubgroup);
        }
        let mut label = vec![usize::MAX; group.order()];
        let mut count = 0;
        for g in group.elements() {
            if label[g] == usize::MAX {
                for &h in subgroup {
                    label[group.mul(g, h)] = count;
                }
                count += 1;
            }
        }
        let reps: Vec<usize> = (0..count).map(|c| label.iter().position(|&l| l == c).expect("nonempty coset")).collect();
        let perm = group.elements().map(|s| reps.iter().map(|&r| label[group.mul(s, r)]).collect()).collect();
        Ok(GSetAction { group, perm })
    }

    pub fn group(&self) -> &Arc<FiniteGroup> {
        &self.group
    }

    pub fn size(&self) -> usize {
        self.perm[0].len()
    }

    pub fn apply(&self, s: usize, x: usize) -> usize {
        self.perm[s][x]
    }

    pub fn stabilizer(&self, x: usize) -> Vec<usize> {
        self.group.elements().filter(|&s| self.perm[s][x] == x).collect()
    }

    /// `∩_x Stab(x)`.
    pub fn kernel(&self) -> Vec<usize> {
        self.group.elements().filter(|&s| (0..self.size()).all(|x| self.perm[s][x] == x)).collect()
    }

    pub fn orbits(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.size()];
        let mut out = Vec::new();
        for x in 0..self.size() {
            if seen[x] {
                continue;
            }
            let mut orbit: Vec<usize> = self.group.elements().map(|s| self.perm[s][x]).collect();
            orbit.sort_unstable();
            orbit.dedup();
            for &y in &orbit {
                seen[y] = true;
            }
            out.push(orbit);
        }
        out
    }

    /// Number of `G`-invariant ideals of `C(X)` (unions of orbits), 0 and `C(X)` included.
    pub fn invariant_ideal_count(&self) -> usize {
        1 << self.orbits().len()
    }

    /// The action on `C(X)` (diagonal matrices) by `α_s(f) = f ∘ s⁻¹`.
    pub fn function_algebra_action<T: Real>(&self, tol: T) -> Result<TwistedAction<T>, BundleError> {
        let size = self.size();
        let diag: Vec<Matrix<T>> = (0..size).map(|x| Matrix::unit(size, x, x)).collect();
        let algebra = MatrixSubspace::orthonormalize(size, &diag, tol)?;
        let perms: Vec<Matrix<T>> = self
            .group
            .elements()
            .map(|s| {
                let mut m = Matrix::zeros(size, size);
                for x in 0..size {
                    m[(self.perm[s][x], x)] = Cx::one();
                }
                m
            })
            .collect();
        TwistedAction::untwisted(algebra, self.group.clone(), |s, f| &(&perms[s] * f) * &perms[s].adjoint(), tol)
    }

    /// The transformation crossed product `C(X) ⋊ G` with its dual grading.
    pub fn crossed_product_bundle<T: Real>(&self, tol: T) -> Result<GradedBundle<T>, BundleError> {
        Ok(semidirect_bundle(&self.function_algebra_action(tol)?).concretize(tol)?.bundle)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ObstructionReport {
    pub kernel: Vec<usize>,
    /// `false` when some element of `N` moves a point: a twist over `N`
    /// would force `N` into every stabilizer.
    pub induced_possible: bool,
}

pub fn stabilizer_obstruction(action: &GSetAction, normal: &[usize]) -> Result<ObstructionReport, DualityError> {
    let g = action.group();
    if !g.is_normal(normal) {
        return Err(if g.is_subgroup(normal) { GroupError::NotNormal } else { GroupError::NotASubgroup }.into());
    }
    if normal.iter().all(|&n| n == 0) {
        return Err(DualityError::TrivialN);
    }
    let kernel = action.kernel();
    let induced_possible = normal.iter().all(|n| kernel.contains(n));
    Ok(ObstructionReport { kernel, induced_possible })
}
