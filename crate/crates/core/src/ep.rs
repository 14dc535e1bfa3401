//! Approximation-property witnesses, the averaging map and the pull-back
//! witness `f × g`.

use std::collections::BTreeMap;

use num_traits::Zero;
use thiserror::Error;

use crate::bundle::{pullback_element, BundleError, GradedBundle};
use crate::group::{FiniteGroup, Quotient, Subgroup};
use crate::matrix::eigen::rank;
use crate::matrix::{Matrix, MatrixError, StructureConstants};
use crate::scalar::{Cx, Real};
use crate::sectional::{SectionAlgebra, SectionalError};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum EpError {
    #[error("witness value at {0} is not in the unit fiber")]
    ValueOutsideUnitFiber(usize),
    #[error("sum of |g|^2 is {0}, exceeding 1")]
    GNormExceeded(f64),
    #[error("element is not in the section algebra")]
    NotInAlgebra,
    #[error("unit fiber has no unit")]
    NonUnitalUnitFiber,
    #[error(transparent)]
    Bundle(#[from] BundleError),
    #[error(transparent)]
    Sectional(#[from] SectionalError),
    #[error(transparent)]
    Matrix(#[from] MatrixError),
}

/// A finitely supported `f: G → A_e`.
#[derive(Clone, Debug)]
pub struct EpWitness<T> {
    values: BTreeMap<usize, Matrix<T>>,
    bound: T,
}

impl<T: Real> EpWitness<T> {
    pub fn new(bundle: &GradedBundle<T>, values: BTreeMap<usize, Matrix<T>>, tol: T) -> Result<Self, EpError> {
        let unit_fiber = bundle.fiber(0);
        for (&s, v) in &values {
            if s >= bundle.group().order() || !unit_fiber.contains(v, tol.sqrt())? {
                return Err(EpError::ValueOutsideUnitFiber(s));
            }
        }
        let n = bundle.ambient_dim();
        let mut sum = Matrix::zeros(n, n);
        for v in values.values() {
            sum = &sum + &(&v.adjoint() * v);
        }
        Ok(EpWitness { values, bound: sum.op_norm() })
    }

    /// `f(s) = |G|^{-1/2} 1_e` for every `s`.
    pub fn uniform(bundle: &GradedBundle<T>, tol: T) -> Result<Self, EpError> {
        let one = bundle.unit(tol).ok_or(EpError::NonUnitalUnitFiber)?;
        let order = bundle.group().order();
        let c = T::one() / T::from_usize(order).expect("small order").sqrt();
        let values = (0..order).map(|s| (s, one.scale_real(c))).collect();
        EpWitness::new(bundle, values, tol)
    }

    /// `f = δ_e 1_e`.
    pub fn delta(bundle: &GradedBundle<T>, tol: T) -> Result<Self, EpError> {
        let one = bundle.unit(tol).ok_or(EpError::NonUnitalUnitFiber)?;
        EpWitness::new(bundle, BTreeMap::from([(0, one)]), tol)
    }

    pub fn values(&self) -> &BTreeMap<usize, Matrix<T>> {
        &self.values
    }

    pub fn get(&self, s: usize) -> Option<&Matrix<T>> {
        self.values.get(&s)
    }

    /// `‖Σ_s f(s)* f(s)‖`.
    pub fn bound(&self) -> T {
        self.bound
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EpDefect {
    pub bound: f64,
    pub defect: f64,
}

/// `Σ_s f(hs)* a f(s)` with `h` an element of the ambient group.
fn average_one<T: Real>(g: &FiniteGroup, w: &EpWitness<T>, h: usize, a: &Matrix<T>) -> Matrix<T> {
    let mut out = Matrix::zeros(a.rows(), a.cols());
    for (&s, fs) in &w.values {
        if let Some(fhs) = w.values.get(&g.mul(h, s)) {
            out = &out + &(&(&fhs.adjoint() * a) * fs);
        }
    }
    out
}

/// Evaluated on the fiber basis rescaled to unit operator norm.
pub fn ep_defect<T: Real>(bundle: &GradedBundle<T>, w: &EpWitness<T>) -> EpDefect {
    let g = bundle.group();
    let mut defect = T::zero();
    for t in g.elements() {
        for b in bundle.fiber(t).basis() {
            let a = b.scale_real(T::one() / b.op_norm());
            let r = (&average_one(g, w, t, &a) - &a).op_norm() / a.op_norm().max(T::one());
            defect = defect.max(r);
        }
    }
    EpDefect { bound: w.bound.to_f64().unwrap_or(f64::NAN), defect: defect.to_f64().unwrap_or(f64::NAN) }
}

/// `h(s) = f(sN) g(n_s)` in the pull-back unit fiber.
pub fn ep_pullback_witness<T: Real>(
    d: &GradedBundle<T>,
    f: &EpWitness<T>,
    g: &BTreeMap<usize, Cx<T>>,
    q: &Quotient,
    pullback: &GradedBundle<T>,
    tol: T,
) -> Result<EpWitness<T>, EpError> {
    let norm: T = g.values().map(|c| c.norm_sqr()).fold(T::zero(), |a, b| a + b);
    if norm > T::one() + tol {
        return Err(EpError::GNormExceeded(norm.to_f64().unwrap_or(f64::NAN)));
    }
    if let Some(&n) = g.keys().find(|n| !q.normal().contains(**n)) {
        return Err(EpError::ValueOutsideUnitFiber(n));
    }
    let big = q.group();
    let n = d.ambient_dim();
    let mut values = BTreeMap::new();
    for s in big.elements() {
        let (Some(fk), Some(gn)) = (f.get(q.q(s)), g.get(&q.n_of(s))) else { continue };
        let v = pullback_element(&fk.scale(*gn), big, 0);
        debug_assert_eq!(v.rows(), n * big.order());
        values.insert(s, v);
    }
    EpWitness::new(pullback, values, tol)
}

/// `n ↦ ⟨λ(n) g, g⟩ = Σ_m conj(g(nm)) g(m)` on `N`.
pub fn matrix_coefficient<T: Real>(group: &FiniteGroup, g: &BTreeMap<usize, Cx<T>>, n: usize) -> Cx<T> {
    g.iter()
        .filter_map(|(&m, gm)| g.get(&group.mul(n, m)).map(|gnm| gnm.conj() * gm))
        .fold(Cx::zero(), |a, b| a + b)
}

/// `Ψ(a) = Σ_h Σ_s f(hs)* a_h f(s)` on the section algebra.
pub fn averaging_map<T: Real>(section: &SectionAlgebra<T>, w: &EpWitness<T>, a: &Matrix<T>, tol: T) -> Result<Matrix<T>, EpError> {
    let members: Vec<usize> = section.bundle().group().elements().collect();
    average_on(section, section.bundle().group(), &members, w, a, tol)
}

/// `Ψ` on the section algebra of a restriction `A_H`, with the sum over `s` still
/// ranging over all of `G`.
pub fn averaging_map_restricted<T: Real>(
    section: &SectionAlgebra<T>,
    h: &Subgroup,
    w: &EpWitness<T>,
    a: &Matrix<T>,
    tol: T,
) -> Result<Matrix<T>, EpError> {
    average_on(section, h.group(), h.members(), w, a, tol)
}

fn average_on<T: Real>(
    section: &SectionAlgebra<T>,
    g: &FiniteGroup,
    members: &[usize],
    w: &EpWitness<T>,
    a: &Matrix<T>,
    tol: T,
) -> Result<Matrix<T>, EpError> {
    if !section.total().contains(a, tol.sqrt())? {
        return Err(EpError::NotInAlgebra);
    }
    let mut out = Matrix::zeros(a.rows(), a.cols());
    for (i, &h) in members.iter().enumerate() {
        let ah = section.component(i, a)?;
        if !ah.is_zero() {
            out = &out + &average_one(g, w, h, &ah);
        }
    }
    Ok(out)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AmenabilityReport {
    pub regular_rep_kernel_dim: usize,
    pub ep_exact_witness_found: bool,
    pub defect: f64,
}

/// Kernel of the left-regular representation of the section algebra and the
/// outcome of the uniform witness.
pub fn amenability_report<T: Real>(bundle: &GradedBundle<T>, tol: T) -> Result<AmenabilityReport, EpError> {
    let section = SectionAlgebra::new(bundle, tol)?;
    let sc = StructureConstants::new(section.total());
    let k = sc.dim();
    let left = Matrix::from_fn(k, k * k, |i, col| sc.get(i, col / k, col % k));
    let kernel = k - if k == 0 { 0 } else { rank(&left, tol) };
    let (found, defect) = match EpWitness::uniform(bundle, tol) {
        Ok(w) => {
            let d = ep_defect(bundle, &w).defect;
            (d <= tol.sqrt().to_f64().unwrap_or(0.0), d)
        }
        Err(EpError::NonUnitalUnitFiber) => (false, f64::NAN),
        Err(e) => return Err(e),
    };
    Ok(AmenabilityReport { regular_rep_kernel_dim: kernel, ep_exact_witness_found: found, defect })
}
