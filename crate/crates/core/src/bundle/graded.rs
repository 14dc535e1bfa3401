use std::fmt;
use std::sync::Arc;

use crate::bundle::BundleError;
use crate::group::FiniteGroup;
use crate::matrix::{algebra_unit, check_star_algebra, eigen::hermitian_eigen, Matrix, MatrixSubspace};
use crate::scalar::{random_coords, seeded, Real};

/// A Fell bundle over `G` realized as a `G`-indexed family of subspaces of
/// one ambient matrix algebra `M_n`.
#[derive(Clone, Debug)]
pub struct GradedBundle<T> {
    group: Arc<FiniteGroup>,
    ambient: usize,
    fibers: Vec<MatrixSubspace<T>>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Axiom {
    ProductClosure,
    AdjointSymmetry,
    DirectSum,
    UnitFiberAlgebra,
    CStarNorm,
}

impl Axiom {
    pub const ALL: [Axiom; 5] = [
        Axiom::ProductClosure,
        Axiom::AdjointSymmetry,
        Axiom::DirectSum,
        Axiom::UnitFiberAlgebra,
        Axiom::CStarNorm,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Axiom::ProductClosure => "product_closure",
            Axiom::AdjointSymmetry => "adjoint_symmetry",
            Axiom::DirectSum => "direct_sum",
            Axiom::UnitFiberAlgebra => "unit_fiber_algebra",
            Axiom::CStarNorm => "cstar_norm",
        }
    }
}

impl fmt::Display for Axiom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// One failed axiom with its witnessing fiber pair.
#[derive(Clone, Debug, PartialEq)]
pub struct Violation {
    pub axiom: Axiom,
    pub s: usize,
    pub t: Option<usize>,
    pub residual: f64,
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct AxiomReport {
    pub violations: Vec<Violation>,
}

impl AxiomReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn holds(&self, axiom: Axiom) -> bool {
        self.violations.iter().all(|v| v.axiom != axiom)
    }
}

impl<T: Real> GradedBundle<T> {
    /// Wraps already orthonormalized fibers. Only shapes are checked here;
    /// use [`GradedBundle::verify`] for the axioms.
    pub fn new(group: Arc<FiniteGroup>, ambient: usize, fibers: Vec<MatrixSubspace<T>>) -> Result<Self, BundleError> {
        if fibers.len() != group.order() {
            return Err(BundleError::ShapeMismatch(format!(
                "{} fibers for a group of order {}",
                fibers.len(),
                group.order()
            )));
        }
        if let Some(f) = fibers.iter().find(|f| f.ambient_dim() != ambient) {
            return Err(BundleError::ShapeMismatch(format!(
                "fiber in M_{} inside M_{ambient}",
                f.ambient_dim()
            )));
        }
        Ok(GradedBundle { group, ambient, fibers })
    }

    /// Builds each fiber as the span of the given matrices.
    pub fn from_spanning(group: Arc<FiniteGroup>, ambient: usize, spans: &[Vec<Matrix<T>>], tol: T) -> Result<Self, BundleError> {
        let fibers = spans
            .iter()
            .map(|m| MatrixSubspace::orthonormalize(ambient, m, tol))
            .collect::<Result<Vec<_>, _>>()?;
        Self::new(group, ambient, fibers)
    }

    pub fn group(&self) -> &Arc<FiniteGroup> {
        &self.group
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient
    }

    pub fn fiber(&self, s: usize) -> &MatrixSubspace<T> {
        &self.fibers[s]
    }

    pub fn fibers(&self) -> &[MatrixSubspace<T>] {
        &self.fibers
    }

    pub fn fiber_dims(&self) -> Vec<usize> {
        self.fibers.iter().map(MatrixSubspace::dim).collect()
    }

    /// Dimension of the space of sections, `Σ_s dim A_s`.
    pub fn total_dim(&self) -> usize {
        self.fibers.iter().map(MatrixSubspace::dim).sum()
    }

    /// Unit of the unit fiber `A_e`, if it has one.
    pub fn unit(&self, tol: T) -> Option<Matrix<T>> {
        algebra_unit(&self.fibers[0], tol).ok()
    }

    pub fn verify(&self, tol: T) -> AxiomReport {
        let g = &self.group;
        let mut violations = Vec::new();
        let rel = |m: &Matrix<T>, f: &MatrixSubspace<T>| f.residual(m) / m.hs_norm().max(T::one());
        for s in g.elements() {
            for t in g.elements() {
                let target = &self.fibers[g.mul(s, t)];
                let mut worst = T::zero();
                for a in self.fibers[s].basis() {
                    for b in self.fibers[t].basis() {
                        worst = worst.max(rel(&(a * b), target));
                    }
                }
                if worst > tol {
                    violations.push(Violation { axiom: Axiom::ProductClosure, s, t: Some(t), residual: to_f64(worst) });
                }
            }
        }
        for s in g.elements() {
            let target = &self.fibers[g.inv(s)];
            let worst = self.fibers[s]
                .basis()
                .iter()
                .map(|a| rel(&a.adjoint(), target))
                .fold(T::zero(), T::max);
            let dims_differ = self.fibers[s].dim() != target.dim();
            if worst > tol || dims_differ {
                let residual = if dims_differ { f64::INFINITY } else { to_f64(worst) };
                violations.push(Violation { axiom: Axiom::AdjointSymmetry, s, t: Some(g.inv(s)), residual });
            }
        }
        let independence = self.independence();
        if independence < tol.sqrt() {
            violations.push(Violation { axiom: Axiom::DirectSum, s: 0, t: None, residual: to_f64(independence) });
        }
        if let Err(e) = check_star_algebra(&self.fibers[0], tol) {
            log::debug!("unit fiber check failed: {e}");
            violations.push(Violation { axiom: Axiom::UnitFiberAlgebra, s: 0, t: None, residual: f64::INFINITY });
        }
        let mut rng = seeded(0xc5a2);
        for s in g.elements() {
            let f = &self.fibers[s];
            let mut samples: Vec<Matrix<T>> = f.basis().to_vec();
            for _ in 0..4 {
                samples.push(f.combine(&random_coords(&mut rng, f.dim())));
            }
            let worst = samples
                .iter()
                .map(|a| {
                    let n = a.op_norm();
                    ((&a.adjoint() * a).op_norm() - n * n).abs() / (n * n).max(T::one())
                })
                .fold(T::zero(), T::max);
            if worst > tol.sqrt() {
                violations.push(Violation { axiom: Axiom::CStarNorm, s, t: None, residual: to_f64(worst) });
            }
        }
        AxiomReport { violations }
    }

    /// Smallest eigenvalue of the Gram matrix of all fiber bases together;
    /// zero when the fibers are linearly dependent.
    fn independence(&self) -> T {
        let all: Vec<&Matrix<T>> = self.fibers.iter().flat_map(|f| f.basis()).collect();
        let k = all.len();
        if k == 0 {
            return T::one();
        }
        let gram = Matrix::from_fn(k, k, |i, j| all[i].hs_inner(all[j]));
        hermitian_eigen(&gram).values[0]
    }
}

fn to_f64<T: Real>(x: T) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}
