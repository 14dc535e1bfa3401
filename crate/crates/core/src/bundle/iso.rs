use crate::bundle::{BundleError, GradedBundle};
use crate::matrix::{eigen::rank, Matrix};
use crate::scalar::{random_coords, seeded, Real};

/// Largest residuals of the isomorphism conditions, each relative to
/// `max(1, ‖·‖)`.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct IsoReport {
    pub bijective: bool,
    pub fiber_membership: f64,
    pub multiplicative: f64,
    pub involutive: f64,
    pub isometric: f64,
}

impl IsoReport {
    pub fn holds(&self, tol: f64) -> bool {
        self.bijective && self.max_residual() <= tol
    }

    pub fn max_residual(&self) -> f64 {
        self.fiber_membership.max(self.multiplicative).max(self.involutive).max(self.isometric)
    }
}

/// Checks that the fiberwise linear maps `phi(s, ·): A_s → B_s` form a Fell
/// bundle isomorphism. `phi` is evaluated on fiber bases and on seeded
/// random combinations.
pub fn verify_bundle_isomorphism<T: Real>(
    a: &GradedBundle<T>,
    b: &GradedBundle<T>,
    phi: impl Fn(usize, &Matrix<T>) -> Matrix<T>,
    tol: T,
) -> Result<IsoReport, BundleError> {
    if **a.group() != **b.group() {
        return Err(BundleError::ShapeMismatch("bundles over different groups".into()));
    }
    let g = a.group();
    let rel = |x: T, scale: T| (x / scale.max(T::one())).to_f64().unwrap_or(f64::INFINITY);
    let mut report = IsoReport { bijective: true, ..IsoReport::default() };
    let mut images: Vec<Vec<Matrix<T>>> = Vec::with_capacity(g.order());
    for s in g.elements() {
        let mut fiber_images = Vec::with_capacity(a.fiber(s).dim());
        for x in a.fiber(s).basis() {
            let y = phi(s, x);
            if y.rows() != b.ambient_dim() || y.cols() != b.ambient_dim() {
                return Err(BundleError::ShapeMismatch(format!("phi_{s} output has the wrong size")));
            }
            report.fiber_membership = report.fiber_membership.max(rel(b.fiber(s).residual(&y), y.hs_norm()));
            fiber_images.push(y);
        }
        let coords = Matrix::from_fn(b.fiber(s).dim(), fiber_images.len(), |i, j| b.fiber(s).coords(&fiber_images[j])[i]);
        if a.fiber(s).dim() != b.fiber(s).dim() || (a.fiber(s).dim() > 0 && rank(&coords, tol) != a.fiber(s).dim()) {
            report.bijective = false;
        }
        images.push(fiber_images);
    }
    for s in g.elements() {
        let inv = g.inv(s);
        for (x, px) in a.fiber(s).basis().iter().zip(&images[s]) {
            let lhs = phi(inv, &x.adjoint());
            report.involutive = report.involutive.max(rel((&lhs - &px.adjoint()).hs_norm(), px.hs_norm()));
            for t in g.elements() {
                let st = g.mul(s, t);
                for (y, py) in a.fiber(t).basis().iter().zip(&images[t]) {
                    let direct = phi(st, &(x * y));
                    let composed = px * py;
                    report.multiplicative = report.multiplicative.max(rel((&direct - &composed).hs_norm(), composed.hs_norm()));
                }
            }
        }
    }
    let mut rng = seeded(0x150);
    for s in g.elements() {
        let f = a.fiber(s);
        let mut samples = f.basis().to_vec();
        for _ in 0..4 {
            samples.push(f.combine(&random_coords(&mut rng, f.dim())));
        }
        for x in &samples {
            let n = x.op_norm();
            report.isometric = report.isometric.max(rel((phi(s, x).op_norm() - n).abs(), n));
        }
    }
    Ok(report)
}

/// `true` iff [`verify_bundle_isomorphism`] finds every residual within `tol`.
pub fn isomorphic<T: Real>(
    a: &GradedBundle<T>,
    b: &GradedBundle<T>,
    phi: impl Fn(usize, &Matrix<T>) -> Matrix<T>,
    tol: T,
) -> Result<bool, BundleError> {
    let tol64 = tol.to_f64().unwrap_or(0.0);
    Ok(verify_bundle_isomorphism(a, b, phi, tol)?.holds(tol64))
}
