use std::sync::Arc;

use num_traits::Zero;

use crate::bundle::{BundleError, GradedBundle};
use crate::group::FiniteGroup;
use crate::matrix::eigen::{hermitian_eigen, least_squares, sqrt_and_inverse_sqrt};
use crate::matrix::{Matrix, MatrixSubspace};
use crate::scalar::{Cx, Real};

/// A Fell bundle given by structure constants on fiber bases: products
/// `A_s × A_t → A_st`, an antilinear involution `A_s → A_{s⁻¹}` and a
/// positive functional on `A_e`.
#[derive(Clone, Debug)]
pub struct AbstractBundle<T> {
    group: Arc<FiniteGroup>,
    dims: Vec<usize>,
    // product[s * |G| + t][i * dims[t] + j] = coordinates of e_i^s e_j^t in A_st
    product: Vec<Vec<Vec<Cx<T>>>>,
    // star[s][i] = coordinates of (e_i^s)* in A_{s⁻¹}
    star: Vec<Vec<Vec<Cx<T>>>>,
    functional: Vec<Cx<T>>,
}

impl<T: Real> AbstractBundle<T> {
    pub fn new(
        group: Arc<FiniteGroup>,
        dims: Vec<usize>,
        product: impl Fn(usize, usize, usize, usize) -> Vec<Cx<T>>,
        star: impl Fn(usize, usize) -> Vec<Cx<T>>,
        functional: Vec<Cx<T>>,
    ) -> Result<Self, BundleError> {
        let order = group.order();
        if dims.len() != order {
            return Err(BundleError::ShapeMismatch(format!("{} fiber dimensions for order {order}", dims.len())));
        }
        if functional.len() != dims[0] {
            return Err(BundleError::ShapeMismatch("functional length differs from dim A_e".into()));
        }
        let mut table = Vec::with_capacity(order * order);
        for s in 0..order {
            for t in 0..order {
                let st = group.mul(s, t);
                let mut entry = Vec::with_capacity(dims[s] * dims[t]);
                for i in 0..dims[s] {
                    for j in 0..dims[t] {
                        let c = product(s, i, t, j);
                        if c.len() != dims[st] {
                            return Err(BundleError::ShapeMismatch(format!("product ({s},{i})({t},{j})")));
                        }
                        entry.push(c);
                    }
                }
                table.push(entry);
            }
        }
        let mut stars = Vec::with_capacity(order);
        for s in 0..order {
            let mut entry = Vec::with_capacity(dims[s]);
            for i in 0..dims[s] {
                let c = star(s, i);
                if c.len() != dims[group.inv(s)] {
                    return Err(BundleError::ShapeMismatch(format!("involution of ({s},{i})")));
                }
                entry.push(c);
            }
            stars.push(entry);
        }
        Ok(AbstractBundle { group, dims, product: table, star: stars, functional })
    }

    /// Reads structure constants off a concrete bundle, with the trace as functional.
    pub fn from_graded(bundle: &GradedBundle<T>) -> Self {
        let g = bundle.group().clone();
        let f = |s: usize| bundle.fiber(s);
        let functional = f(0).basis().iter().map(Matrix::trace).collect();
        Self::new(
            g.clone(),
            bundle.fiber_dims(),
            |s, i, t, j| f(g.mul(s, t)).coords(&(&f(s).basis()[i] * &f(t).basis()[j])),
            |s, i| f(g.inv(s)).coords(&f(s).basis()[i].adjoint()),
            functional,
        )
        .expect("concrete bundle has consistent shapes")
    }

    pub fn group(&self) -> &Arc<FiniteGroup> {
        &self.group
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn total_dim(&self) -> usize {
        self.dims.iter().sum()
    }

    /// Product of `x ∈ A_s` and `y ∈ A_t`, in coordinates of `A_st`.
    pub fn mul(&self, s: usize, x: &[Cx<T>], t: usize, y: &[Cx<T>]) -> Vec<Cx<T>> {
        let st = self.group.mul(s, t);
        let mut out = vec![Cx::zero(); self.dims[st]];
        let entry = &self.product[s * self.group.order() + t];
        for (i, xi) in x.iter().enumerate() {
            if xi.is_zero() {
                continue;
            }
            for (j, yj) in y.iter().enumerate() {
                let c = *xi * *yj;
                if c.is_zero() {
                    continue;
                }
                for (o, v) in out.iter_mut().zip(&entry[i * self.dims[t] + j]) {
                    *o = *o + c * v;
                }
            }
        }
        out
    }

    /// Adjoint of `x ∈ A_s`, in coordinates of `A_{s⁻¹}`.
    pub fn adjoint(&self, s: usize, x: &[Cx<T>]) -> Vec<Cx<T>> {
        let mut out = vec![Cx::zero(); self.dims[self.group.inv(s)]];
        for (i, xi) in x.iter().enumerate() {
            for (o, v) in out.iter_mut().zip(&self.star[s][i]) {
                *o = *o + xi.conj() * v;
            }
        }
        out
    }

    pub fn functional(&self, x: &[Cx<T>]) -> Cx<T> {
        x.iter().zip(&self.functional).map(|(a, b)| a * b).sum()
    }

    /// Largest residual among associativity, involutivity and
    /// antimultiplicativity on basis elements.
    pub fn axiom_residual(&self) -> T {
        let g = &self.group;
        let basis = |s: usize, i: usize| {
            let mut v = vec![Cx::zero(); self.dims[s]];
            v[i] = Cx::new(T::one(), T::zero());
            v
        };
        let diff = |a: &[Cx<T>], b: &[Cx<T>]| a.iter().zip(b).map(|(x, y)| (x - y).norm()).fold(T::zero(), T::max);
        let mut worst = T::zero();
        for s in g.elements() {
            for i in 0..self.dims[s] {
                let x = basis(s, i);
                worst = worst.max(diff(&self.adjoint(g.inv(s), &self.adjoint(s, &x)), &x));
                for t in g.elements() {
                    for j in 0..self.dims[t] {
                        let y = basis(t, j);
                        let xy = self.mul(s, &x, t, &y);
                        let lhs = self.adjoint(g.mul(s, t), &xy);
                        let rhs = self.mul(g.inv(t), &self.adjoint(t, &y), g.inv(s), &self.adjoint(s, &x));
                        worst = worst.max(diff(&lhs, &rhs));
                        for u in g.elements() {
                            for k in 0..self.dims[u] {
                                let z = basis(u, k);
                                let left = self.mul(g.mul(s, t), &xy, u, &z);
                                let right = self.mul(s, &x, g.mul(t, u), &self.mul(t, &y, u, &z));
                                worst = worst.max(diff(&left, &right));
                            }
                        }
                    }
                }
            }
        }
        worst
    }

    /// Left regular representation on the section space, made a
    /// *-representation through the inner product `⟨a, b⟩ = φ(E(a*b))`.
    pub fn concretize(&self, tol: T) -> Result<Concretization<T>, BundleError> {
        let g = &self.group;
        let order = g.order();
        let mut offsets = Vec::with_capacity(order);
        let mut total = 0;
        for &d in &self.dims {
            offsets.push(total);
            total += d;
        }
        let basis = |s: usize, i: usize| {
            let mut v = vec![Cx::zero(); self.dims[s]];
            v[i] = Cx::new(T::one(), T::zero());
            v
        };
        // the Gram matrix is block diagonal: E(a*b) vanishes unless both lie in the same fiber
        let mut gram = Matrix::zeros(total, total);
        for s in 0..order {
            for i in 0..self.dims[s] {
                let xs = self.adjoint(s, &basis(s, i));
                for j in 0..self.dims[s] {
                    let p = self.mul(g.inv(s), &xs, s, &basis(s, j));
                    gram[(offsets[s] + i, offsets[s] + j)] = self.functional(&p);
                }
            }
        }
        if total > 0 {
            let eig = hermitian_eigen(&gram);
            let top = eig.values[total - 1];
            if !(top > T::zero()) || eig.values[0] <= tol * top || !gram.is_hermitian(tol.sqrt() * top) {
                return Err(BundleError::DegenerateFunctional);
            }
        }
        let (root, inv_root) = sqrt_and_inverse_sqrt(&gram);
        let mut images = Vec::with_capacity(order);
        for s in 0..order {
            let mut fiber = Vec::with_capacity(self.dims[s]);
            for i in 0..self.dims[s] {
                let x = basis(s, i);
                let mut left = Matrix::zeros(total, total);
                for t in 0..order {
                    let st = g.mul(s, t);
                    for j in 0..self.dims[t] {
                        let p = self.mul(s, &x, t, &basis(t, j));
                        for (l, v) in p.iter().enumerate() {
                            left[(offsets[st] + l, offsets[t] + j)] = *v;
                        }
                    }
                }
                fiber.push(&(&root * &left) * &inv_root);
            }
            images.push(fiber);
        }
        let spans = images
            .iter()
            .map(|f| MatrixSubspace::orthonormalize(total, f, tol))
            .collect::<Result<Vec<_>, _>>()?;
        for (s, f) in spans.iter().enumerate() {
            if f.dim() != self.dims[s] {
                return Err(BundleError::DegenerateFunctional);
            }
        }
        let bundle = GradedBundle::new(g.clone(), total, spans)?;
        Ok(Concretization { bundle, images, tol })
    }
}

/// A concretized bundle together with the images of the abstract fiber bases.
#[derive(Clone, Debug)]
pub struct Concretization<T> {
    pub bundle: GradedBundle<T>,
    images: Vec<Vec<Matrix<T>>>,
    tol: T,
}

impl<T: Real> Concretization<T> {
    /// Image of the abstract basis element `e_i^s`.
    pub fn image(&self, s: usize, i: usize) -> &Matrix<T> {
        &self.images[s][i]
    }

    /// Matrix realizing the abstract element with coordinates `coords` in `A_s`.
    pub fn realize(&self, s: usize, coords: &[Cx<T>]) -> Matrix<T> {
        let n = self.bundle.ambient_dim();
        let mut m = Matrix::zeros(n, n);
        for (c, b) in coords.iter().zip(&self.images[s]) {
            if !c.is_zero() {
                m.add_scaled(*c, b);
            }
        }
        m
    }

    /// Abstract coordinates of a matrix in the realized fiber `s`.
    pub fn coords(&self, s: usize, m: &Matrix<T>) -> Vec<Cx<T>> {
        let f = self.bundle.fiber(s);
        let k = f.dim();
        // images are a basis of the fiber, though not an orthonormal one
        let sys = Matrix::from_fn(f.dim(), k, |r, j| f.coords(&self.images[s][j])[r]);
        least_squares(&sys, &f.coords(m), self.tol)
    }
}
