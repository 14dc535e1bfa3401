//! Structure of finite-dimensional matrix *-algebras: closure checks, units,
//! centers and minimal central projections.

use num_complex::Complex;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::matrix::eigen::{hermitian_eigen, least_squares, null_space};
use crate::matrix::{Matrix, MatrixError, MatrixSubspace};
use crate::scalar::{Cx, Real};

/// Multiplication table of a subspace in its own orthonormal basis:
/// `a_i a_j ≈ Σ_l s[i][j][l] a_l`.
#[derive(Clone, Debug)]
pub struct StructureConstants<T> {
    dim: usize,
    table: Vec<Cx<T>>,
    /// Largest relative distance of a basis product from the subspace.
    pub closure_residual: T,
}

impl<T: Real> StructureConstants<T> {
    pub fn new(a: &MatrixSubspace<T>) -> Self {
        let k = a.dim();
        let mut table = Vec::with_capacity(k * k * k);
        let mut worst = T::zero();
        for x in a.basis() {
            for y in a.basis() {
                let p = x * y;
                let c = a.coords(&p);
                let r = (&p - &a.combine(&c)).hs_norm() / p.hs_norm().max(T::one());
                worst = worst.max(r);
                table.extend(c);
            }
        }
        StructureConstants { dim: k, table, closure_residual: worst }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, i: usize, j: usize, l: usize) -> Cx<T> {
        self.table[(i * self.dim + j) * self.dim + l]
    }
}

/// Fails with `NotAnAlgebra` unless `a` is closed under products and adjoints.
pub fn check_star_algebra<T: Real>(a: &MatrixSubspace<T>, tol: T) -> Result<StructureConstants<T>, MatrixError> {
    let sc = StructureConstants::new(a);
    if sc.closure_residual > tol {
        return Err(MatrixError::NotAnAlgebra(format!(
            "product leaves the span (residual {:e})",
            sc.closure_residual.to_f64().unwrap_or(f64::NAN)
        )));
    }
    let adj = a.excess(&a.adjoint_span());
    if adj > tol {
        return Err(MatrixError::NotAnAlgebra(format!(
            "adjoint leaves the span (residual {:e})",
            adj.to_f64().unwrap_or(f64::NAN)
        )));
    }
    Ok(sc)
}

fn unit_from_constants<T: Real>(a: &MatrixSubspace<T>, sc: &StructureConstants<T>, tol: T) -> Result<Matrix<T>, MatrixError> {
    let k = sc.dim();
    let n = a.ambient_dim();
    if k == 0 {
        return Ok(Matrix::zeros(n, n));
    }
    // e = Σ c_i a_i with e a_j = a_j and a_j e = a_j
    let mut sys = Matrix::zeros(2 * k * k, k);
    let mut rhs = vec![Cx::zero(); 2 * k * k];
    for j in 0..k {
        for l in 0..k {
            let row = j * k + l;
            for i in 0..k {
                sys[(row, i)] = sc.get(i, j, l);
                sys[(k * k + row, i)] = sc.get(j, i, l);
            }
            if j == l {
                rhs[row] = Cx::one();
                rhs[k * k + row] = Cx::one();
            }
        }
    }
    let c = least_squares(&sys, &rhs, tol);
    let unit = a.combine(&c);
    for b in a.basis() {
        let left = (&(&unit * b) - b).hs_norm();
        let right = (&(b * &unit) - b).hs_norm();
        if left.max(right) > tol.sqrt() {
            return Err(MatrixError::NotUnital);
        }
    }
    Ok(unit)
}

/// The unit of a product-closed subspace, if it has one.
pub fn algebra_unit<T: Real>(a: &MatrixSubspace<T>, tol: T) -> Result<Matrix<T>, MatrixError> {
    let sc = StructureConstants::new(a);
    if sc.closure_residual > tol {
        return Err(MatrixError::NotAnAlgebra("product leaves the span".into()));
    }
    unit_from_constants(a, &sc, tol)
}

fn center_from_constants<T: Real>(a: &MatrixSubspace<T>, sc: &StructureConstants<T>, tol: T) -> Result<MatrixSubspace<T>, MatrixError> {
    let k = sc.dim();
    if k == 0 {
        return Ok(MatrixSubspace::zero(a.ambient_dim()));
    }
    let mut sys = Matrix::zeros(k * k, k);
    for j in 0..k {
        for l in 0..k {
            for i in 0..k {
                sys[(j * k + l, i)] = sc.get(i, j, l) - sc.get(j, i, l);
            }
        }
    }
    let mats: Vec<Matrix<T>> = null_space(&sys, tol).iter().map(|c| a.combine(c)).collect();
    MatrixSubspace::orthonormalize(a.ambient_dim(), &mats, tol)
}

/// Center `{z ∈ A : z b = b z for all b ∈ A}` of a product-closed subspace.
pub fn center<T: Real>(a: &MatrixSubspace<T>, tol: T) -> Result<MatrixSubspace<T>, MatrixError> {
    let sc = StructureConstants::new(a);
    if sc.closure_residual > tol {
        return Err(MatrixError::NotAnAlgebra("product leaves the span".into()));
    }
    center_from_constants(a, &sc, tol)
}

/// Number of simple summands of a unital *-algebra, i.e. the dimension of its center.
pub fn wedderburn_block_count<T: Real>(a: &MatrixSubspace<T>, tol: T) -> Result<usize, MatrixError> {
    let sc = StructureConstants::new(a);
    if sc.closure_residual > tol {
        return Err(MatrixError::NotAnAlgebra("product leaves the span".into()));
    }
    unit_from_constants(a, &sc, tol)?;
    let adj = a.excess(&a.adjoint_span());
    if adj > tol {
        return Err(MatrixError::NotAnAlgebra("adjoint leaves the span".into()));
    }
    Ok(center_from_constants(a, &sc, tol)?.dim())
}

/// Minimal central projections of a *-algebra, one per simple summand,
/// ordered by the lowest ambient basis index in their range.
pub fn minimal_central_projections<T: Real>(a: &MatrixSubspace<T>, tol: T) -> Result<Vec<Matrix<T>>, MatrixError> {
    let sc = check_star_algebra(a, tol)?;
    let unit = unit_from_constants(a, &sc, tol)?;
    let z = center_from_constants(a, &sc, tol)?;
    let blocks = z.dim();
    let n = a.ambient_dim();
    if blocks == 0 {
        return Ok(Vec::new());
    }
    if blocks == 1 {
        return Ok(vec![unit]);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    for _attempt in 0..8 {
        // generic self-adjoint central element; its eigenvalue clusters are the blocks
        let mut h = Matrix::zeros(n, n);
        for b in z.basis() {
            let r = T::lit(rng.gen_range(1.0..2.0));
            let herm = b + &b.adjoint();
            h.add_scaled(Complex::new(r, T::zero()), &herm);
            let r2 = T::lit(rng.gen_range(1.0..2.0));
            let skew = (b - &b.adjoint()).scale(Complex::new(T::zero(), r2));
            h.add_scaled(Cx::one(), &skew);
        }
        let scale = h.op_norm().max(T::one());
        let off = -(scale + scale + T::one());
        let complement = &Matrix::identity(n) - &unit;
        h.add_scaled(Complex::new(off, T::zero()), &complement);
        let eig = hermitian_eigen(&h);
        let gap = T::lit(1e-6) * scale;
        let mut clusters: Vec<Vec<usize>> = Vec::new();
        for j in 0..n {
            match clusters.last_mut() {
                Some(c) if eig.values[j] - eig.values[*c.last().unwrap()] <= gap => c.push(j),
                _ => clusters.push(vec![j]),
            }
        }
        let mut projections = Vec::new();
        for c in &clusters {
            if (eig.values[c[0]] - off).abs() <= scale * T::lit(0.5) {
                continue;
            }
            let mut p = Matrix::zeros(n, n);
            for &j in c {
                let v = eig.vectors.column(j);
                p.add_scaled(Cx::one(), &Matrix::from_fn(n, n, |x, y| v[x] * v[y].conj()));
            }
            projections.push(p);
        }
        let all_central = projections.len() == blocks
            && projections.iter().all(|p| {
                a.contains(p, tol.sqrt()).unwrap_or(false)
                    && a.basis().iter().all(|b| (&(p * b) - &(b * p)).hs_norm() <= tol.sqrt())
            });
        if all_central {
            let key = |p: &Matrix<T>| {
                (0..n)
                    .find(|&i| p[(i, i)].re > T::lit(0.5))
                    .unwrap_or(n)
            };
            projections.sort_by_key(|p| key(p));
            return Ok(projections);
        }
    }
    Err(MatrixError::NotAnAlgebra("could not separate central summands".into()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::{regular_representations, FiniteGroup};
    use crate::matrix::pauli_x;

    const TOL: f64 = 1e-9;

    fn full(n: usize) -> MatrixSubspace<f64> {
        let units: Vec<_> = (0..n)
            .flat_map(|i| (0..n).map(move |j| Matrix::unit(n, i, j)))
            .collect();
        MatrixSubspace::orthonormalize(n, &units, TOL).unwrap()
    }

    fn diagonal(n: usize) -> MatrixSubspace<f64> {
        let units: Vec<_> = (0..n).map(|i| Matrix::unit(n, i, i)).collect();
        MatrixSubspace::orthonormalize(n, &units, TOL).unwrap()
    }

    #[test]
    fn block_counts() {
        assert_eq!(wedderburn_block_count(&full(2), TOL).unwrap(), 1);
        assert_eq!(wedderburn_block_count(&diagonal(2), TOL).unwrap(), 2);
    }

    /// Brute-force oracle: the center of ℂ[G] is spanned by class sums, so
    /// its dimension is the number of conjugacy classes.
    fn conjugacy_class_count(g: &FiniteGroup) -> usize {
        let mut seen = vec![false; g.order()];
        let mut classes = 0;
        for x in 0..g.order() {
            if seen[x] {
                continue;
            }
            classes += 1;
            for s in 0..g.order() {
                seen[g.mul(g.mul(s, x), g.inv(s))] = true;
            }
        }
        classes
    }

    #[test]
    fn group_algebra_of_s3_has_three_blocks() {
        let g = FiniteGroup::symmetric(3).unwrap();
        let (left, _) = regular_representations::<f64>(&g);
        let a = MatrixSubspace::orthonormalize(6, &left, TOL).unwrap();
        assert_eq!(conjugacy_class_count(&g), 3);
        assert_eq!(wedderburn_block_count(&a, TOL).unwrap(), 3);
        let p = minimal_central_projections(&a, TOL).unwrap();
        assert_eq!(p.len(), 3);
        let sum = p.iter().fold(Matrix::zeros(6, 6), |acc, x| &acc + x);
        assert!((&sum - &Matrix::identity(6)).max_abs() < 1e-8);
        let mut ranks: Vec<f64> = p.iter().map(|x| x.trace().re.round()).collect();
        ranks.sort_by(|a, b| a.partial_cmp(b).unwrap());
        assert_eq!(ranks, vec![1.0, 1.0, 4.0]);
    }

    #[test]
    fn non_algebras_rejected() {
        // E12 alone: product-closed (E12² = 0) but without a unit
        let nil = MatrixSubspace::orthonormalize(2, &[Matrix::<f64>::unit(2, 0, 1)], TOL).unwrap();
        assert_eq!(wedderburn_block_count(&nil, TOL), Err(MatrixError::NotUnital));
        // span{I, E12}: unital, product-closed, not adjoint-closed
        let tri = MatrixSubspace::orthonormalize(2, &[Matrix::identity(2), Matrix::unit(2, 0, 1)], TOL).unwrap();
        assert!(matches!(wedderburn_block_count(&tri, TOL), Err(MatrixError::NotAnAlgebra(_))));
        // span{E12, E21} is not product-closed
        let off = MatrixSubspace::orthonormalize(2, &[Matrix::unit(2, 0, 1), Matrix::unit(2, 1, 0)], TOL).unwrap();
        assert!(matches!(wedderburn_block_count(&off, TOL), Err(MatrixError::NotAnAlgebra(_))));
    }

    #[test]
    fn corner_algebra_unit_is_a_projection() {
        // M_2 sitting in the top-left corner of M_3
        let units: Vec<_> = (0..2)
            .flat_map(|i| (0..2).map(move |j| Matrix::<f64>::unit(3, i, j)))
            .collect();
        let a = MatrixSubspace::orthonormalize(3, &units, TOL).unwrap();
        let u = algebra_unit(&a, TOL).unwrap();
        let expected = &Matrix::unit(3, 0, 0) + &Matrix::unit(3, 1, 1);
        assert!((&u - &expected).max_abs() < 1e-10);
        assert_eq!(minimal_central_projections(&a, TOL).unwrap().len(), 1);
    }

    #[test]
    fn commutative_pauli_algebra() {
        let a = MatrixSubspace::orthonormalize(2, &[Matrix::identity(2), pauli_x()], TOL).unwrap();
        assert_eq!(center(&a, TOL).unwrap().dim(), 2);
        let p = minimal_central_projections(&a, TOL).unwrap();
        assert_eq!(p.len(), 2);
        for q in &p {
            assert!((&(q * q) - q).max_abs() < 1e-10);
        }
    }
}
