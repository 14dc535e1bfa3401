//! Jacobi-type Hermitian eigensolver and one-sided Jacobi SVD.

use num_complex::Complex;
use num_traits::{One, Zero};

use crate::matrix::Matrix;
use crate::scalar::{rank_cut, Cx, Real};

const MAX_SWEEPS: usize = 100;

/// Eigenvalues in ascending order with the eigenvectors as matching columns.
#[derive(Clone, Debug)]
pub struct HermitianEigen<T> {
    pub values: Vec<T>,
    pub vectors: Matrix<T>,
}

/// Unitary 2x2 rotation `[[w11, w12], [w21, w22]]` that diagonalizes the
/// Hermitian matrix `[[a, b], [conj(b), d]]`.
fn jacobi_rotation<T: Real>(a: T, d: T, b: Cx<T>) -> [Cx<T>; 4] {
    let g = b.norm();
    let phase = if g > T::zero() { b.conj().unscale(g) } else { Cx::one() };
    let theta = (g + g).atan2(d - a) / T::lit(2.0);
    let (s, c) = theta.sin_cos();
    let c = Complex::new(c, T::zero());
    let s = Complex::new(s, T::zero());
    [c, s, -(phase * s), phase * c]
}

/// Cyclic Jacobi eigendecomposition of a Hermitian matrix. The input is
/// symmetrized first, so small non-Hermitian noise is ignored.
pub fn hermitian_eigen<T: Real>(m: &Matrix<T>) -> HermitianEigen<T> {
    assert!(m.is_square(), "eigendecomposition of a non-square matrix");
    let n = m.rows();
    let half = T::lit(0.5);
    let mut a = Matrix::from_fn(n, n, |i, j| (m[(i, j)] + m[(j, i)].conj()) * half);
    let mut v = Matrix::identity(n);
    let fro = a.hs_norm();
    if fro == T::zero() || n < 2 {
        let values = (0..n).map(|i| a[(i, i)].re).collect();
        return HermitianEigen { values, vectors: v };
    }
    let eps = T::epsilon();
    for _ in 0..MAX_SWEEPS {
        let mut off = T::zero();
        for p in 0..n {
            for q in (p + 1)..n {
                off = off + a[(p, q)].norm_sqr();
            }
        }
        if off.sqrt() <= eps * fro {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let b = a[(p, q)];
                if b.norm() <= eps * eps * fro {
                    continue;
                }
                let w = jacobi_rotation(a[(p, p)].re, a[(q, q)].re, b);
                // columns: A <- A W
                for i in 0..n {
                    let (x, y) = (a[(i, p)], a[(i, q)]);
                    a[(i, p)] = x * w[0] + y * w[2];
                    a[(i, q)] = x * w[1] + y * w[3];
                }
                // rows: A <- W^* A
                for j in 0..n {
                    let (x, y) = (a[(p, j)], a[(q, j)]);
                    a[(p, j)] = w[0].conj() * x + w[2].conj() * y;
                    a[(q, j)] = w[1].conj() * x + w[3].conj() * y;
                }
                a[(p, q)] = Cx::zero();
                a[(q, p)] = Cx::zero();
                for i in 0..n {
                    let (x, y) = (v[(i, p)], v[(i, q)]);
                    v[(i, p)] = x * w[0] + y * w[2];
                    v[(i, q)] = x * w[1] + y * w[3];
                }
            }
        }
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[(i, i)].re.partial_cmp(&a[(j, j)].re).unwrap());
    let values = order.iter().map(|&i| a[(i, i)].re).collect();
    let vectors = Matrix::from_fn(n, n, |i, j| v[(i, order[j])]);
    HermitianEigen { values, vectors }
}

/// Singular values (descending) and right singular vectors (columns of `v`).
#[derive(Clone, Debug)]
pub struct Svd<T> {
    pub values: Vec<T>,
    pub v: Matrix<T>,
}

/// One-sided Jacobi SVD over the columns of `a`.
pub fn svd<T: Real>(a: &Matrix<T>) -> Svd<T> {
    let (m, k) = (a.rows(), a.cols());
    let mut cols: Vec<Vec<Cx<T>>> = (0..k).map(|j| a.column(j)).collect();
    let mut v = Matrix::identity(k);
    let eps = T::epsilon();
    for _ in 0..MAX_SWEEPS {
        let mut rotated = false;
        for p in 0..k {
            for q in (p + 1)..k {
                let alpha: T = cols[p].iter().map(|x| x.norm_sqr()).sum();
                let beta: T = cols[q].iter().map(|x| x.norm_sqr()).sum();
                let gamma: Cx<T> = cols[p].iter().zip(&cols[q]).map(|(x, y)| x.conj() * y).sum();
                if gamma.norm() <= eps * (alpha * beta).sqrt() || gamma.is_zero() {
                    continue;
                }
                rotated = true;
                let w = jacobi_rotation(alpha, beta, gamma);
                for i in 0..m {
                    let (x, y) = (cols[p][i], cols[q][i]);
                    cols[p][i] = x * w[0] + y * w[2];
                    cols[q][i] = x * w[1] + y * w[3];
                }
                for i in 0..k {
                    let (x, y) = (v[(i, p)], v[(i, q)]);
                    v[(i, p)] = x * w[0] + y * w[2];
                    v[(i, q)] = x * w[1] + y * w[3];
                }
            }
        }
        if !rotated {
            break;
        }
    }
    let norms: Vec<T> = cols
        .iter()
        .map(|c| c.iter().map(|x| x.norm_sqr()).sum::<T>().sqrt())
        .collect();
    let mut order: Vec<usize> = (0..k).collect();
    order.sort_by(|&i, &j| norms[j].partial_cmp(&norms[i]).unwrap());
    Svd {
        values: order.iter().map(|&i| norms[i]).collect(),
        v: Matrix::from_fn(k, k, |i, j| v[(i, order[j])]),
    }
}

/// Numerical rank: singular values above `rank_cut(tol) * sigma_max`.
pub fn rank<T: Real>(a: &Matrix<T>, tol: T) -> usize {
    let s = svd(a);
    let top = s.values.first().copied().unwrap_or_else(T::zero);
    if top == T::zero() {
        return 0;
    }
    s.values.iter().filter(|&&x| x > rank_cut(tol) * top).count()
}

/// Orthonormal basis of the null space of `a` (as coefficient vectors).
pub fn null_space<T: Real>(a: &Matrix<T>, tol: T) -> Vec<Vec<Cx<T>>> {
    let k = a.cols();
    let s = svd(a);
    let top = s.values.first().copied().unwrap_or_else(T::zero);
    (0..k)
        .filter(|&j| top == T::zero() || s.values[j] <= rank_cut(tol) * top)
        .map(|j| s.v.column(j))
        .collect()
}

/// Minimum-norm least-squares solution of `a x = b` via the pseudo-inverse.
pub fn least_squares<T: Real>(a: &Matrix<T>, b: &[Cx<T>], tol: T) -> Vec<Cx<T>> {
    let k = a.cols();
    let s = svd(a);
    let top = s.values.first().copied().unwrap_or_else(T::zero);
    let mut x = vec![Cx::zero(); k];
    if top == T::zero() {
        return x;
    }
    // columns of a*v are sigma_j * u_j
    for j in 0..k {
        let sigma = s.values[j];
        if sigma <= rank_cut(tol) * top {
            continue;
        }
        let vj = s.v.column(j);
        let av = a.apply(&vj);
        let coeff: Cx<T> = av.iter().zip(b).map(|(u, y)| u.conj() * y).sum::<Cx<T>>()
            / Complex::new(sigma * sigma, T::zero());
        for i in 0..k {
            x[i] = x[i] + vj[i] * coeff;
        }
    }
    x
}

/// Principal square root and inverse square root of a positive definite matrix.
pub fn sqrt_and_inverse_sqrt<T: Real>(m: &Matrix<T>) -> (Matrix<T>, Matrix<T>) {
    let e = hermitian_eigen(m);
    let n = m.rows();
    let mut root = Matrix::zeros(n, n);
    let mut inv_root = Matrix::zeros(n, n);
    for j in 0..n {
        let lambda = e.values[j].max(T::zero());
        let col = e.vectors.column(j);
        let outer = Matrix::from_fn(n, n, |a, b| col[a] * col[b].conj());
        root.add_scaled(Complex::new(lambda.sqrt(), T::zero()), &outer);
        if lambda > T::zero() {
            inv_root.add_scaled(Complex::new(T::one() / lambda.sqrt(), T::zero()), &outer);
        }
    }
    (root, inv_root)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::cx;

    fn sample() -> Matrix<f64> {
        Matrix::from_vec(
            3,
            3,
            vec![
                cx(2.0, 0.0),
                cx(1.0, -1.0),
                cx(0.0, 0.5),
                cx(1.0, 1.0),
                cx(3.0, 0.0),
                cx(-2.0, 0.0),
                cx(0.0, -0.5),
                cx(-2.0, 0.0),
                cx(1.0, 0.0),
            ],
        )
    }

    #[test]
    fn eigen_reconstructs_hermitian_matrix() {
        let m = sample();
        let e = hermitian_eigen(&m);
        let d = Matrix::diagonal(&e.values.iter().map(|&x| cx(x, 0.0)).collect::<Vec<_>>());
        let back = &(&e.vectors * &d) * &e.vectors.adjoint();
        assert!((&back - &m).max_abs() < 1e-12);
        let vv = &e.vectors.adjoint() * &e.vectors;
        assert!((&vv - &Matrix::identity(3)).max_abs() < 1e-12);
        assert!(e.values.windows(2).all(|w| w[0] <= w[1]));
    }

    #[test]
    fn eigen_trace_matches() {
        let m = sample();
        let sum: f64 = hermitian_eigen(&m).values.iter().sum();
        assert!((sum - m.trace().re).abs() < 1e-12);
    }

    #[test]
    fn svd_matches_eigen_of_gram() {
        let m = sample();
        let s = svd(&m);
        let mut g = hermitian_eigen(&(&m.adjoint() * &m)).values;
        g.reverse();
        for (sv, ev) in s.values.iter().zip(&g) {
            assert!((sv * sv - ev).abs() < 1e-10);
        }
    }

    #[test]
    fn null_space_and_least_squares() {
        // rank-1 map c -> (c0 + c1, 2c0 + 2c1)
        let a = Matrix::<f64>::from_real(2, 2, &[1.0, 1.0, 2.0, 2.0]);
        let ns = null_space(&a, 1e-9);
        assert_eq!(ns.len(), 1);
        assert!(a.apply(&ns[0]).iter().all(|x| x.norm() < 1e-12));
        assert_eq!(rank(&a, 1e-9), 1);
        let x = least_squares(&a, &[cx(2.0, 0.0), cx(4.0, 0.0)], 1e-9);
        let r = a.apply(&x);
        assert!((r[0] - cx(2.0, 0.0)).norm() < 1e-12);
        assert!((r[1] - cx(4.0, 0.0)).norm() < 1e-12);
        // minimum-norm solution is (1, 1)
        assert!((x[0] - cx(1.0, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn square_roots() {
        let m = &sample().adjoint() * &sample();
        let (r, ir) = sqrt_and_inverse_sqrt(&m);
        assert!((&(&r * &r) - &m).max_abs() < 1e-10);
        assert!((&(&r * &ir) - &Matrix::identity(3)).max_abs() < 1e-10);
    }
}
