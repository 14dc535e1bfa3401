use std::fmt;
use std::ops::{Add, Index, IndexMut, Mul, Neg, Sub};

use num_complex::Complex;
use num_traits::{One, Zero};

use crate::matrix::eigen::hermitian_eigen;
use crate::scalar::{real, Cx, Real};

/// Dense complex matrix stored row-major.
#[derive(Clone, PartialEq)]
pub struct Matrix<T> {
    rows: usize,
    cols: usize,
    data: Vec<Cx<T>>,
}

impl<T: Real> Matrix<T> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![Cx::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = Cx::one();
        }
        m
    }

    /// Matrix unit `E_{ij}` in `M_n`.
    pub fn unit(n: usize, i: usize, j: usize) -> Self {
        let mut m = Self::zeros(n, n);
        m.data[i * n + j] = Cx::one();
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Cx<T>) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Matrix { rows, cols, data }
    }

    /// Builds a matrix from row-major data. Panics if the length is wrong.
    pub fn from_vec(rows: usize, cols: usize, data: Vec<Cx<T>>) -> Self {
        assert_eq!(data.len(), rows * cols, "matrix data length mismatch");
        Matrix { rows, cols, data }
    }

    /// Real-valued matrix from row-major `f64` literals.
    pub fn from_real(rows: usize, cols: usize, data: &[f64]) -> Self {
        assert_eq!(data.len(), rows * cols, "matrix data length mismatch");
        Matrix {
            rows,
            cols,
            data: data.iter().map(|&x| real(T::lit(x))).collect(),
        }
    }

    /// Returns `None` when the rows are ragged.
    pub fn from_rows(rows: &[Vec<Cx<T>>]) -> Option<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return None;
        }
        Some(Matrix {
            rows: r,
            cols: c,
            data: rows.iter().flatten().copied().collect(),
        })
    }

    pub fn diagonal(entries: &[Cx<T>]) -> Self {
        let n = entries.len();
        let mut m = Self::zeros(n, n);
        for (i, &e) in entries.iter().enumerate() {
            m.data[i * n + i] = e;
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn as_slice(&self) -> &[Cx<T>] {
        &self.data
    }

    pub fn as_mut_slice(&mut self) -> &mut [Cx<T>] {
        &mut self.data
    }

    pub fn row(&self, i: usize) -> &[Cx<T>] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<Cx<T>> {
        (0..self.rows).map(|i| self.data[i * self.cols + j]).collect()
    }

    pub fn adjoint(&self) -> Self {
        Matrix::from_fn(self.cols, self.rows, |i, j| self[(j, i)].conj())
    }

    pub fn transpose(&self) -> Self {
        Matrix::from_fn(self.cols, self.rows, |i, j| self[(j, i)])
    }

    pub fn trace(&self) -> Cx<T> {
        (0..self.rows.min(self.cols))
            .map(|i| self.data[i * self.cols + i])
            .sum()
    }

    pub fn scale(&self, c: Cx<T>) -> Self {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|&x| x * c).collect(),
        }
    }

    pub fn scale_real(&self, c: T) -> Self {
        self.scale(real(c))
    }

    /// `self += c * other`.
    pub fn add_scaled(&mut self, c: Cx<T>, other: &Matrix<T>) {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        if c.is_zero() {
            return;
        }
        for (x, &y) in self.data.iter_mut().zip(&other.data) {
            if !y.is_zero() {
                *x = *x + c * y;
            }
        }
    }

    /// Kronecker product, `self` indexing the outer blocks.
    pub fn kron(&self, other: &Matrix<T>) -> Self {
        let rows = self.rows * other.rows;
        let cols = self.cols * other.cols;
        let mut out = Matrix::zeros(rows, cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                let a = self[(i, j)];
                if a.is_zero() {
                    continue;
                }
                for k in 0..other.rows {
                    for l in 0..other.cols {
                        let b = other[(k, l)];
                        if !b.is_zero() {
                            out.data[(i * other.rows + k) * cols + j * other.cols + l] = a * b;
                        }
                    }
                }
            }
        }
        out
    }

    /// Hilbert–Schmidt inner product `trace(self^* other)`, conjugate-linear in `self`.
    pub fn hs_inner(&self, other: &Matrix<T>) -> Cx<T> {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        self.data
            .iter()
            .zip(&other.data)
            .filter(|(a, _)| !a.is_zero())
            .map(|(a, b)| a.conj() * b)
            .sum()
    }

    pub fn hs_norm(&self) -> T {
        self.data.iter().map(|x| x.norm_sqr()).sum::<T>().sqrt()
    }

    pub fn max_abs(&self) -> T {
        self.data
            .iter()
            .map(|x| x.norm())
            .fold(T::zero(), |a, b| a.max(b))
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|x| x.re.is_finite() && x.im.is_finite())
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| x.is_zero())
    }

    /// Operator norm (largest singular value).
    pub fn op_norm(&self) -> T {
        if self.data.is_empty() {
            return T::zero();
        }
        let gram = if self.rows >= self.cols {
            &self.adjoint() * self
        } else {
            self * &self.adjoint()
        };
        let top = hermitian_eigen(&gram)
            .values
            .last()
            .copied()
            .unwrap_or_else(T::zero);
        top.max(T::zero()).sqrt()
    }

    pub fn is_hermitian(&self, tol: T) -> bool {
        self.is_square() && (self - &self.adjoint()).max_abs() <= tol
    }

    /// Positive semidefiniteness up to `tol`: Hermitian within `tol` and the
    /// smallest eigenvalue at least `-tol * op_norm`.
    pub fn is_psd(&self, tol: T) -> bool {
        if !self.is_square() {
            return false;
        }
        let scale = self.op_norm();
        if (self - &self.adjoint()).op_norm() > tol * scale.max(T::one()) {
            return false;
        }
        let min = hermitian_eigen(self)
            .values
            .first()
            .copied()
            .unwrap_or_else(T::zero);
        min >= -tol * scale
    }

    pub fn checked_mul(&self, other: &Matrix<T>) -> Option<Matrix<T>> {
        (self.cols == other.rows).then(|| self * other)
    }

    /// Applies the matrix to a column vector.
    pub fn apply(&self, v: &[Cx<T>]) -> Vec<Cx<T>> {
        assert_eq!(v.len(), self.cols);
        (0..self.rows)
            .map(|i| self.row(i).iter().zip(v).map(|(&a, &b)| a * b).sum())
            .collect()
    }
}

impl<T: Real> Index<(usize, usize)> for Matrix<T> {
    type Output = Cx<T>;
    fn index(&self, (i, j): (usize, usize)) -> &Cx<T> {
        &self.data[i * self.cols + j]
    }
}

impl<T: Real> IndexMut<(usize, usize)> for Matrix<T> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Cx<T> {
        &mut self.data[i * self.cols + j]
    }
}

impl<T: Real> Mul for &Matrix<T> {
    type Output = Matrix<T>;

    fn mul(self, rhs: &Matrix<T>) -> Matrix<T> {
        assert_eq!(self.cols, rhs.rows, "matrix product dimension mismatch");
        let (n, m) = (self.rows, rhs.cols);
        let mut out = Matrix::zeros(n, m);
        // zero-skipping: bundle matrices are mostly Kronecker products with
        // permutation or matrix-unit factors
        for i in 0..n {
            for l in 0..self.cols {
                let a = self.data[i * self.cols + l];
                if a.is_zero() {
                    continue;
                }
                let src = &rhs.data[l * m..(l + 1) * m];
                let dst = &mut out.data[i * m..(i + 1) * m];
                for (d, &b) in dst.iter_mut().zip(src) {
                    if !b.is_zero() {
                        *d = *d + a * b;
                    }
                }
            }
        }
        out
    }
}

impl<T: Real> Add for &Matrix<T> {
    type Output = Matrix<T>;
    fn add(self, rhs: &Matrix<T>) -> Matrix<T> {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect(),
        }
    }
}

impl<T: Real> Sub for &Matrix<T> {
    type Output = Matrix<T>;
    fn sub(self, rhs: &Matrix<T>) -> Matrix<T> {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect(),
        }
    }
}

impl<T: Real> Neg for &Matrix<T> {
    type Output = Matrix<T>;
    fn neg(self) -> Matrix<T> {
        self.scale(-Complex::one())
    }
}

impl<T: fmt::Debug> fmt::Debug for Matrix<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Matrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            let row: Vec<String> = self.data[i * self.cols..(i + 1) * self.cols]
                .iter()
                .map(|z| format!("({:.4?}, {:.4?})", z.re, z.im))
                .collect();
            writeln!(f, "  {}", row.join(", "))?;
        }
        write!(f, "]")
    }
}

/// Pauli X.
pub fn pauli_x<T: Real>() -> Matrix<T> {
    Matrix::from_real(2, 2, &[0.0, 1.0, 1.0, 0.0])
}

/// Pauli Z.
pub fn pauli_z<T: Real>() -> Matrix<T> {
    Matrix::from_real(2, 2, &[1.0, 0.0, 0.0, -1.0])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::cx;

    #[test]
    fn op_norm_examples() {
        assert!((Matrix::<f64>::identity(2).op_norm() - 1.0).abs() < 1e-12);
        let m = Matrix::<f64>::from_real(2, 2, &[0.0, 2.0, 0.0, 0.0]);
        assert!((m.op_norm() - 2.0).abs() < 1e-12);
        assert!((m.adjoint().op_norm() - 2.0).abs() < 1e-12);
    }

    #[test]
    fn psd_examples() {
        assert!(Matrix::<f64>::identity(2).is_psd(1e-9));
        assert!(!Matrix::<f64>::identity(2).scale_real(-1.0).is_psd(1e-9));
        let a = Matrix::<f64>::from_vec(
            2,
            2,
            vec![cx(1.0, 2.0), cx(-0.5, 0.0), cx(0.0, 1.0), cx(3.0, -1.0)],
        );
        assert!((&a.adjoint() * &a).is_psd(1e-9));
        // Hermitian but indefinite
        assert!(!pauli_z::<f64>().is_psd(1e-9));
    }

    #[test]
    fn kron_of_units_is_unit() {
        let a = Matrix::<f64>::unit(2, 0, 1);
        let b = Matrix::<f64>::unit(3, 2, 0);
        assert_eq!(a.kron(&b), Matrix::unit(6, 2, 3));
    }

    #[test]
    fn hs_inner_is_trace_of_adjoint_product() {
        let a = Matrix::<f64>::from_vec(
            2,
            2,
            vec![cx(1.0, 1.0), cx(0.0, 2.0), cx(-1.0, 0.0), cx(0.5, 0.5)],
        );
        let b = pauli_x::<f64>();
        let lhs = a.hs_inner(&b);
        let rhs = (&a.adjoint() * &b).trace();
        assert!((lhs - rhs).norm() < 1e-14);
    }
}
