//! Small dense linear algebra over [`Scalar`].
//!
//! Systems in this crate are at most a few thousand unknowns (the Kronecker
//! system of the companion covariance), so a row-major `Vec` with partial
//! pivoting LU is all that is needed.

use std::ops::{Index, IndexMut, Mul};

use crate::error::{Error, Result};
use crate::scalar::Scalar;

#[derive(Clone, Debug, PartialEq)]
pub struct Matrix<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

impl<T: Scalar> Matrix<T> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![T::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = T::one();
        }
        m
    }

    pub fn from_row_slice(rows: usize, cols: usize, data: &[T]) -> Self {
        assert_eq!(data.len(), rows * cols, "data length does not match shape");
        Self {
            rows,
            cols,
            data: data.to_vec(),
        }
    }

    /// Builds a matrix from nested rows. Returns `None` if rows are ragged.
    pub fn from_rows(rows: &[Vec<T>]) -> Option<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return None;
        }
        Some(Self {
            rows: r,
            cols: c,
            data: rows.iter().flatten().copied().collect(),
        })
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> T) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Self { rows, cols, data }
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn as_slice(&self) -> &[T] {
        &self.data
    }

    pub fn row(&self, i: usize) -> &[T] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<T>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)])
    }

    pub fn scale(&self, s: T) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|&x| x * s).collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let data = self.data.iter().zip(&other.data).map(|(&a, &b)| a + b).collect();
        Self {
            rows: self.rows,
            cols: self.cols,
            data,
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let data = self.data.iter().zip(&other.data).map(|(&a, &b)| a - b).collect();
        Self {
            rows: self.rows,
            cols: self.cols,
            data,
        }
    }

    pub fn add_assign(&mut self, other: &Self) {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        for (a, &b) in self.data.iter_mut().zip(&other.data) {
            *a += b;
        }
    }

    pub fn matmul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "inner dimensions differ");
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a == T::zero() {
                    continue;
                }
                let orow = other.row(k);
                let dst = &mut out.data[i * other.cols..(i + 1) * other.cols];
                for (d, &b) in dst.iter_mut().zip(orow) {
                    *d += a * b;
                }
            }
        }
        out
    }

    pub fn matvec(&self, v: &[T]) -> Vec<T> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|i| self.row(i).iter().zip(v).map(|(&a, &b)| a * b).sum())
            .collect()
    }

    /// Kronecker product `self ⊗ other`.
    pub fn kron(&self, other: &Self) -> Self {
        let (r2, c2) = (other.rows, other.cols);
        Self::from_fn(self.rows * r2, self.cols * c2, |i, j| {
            self[(i / r2, j / c2)] * other[(i % r2, j % c2)]
        })
    }

    /// Column-stacking vectorization.
    pub fn vec_columns(&self) -> Vec<T> {
        let mut v = Vec::with_capacity(self.data.len());
        for j in 0..self.cols {
            for i in 0..self.rows {
                v.push(self[(i, j)]);
            }
        }
        v
    }

    /// Inverse of [`Matrix::vec_columns`].
    pub fn from_columns_vec(rows: usize, cols: usize, v: &[T]) -> Self {
        assert_eq!(v.len(), rows * cols);
        Self::from_fn(rows, cols, |i, j| v[j * rows + i])
    }

    pub fn block(&self, r0: usize, c0: usize, rows: usize, cols: usize) -> Self {
        Self::from_fn(rows, cols, |i, j| self[(r0 + i, c0 + j)])
    }

    pub fn set_block(&mut self, r0: usize, c0: usize, b: &Self) {
        for i in 0..b.rows {
            for j in 0..b.cols {
                self[(r0 + i, c0 + j)] = b[(i, j)];
            }
        }
    }

    pub fn max_abs(&self) -> T {
        self.data.iter().fold(T::zero(), |m, &x| m.max(x.abs()))
    }

    /// Maximum absolute column sum.
    pub fn norm_one(&self) -> T {
        (0..self.cols)
            .map(|j| (0..self.rows).map(|i| self[(i, j)].abs()).sum::<T>())
            .fold(T::zero(), T::max)
    }

    pub fn is_symmetric(&self, tol: T) -> bool {
        self.is_square() && (0..self.rows).all(|i| (0..i).all(|j| (self[(i, j)] - self[(j, i)]).abs() <= tol))
    }

    pub fn is_lower_triangular(&self) -> bool {
        (0..self.rows).all(|i| ((i + 1)..self.cols).all(|j| self[(i, j)] == T::zero()))
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|x| x.is_finite())
    }
}

impl<T> Index<(usize, usize)> for Matrix<T> {
    type Output = T;
    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &T {
        debug_assert!(i < self.rows && j < self.cols);
        &self.data[i * self.cols + j]
    }
}

impl<T> IndexMut<(usize, usize)> for Matrix<T> {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut T {
        debug_assert!(i < self.rows && j < self.cols);
        &mut self.data[i * self.cols + j]
    }
}

impl<T: Scalar> Mul for &Matrix<T> {
    type Output = Matrix<T>;
    fn mul(self, rhs: Self) -> Matrix<T> {
        self.matmul(rhs)
    }
}

/// LU factorization with partial pivoting, `P·A = L·U`.
#[derive(Clone, Debug)]
pub struct Lu<T> {
    lu: Matrix<T>,
    perm: Vec<usize>,
}

impl<T: Scalar> Lu<T> {
    /// Fails with [`Error::NonInvertible`] on an exactly zero pivot.
    pub fn factor(a: &Matrix<T>) -> Result<Self> {
        assert!(a.is_square(), "LU requires a square matrix");
        let n = a.rows();
        let mut lu = a.clone();
        let mut perm: Vec<usize> = (0..n).collect();
        for k in 0..n {
            let (p, pmax) =
                (k..n)
                    .map(|i| (i, lu[(i, k)].abs()))
                    .fold((k, T::zero()), |best, cur| if cur.1 > best.1 { cur } else { best });
            if pmax == T::zero() || !pmax.is_finite() {
                return Err(Error::NonInvertible {
                    condition: f64::INFINITY,
                });
            }
            if p != k {
                for j in 0..n {
                    lu.data.swap(k * n + j, p * n + j);
                }
                perm.swap(k, p);
            }
            let pivot = lu[(k, k)];
            for i in (k + 1)..n {
                let f = lu[(i, k)] / pivot;
                lu[(i, k)] = f;
                if f == T::zero() {
                    continue;
                }
                for j in (k + 1)..n {
                    let u = lu[(k, j)];
                    lu[(i, j)] -= f * u;
                }
            }
        }
        Ok(Self { lu, perm })
    }

    pub fn dim(&self) -> usize {
        self.lu.rows()
    }

    #[allow(clippy::needless_range_loop)]
    pub fn solve(&self, b: &[T]) -> Vec<T> {
        let n = self.dim();
        assert_eq!(b.len(), n);
        let mut x: Vec<T> = self.perm.iter().map(|&p| b[p]).collect();
        for i in 0..n {
            let mut s = x[i];
            for j in 0..i {
                s -= self.lu[(i, j)] * x[j];
            }
            x[i] = s;
        }
        for i in (0..n).rev() {
            let mut s = x[i];
            for j in (i + 1)..n {
                s -= self.lu[(i, j)] * x[j];
            }
            x[i] = s / self.lu[(i, i)];
        }
        x
    }

    /// Solves `A·X = B` column by column.
    pub fn solve_matrix(&self, b: &Matrix<T>) -> Matrix<T> {
        let n = self.dim();
        assert_eq!(b.rows(), n);
        let mut out = Matrix::zeros(n, b.cols());
        for j in 0..b.cols() {
            let col: Vec<T> = (0..n).map(|i| b[(i, j)]).collect();
            for (i, v) in self.solve(&col).into_iter().enumerate() {
                out[(i, j)] = v;
            }
        }
        out
    }

    pub fn inverse(&self) -> Matrix<T> {
        self.solve_matrix(&Matrix::identity(self.dim()))
    }
}

/// 1-norm condition number `‖A‖₁·‖A⁻¹‖₁` via the explicit inverse.
pub fn condition_one<T: Scalar>(a: &Matrix<T>, lu: &Lu<T>) -> T {
    a.norm_one() * lu.inverse().norm_one()
}

/// Solves `A·x = b`, rejecting systems with 1-norm condition number above `max_condition`.
pub fn solve_checked<T: Scalar>(a: &Matrix<T>, b: &[T], max_condition: f64) -> Result<Vec<T>> {
    let lu = Lu::factor(a)?;
    let cond = condition_one(a, &lu).to_f64_lossy();
    if !cond.is_finite() || cond > max_condition {
        return Err(Error::NonInvertible { condition: cond });
    }
    Ok(lu.solve(b))
}

/// Cholesky factor `L` (lower triangular, `A = L·Lᵀ`) of a symmetric positive definite matrix.
pub fn cholesky<T: Scalar>(a: &Matrix<T>) -> Option<Matrix<T>> {
    cholesky_impl(a, None)
}

/// Cholesky factor of a symmetric positive semi-definite matrix.
///
/// Pivots below `tol` are treated as zero and their column is left zero.
pub fn cholesky_semidefinite<T: Scalar>(a: &Matrix<T>, tol: T) -> Option<Matrix<T>> {
    cholesky_impl(a, Some(tol))
}

fn cholesky_impl<T: Scalar>(a: &Matrix<T>, tol: Option<T>) -> Option<Matrix<T>> {
    let n = a.rows();
    let mut l = Matrix::zeros(n, n);
    for j in 0..n {
        let mut d = a[(j, j)];
        for k in 0..j {
            d -= l[(j, k)] * l[(j, k)];
        }
        let ljj = match tol {
            None if d > T::zero() => d.sqrt(),
            None => return None,
            Some(t) if d > t => d.sqrt(),
            Some(t) if d >= -t => T::zero(),
            Some(_) => return None,
        };
        l[(j, j)] = ljj;
        for i in (j + 1)..n {
            let mut s = a[(i, j)];
            for k in 0..j {
                s -= l[(i, k)] * l[(j, k)];
            }
            l[(i, j)] = if ljj > T::zero() { s / ljj } else { T::zero() };
        }
    }
    Some(l)
}

/// Eigen-decomposition of a symmetric matrix by cyclic Jacobi rotations.
///
/// Returns eigenvalues (ascending) and the matrix whose columns are the eigenvectors.
pub fn symmetric_eigen<T: Scalar>(a: &Matrix<T>) -> (Vec<T>, Matrix<T>) {
    assert!(a.is_square());
    let n = a.rows();
    let mut m = a.clone();
    let mut v = Matrix::identity(n);
    let eps = T::epsilon();
    for _sweep in 0..100 {
        let off: T = (0..n)
            .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| m[(i, j)] * m[(i, j)])
            .sum();
        let diag: T = (0..n).map(|i| m[(i, i)] * m[(i, i)]).sum();
        if off <= eps * eps * diag || off == T::zero() {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = m[(p, q)];
                if apq == T::zero() {
                    continue;
                }
                let theta = (m[(q, q)] - m[(p, p)]) / (T::lit(2.0) * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + T::one()).sqrt());
                let c = T::one() / (t * t + T::one()).sqrt();
                let s = t * c;
                for k in 0..n {
                    let mkp = m[(k, p)];
                    let mkq = m[(k, q)];
                    m[(k, p)] = c * mkp - s * mkq;
                    m[(k, q)] = s * mkp + c * mkq;
                }
                for k in 0..n {
                    let mpk = m[(p, k)];
                    let mqk = m[(q, k)];
                    m[(p, k)] = c * mpk - s * mqk;
                    m[(q, k)] = s * mpk + c * mqk;
                }
                for k in 0..n {
                    let vkp = v[(k, p)];
                    let vkq = v[(k, q)];
                    v[(k, p)] = c * vkp - s * vkq;
                    v[(k, q)] = s * vkp + c * vkq;
                }
            }
        }
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| m[(i, i)].partial_cmp(&m[(j, j)]).unwrap_or(std::cmp::Ordering::Equal));
    let values = order.iter().map(|&i| m[(i, i)]).collect();
    let vectors = Matrix::from_fn(n, n, |r, c| v[(r, order[c])]);
    (values, vectors)
}

/// Spectral radius via normalized repeated squaring, `ρ(A) = lim ‖A^(2^s)‖^(1/2^s)`.
///
/// Sixty squarings resolve `ρ` far below f64 resolution for matrices of the
/// sizes used here, including defective and non-normal ones.
pub fn spectral_radius<T: Scalar>(a: &Matrix<T>) -> f64 {
    assert!(a.is_square());
    let norm = a.max_abs().to_f64_lossy();
    if norm == 0.0 {
        return 0.0;
    }
    let mut m = a.scale(T::one() / a.max_abs());
    let mut log_norm = norm.ln();
    let mut power = 1.0f64;
    for _ in 0..60 {
        m = m.matmul(&m);
        power *= 2.0;
        let nu = m.max_abs().to_f64_lossy();
        if nu == 0.0 {
            // nilpotent
            return 0.0;
        }
        log_norm = 2.0 * log_norm + nu.ln();
        m = m.scale(T::one() / m.max_abs());
    }
    (log_norm / power).exp()
}

/// Schur–Cohn stability test of `1 − Σ_h φ_h z^h` (`phi[h-1] = φ_h`).
///
/// Returns true when every companion eigenvalue has modulus below `radius`,
/// i.e. all roots lie outside the circle of radius `1/radius`.
pub fn schur_cohn_stable<T: Scalar>(phi: &[T], radius: T) -> bool {
    let p = phi.len();
    let mut a: Vec<T> = Vec::with_capacity(p);
    let mut scale = T::one();
    for &x in phi {
        scale /= radius;
        a.push(x * scale);
    }
    if a.iter().any(|x| !x.is_finite()) {
        return false;
    }
    for m in (1..=p).rev() {
        let k = a[m - 1];
        if k.abs() >= T::one() {
            return false;
        }
        let denom = T::one() - k * k;
        let prev: Vec<T> = (1..m).map(|h| (a[h - 1] + k * a[m - h - 1]) / denom).collect();
        a.truncate(m - 1);
        a.copy_from_slice(&prev);
    }
    true
}
