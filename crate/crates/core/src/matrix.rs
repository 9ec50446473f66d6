//! Column-major dense storage and the handful of BLAS-1 style kernels the
//! algorithms need. All reductions use a fixed summation order so results
//! do not depend on how work is split between threads.

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Dense real matrix stored column by column.
#[derive(Clone, Debug, PartialEq)]
pub struct DenseMatrix<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

impl<T: Scalar> DenseMatrix<T> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![T::zero(); rows * cols],
        }
    }

    /// Wraps a column-major buffer of length `rows * cols`.
    pub fn from_column_major(rows: usize, cols: usize, data: Vec<T>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::dimension(format!(
                "buffer of length {} cannot hold a {rows}x{cols} matrix",
                data.len()
            )));
        }
        Ok(Self { rows, cols, data })
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> T) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for c in 0..cols {
            for r in 0..rows {
                data.push(f(r, c));
            }
        }
        Self { rows, cols, data }
    }

    /// Builds a matrix from equally sized columns.
    pub fn from_columns(rows: usize, columns: &[Vec<T>]) -> Result<Self> {
        let mut data = Vec::with_capacity(rows * columns.len());
        for (c, column) in columns.iter().enumerate() {
            if column.len() != rows {
                return Err(Error::dimension(format!(
                    "column {c} has length {}, expected {rows}",
                    column.len()
                )));
            }
            data.extend_from_slice(column);
        }
        Ok(Self {
            rows,
            cols: columns.len(),
            data,
        })
    }

    pub fn identity(n: usize) -> Self {
        Self::from_fn(n, n, |r, c| if r == c { T::one() } else { T::zero() })
    }

    #[inline]
    pub fn nrows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn ncols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, row: usize, col: usize) -> T {
        self.data[col * self.rows + row]
    }

    #[inline]
    pub fn set(&mut self, row: usize, col: usize, value: T) {
        self.data[col * self.rows + row] = value;
    }

    #[inline]
    pub fn col(&self, col: usize) -> &[T] {
        &self.data[col * self.rows..(col + 1) * self.rows]
    }

    #[inline]
    pub fn col_mut(&mut self, col: usize) -> &mut [T] {
        &mut self.data[col * self.rows..(col + 1) * self.rows]
    }

    pub fn columns(&self) -> impl ExactSizeIterator<Item = &[T]> + '_ {
        // chunks_exact panics on a zero chunk size
        let step = self.rows.max(1);
        let n = if self.rows == 0 { 0 } else { self.cols };
        self.data.chunks_exact(step).take(n)
    }

    pub fn as_slice(&self) -> &[T] {
        &self.data
    }

    pub fn as_mut_slice(&mut self) -> &mut [T] {
        &mut self.data
    }

    pub fn into_vec(self) -> Vec<T> {
        self.data
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |r, c| self.get(c, r))
    }

    /// Dense product `self * other`.
    pub fn matmul(&self, other: &Self) -> Result<Self> {
        if self.cols != other.rows {
            return Err(Error::dimension(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for c in 0..other.cols {
            let dst = &mut out.data[c * self.rows..(c + 1) * self.rows];
            for (k, &w) in other.col(c).iter().enumerate() {
                if w != T::zero() {
                    axpy(w, self.col(k), dst);
                }
            }
        }
        Ok(out)
    }

    pub fn frobenius_norm(&self) -> T {
        sum_of_squares(&self.data).sqrt()
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|v| v.is_finite())
    }

    /// Largest absolute entrywise difference, `None` on a shape mismatch.
    pub fn max_abs_diff(&self, other: &Self) -> Option<T> {
        if self.rows != other.rows || self.cols != other.cols {
            return None;
        }
        Some(
            self.data
                .iter()
                .zip(&other.data)
                .fold(T::zero(), |acc, (&a, &b)| acc.max((a - b).abs())),
        )
    }
}

/// Inner product with four interleaved partial sums combined in a fixed order.
#[inline]
pub fn dot<T: Scalar>(a: &[T], b: &[T]) -> T {
    debug_assert_eq!(a.len(), b.len());
    let mut acc = [T::zero(); 4];
    let head = a.len() / 4 * 4;
    for (ca, cb) in a[..head].chunks_exact(4).zip(b[..head].chunks_exact(4)) {
        acc[0] += ca[0] * cb[0];
        acc[1] += ca[1] * cb[1];
        acc[2] += ca[2] * cb[2];
        acc[3] += ca[3] * cb[3];
    }
    let mut tail = T::zero();
    for (&x, &y) in a[head..].iter().zip(&b[head..]) {
        tail += x * y;
    }
    ((acc[0] + acc[1]) + (acc[2] + acc[3])) + tail
}

#[inline]
pub fn sum_of_squares<T: Scalar>(a: &[T]) -> T {
    dot(a, a)
}

#[inline]
pub fn norm<T: Scalar>(a: &[T]) -> T {
    sum_of_squares(a).sqrt()
}

/// `y += alpha * x`
#[inline]
pub fn axpy<T: Scalar>(alpha: T, x: &[T], y: &mut [T]) {
    debug_assert_eq!(x.len(), y.len());
    for (yi, &xi) in y.iter_mut().zip(x) {
        *yi += alpha * xi;
    }
}

#[inline]
pub fn scale<T: Scalar>(alpha: T, x: &mut [T]) {
    for v in x {
        *v *= alpha;
    }
}

/// Scales `x` to unit Euclidean norm. Returns the original norm; a zero
/// vector is left untouched.
pub fn normalize<T: Scalar>(x: &mut [T]) -> T {
    let nrm = norm(x);
    if nrm > T::zero() {
        for v in x.iter_mut() {
            *v = *v / nrm;
        }
    }
    nrm
}

/// In-place Cholesky factorization of a symmetric positive definite
/// column-major `n x n` matrix. On success the lower triangle holds `L`
/// with `A = L Lᵀ`. A pivot at or below `min_pivot` aborts the
/// factorization and returns its index.
pub fn cholesky_in_place<T: Scalar>(a: &mut [T], n: usize, min_pivot: T) -> std::result::Result<(), usize> {
    debug_assert_eq!(a.len(), n * n);
    for j in 0..n {
        let mut diag = a[j * n + j];
        for k in 0..j {
            let l = a[k * n + j];
            diag -= l * l;
        }
        if !(diag > min_pivot) {
            return Err(j);
        }
        let ljj = diag.sqrt();
        a[j * n + j] = ljj;
        for i in j + 1..n {
            let mut v = a[j * n + i];
            for k in 0..j {
                v -= a[k * n + i] * a[k * n + j];
            }
            a[j * n + i] = v / ljj;
        }
    }
    Ok(())
}

/// Solves `L Lᵀ x = b` in place given the factor from [`cholesky_in_place`].
pub fn cholesky_solve_in_place<T: Scalar>(l: &[T], n: usize, b: &mut [T]) {
    // forward: L z = b
    for i in 0..n {
        let mut v = b[i];
        for k in 0..i {
            v -= l[k * n + i] * b[k];
        }
        b[i] = v / l[i * n + i];
    }
    // backward: Lᵀ x = z
    for i in (0..n).rev() {
        let mut v = b[i];
        for k in i + 1..n {
            v -= l[i * n + k] * b[k];
        }
        b[i] = v / l[i * n + i];
    }
}
