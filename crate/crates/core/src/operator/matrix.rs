use std::fmt;
use std::ops::{Add, Mul, Sub};

use faer::{c64, Mat, MatRef};

use crate::error::{Error, Result};

/// Tolerance on `max |M - M^dag|` accepted when admitting a Hermitian operator.
pub const HERMITIAN_TOL: f64 = 1e-10;

/// Dense square complex matrix.
#[derive(Clone, PartialEq)]
pub struct ComplexMatrix(Mat<c64>);

impl ComplexMatrix {
    /// Wraps a faer matrix, rejecting non-square shapes and non-finite entries.
    pub fn new(mat: Mat<c64>) -> Result<Self> {
        if mat.nrows() != mat.ncols() {
            return Err(Error::NotSquare {
                rows: mat.nrows(),
                cols: mat.ncols(),
            });
        }
        for j in 0..mat.ncols() {
            for i in 0..mat.nrows() {
                let z = mat[(i, j)];
                if !(z.re.is_finite() && z.im.is_finite()) {
                    return Err(Error::NonFinite { row: i, col: j });
                }
            }
        }
        Ok(Self(mat))
    }

    /// Wraps a matrix known to be square and finite.
    pub(crate) fn from_mat(mat: Mat<c64>) -> Self {
        debug_assert_eq!(mat.nrows(), mat.ncols());
        Self(mat)
    }

    pub fn zeros(dim: usize) -> Self {
        Self(Mat::zeros(dim, dim))
    }

    pub fn identity(dim: usize) -> Self {
        Self(Mat::identity(dim, dim))
    }

    pub fn from_fn(dim: usize, f: impl FnMut(usize, usize) -> c64) -> Self {
        Self(Mat::from_fn(dim, dim, f))
    }

    pub fn from_real_fn(dim: usize, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        Self(Mat::from_fn(dim, dim, |i, j| c64::new(f(i, j), 0.0)))
    }

    pub fn from_diagonal(diag: &[f64]) -> Self {
        let n = diag.len();
        Self(Mat::from_fn(n, n, |i, j| {
            if i == j {
                c64::new(diag[i], 0.0)
            } else {
                c64::new(0.0, 0.0)
            }
        }))
    }

    /// Builds a matrix from row-major rows of real entries.
    pub fn from_real_rows(rows: &[&[f64]]) -> Result<Self> {
        let n = rows.len();
        if let Some(bad) = rows.iter().find(|r| r.len() != n) {
            return Err(Error::NotSquare {
                rows: n,
                cols: bad.len(),
            });
        }
        Self::new(Mat::from_fn(n, n, |i, j| c64::new(rows[i][j], 0.0)))
    }

    /// Outer product `|v><v|` of a column vector.
    pub fn outer(v: &[c64]) -> Self {
        let n = v.len();
        Self(Mat::from_fn(n, n, |i, j| v[i] * v[j].conj()))
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.0.nrows()
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> c64 {
        self.0[(i, j)]
    }

    pub fn as_mat(&self) -> MatRef<'_, c64> {
        self.0.as_ref()
    }

    pub fn into_mat(self) -> Mat<c64> {
        self.0
    }

    pub fn adjoint(&self) -> Self {
        Self(self.0.adjoint().to_owned())
    }

    pub fn trace(&self) -> c64 {
        (0..self.dim()).map(|i| self.0[(i, i)]).sum()
    }

    pub fn diagonal_real(&self) -> Vec<f64> {
        (0..self.dim()).map(|i| self.0[(i, i)].re).collect()
    }

    pub fn scale(&self, s: f64) -> Self {
        self.map(|z| z * s)
    }

    pub fn scale_complex(&self, s: c64) -> Self {
        self.map(|z| z * s)
    }

    pub fn map(&self, mut f: impl FnMut(c64) -> c64) -> Self {
        let n = self.dim();
        Self(Mat::from_fn(n, n, |i, j| f(self.0[(i, j)])))
    }

    /// `self + s * I`.
    pub fn add_identity(&self, s: f64) -> Self {
        let mut out = self.0.clone();
        for i in 0..self.dim() {
            out[(i, i)] += c64::new(s, 0.0);
        }
        Self(out)
    }

    /// `self + diag(d)`.
    pub fn add_diagonal(&self, d: &[f64]) -> Self {
        assert_eq!(d.len(), self.dim());
        let mut out = self.0.clone();
        for (i, &x) in d.iter().enumerate() {
            out[(i, i)] += c64::new(x, 0.0);
        }
        Self(out)
    }

    /// Largest entrywise modulus.
    pub fn norm_max(&self) -> f64 {
        let mut m = 0.0f64;
        for j in 0..self.dim() {
            for i in 0..self.dim() {
                m = m.max(self.0[(i, j)].norm());
            }
        }
        m
    }

    /// Largest entrywise modulus of `self - other`.
    pub fn max_abs_diff(&self, other: &ComplexMatrix) -> f64 {
        assert_eq!(self.dim(), other.dim(), "dimension mismatch");
        let mut m = 0.0f64;
        for j in 0..self.dim() {
            for i in 0..self.dim() {
                m = m.max((self.0[(i, j)] - other.0[(i, j)]).norm());
            }
        }
        m
    }

    /// Largest entrywise modulus of `self - self^dag`.
    pub fn hermitian_deviation(&self) -> f64 {
        let n = self.dim();
        let mut m = 0.0f64;
        for j in 0..n {
            for i in 0..=j {
                m = m.max((self.0[(i, j)] - self.0[(j, i)].conj()).norm());
            }
        }
        m
    }

    /// `(M + M^dag) / 2`.
    pub fn hermitian_part(&self) -> Self {
        let n = self.dim();
        Self(Mat::from_fn(n, n, |i, j| {
            (self.0[(i, j)] + self.0[(j, i)].conj()) * 0.5
        }))
    }

    /// Multiplies column `j` by `d[j]`, i.e. `self * diag(d)`.
    pub fn scale_columns(&self, d: &[f64]) -> Self {
        assert_eq!(d.len(), self.dim());
        let n = self.dim();
        Self(Mat::from_fn(n, n, |i, j| self.0[(i, j)] * d[j]))
    }

    /// `self * diag(d) * self^dag`, the congruence used to rebuild operators
    /// from a spectral basis.
    pub fn congruence_diag(&self, d: &[f64]) -> Self {
        let scaled = self.scale_columns(d);
        Self(&scaled.0 * self.0.adjoint())
    }

    /// `self^dag * other * self`.
    pub fn rotate_into(&self, other: &ComplexMatrix) -> Self {
        let tmp = &other.0 * &self.0;
        Self(self.0.adjoint() * &tmp)
    }

    /// Real part of `Tr(self * other)`, in O(n^2).
    pub fn trace_product_re(&self, other: &ComplexMatrix) -> f64 {
        assert_eq!(self.dim(), other.dim(), "dimension mismatch");
        let n = self.dim();
        let mut acc = 0.0;
        for j in 0..n {
            for i in 0..n {
                acc += (self.0[(i, j)] * other.0[(j, i)]).re;
            }
        }
        acc
    }
}

impl fmt::Debug for ComplexMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ComplexMatrix({}x{})", self.dim(), self.dim())?;
        if self.dim() <= 8 {
            for i in 0..self.dim() {
                let row: Vec<String> = (0..self.dim())
                    .map(|j| {
                        let z = self.0[(i, j)];
                        format!("{:+.4}{:+.4}i", z.re, z.im)
                    })
                    .collect();
                writeln!(f, "  [{}]", row.join(", "))?;
            }
        }
        Ok(())
    }
}

impl Add for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn add(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        ComplexMatrix(&self.0 + &rhs.0)
    }
}

impl Sub for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn sub(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        ComplexMatrix(&self.0 - &rhs.0)
    }
}

impl Mul for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn mul(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        ComplexMatrix(&self.0 * &rhs.0)
    }
}

/// A complex matrix with Hermitian symmetry, symmetrized on admission.
#[derive(Clone, Debug, PartialEq)]
pub struct HermitianOperator(ComplexMatrix);

impl HermitianOperator {
    pub fn new(matrix: ComplexMatrix) -> Result<Self> {
        let deviation = matrix.hermitian_deviation();
        if deviation > HERMITIAN_TOL {
            return Err(Error::NotHermitian { deviation });
        }
        Ok(Self(matrix.hermitian_part()))
    }

    /// Symmetrizes without the admission check. Callers guarantee Hermiticity
    /// up to round-off.
    pub(crate) fn symmetrize(matrix: ComplexMatrix) -> Self {
        Self(matrix.hermitian_part())
    }

    pub fn from_real_rows(rows: &[&[f64]]) -> Result<Self> {
        Self::new(ComplexMatrix::from_real_rows(rows)?)
    }

    pub fn from_diagonal(diag: &[f64]) -> Self {
        Self(ComplexMatrix::from_diagonal(diag))
    }

    pub fn identity(dim: usize) -> Self {
        Self(ComplexMatrix::identity(dim))
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.0
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.0
    }

    pub fn dim(&self) -> usize {
        self.0.dim()
    }

    pub fn trace(&self) -> f64 {
        self.0.trace().re
    }

    pub fn scale(&self, s: f64) -> Self {
        Self(self.0.scale(s))
    }
}

impl AsRef<ComplexMatrix> for HermitianOperator {
    fn as_ref(&self) -> &ComplexMatrix {
        &self.0
    }
}
