//! Spectral decomposition of Hermitian operators and matrix functions
//! evaluated through the spectral theorem.

use faer::{c64, Mat, Side};

use super::matrix::{ComplexMatrix, HermitianOperator};
use crate::error::{Error, Result};

/// Eigenvalues closer than this are treated as one degenerate cluster.
pub const DEGENERACY_GAP: f64 = 1e-9;

/// Relative tolerance on `|A V - V diag(w)|` accepted from the eigen-solver.
const RESIDUAL_TOL: f64 = 1e-9;

/// Eigenvalues in ascending order with a unitary basis of eigenvectors
/// stored column by column.
#[derive(Clone, Debug, PartialEq)]
pub struct SpectralDecomposition {
    eigenvalues: Vec<f64>,
    basis: ComplexMatrix,
}

impl SpectralDecomposition {
    /// Assembles a decomposition from eigenpairs in any order. The basis must
    /// already be unitary; pairs are re-sorted ascending.
    pub(crate) fn from_parts(eigenvalues: Vec<f64>, basis: ComplexMatrix) -> Self {
        assert_eq!(eigenvalues.len(), basis.dim());
        let sorted = eigenvalues.windows(2).all(|w| w[0] <= w[1]);
        if sorted {
            return Self { eigenvalues, basis };
        }
        let mut order: Vec<usize> = (0..eigenvalues.len()).collect();
        order.sort_by(|&a, &b| eigenvalues[a].total_cmp(&eigenvalues[b]));
        let n = basis.dim();
        let src = basis.as_mat();
        let permuted = Mat::from_fn(n, n, |i, j| src[(i, order[j])]);
        Self {
            eigenvalues: order.iter().map(|&k| eigenvalues[k]).collect(),
            basis: ComplexMatrix::from_mat(permuted),
        }
    }

    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    pub fn basis(&self) -> &ComplexMatrix {
        &self.basis
    }

    pub fn dim(&self) -> usize {
        self.eigenvalues.len()
    }

    /// `basis * diag(values) * basis^dag`.
    pub fn compose(&self, values: &[f64]) -> ComplexMatrix {
        self.basis.congruence_diag(values)
    }

    pub fn reconstruct(&self) -> ComplexMatrix {
        self.compose(&self.eigenvalues)
    }

    /// Applies `f` to every eigenvalue, clamping first to `floor` when given.
    pub fn map_eigenvalues(&self, f: SpectralFn, floor: Option<f64>) -> Result<Vec<f64>> {
        self.eigenvalues
            .iter()
            .map(|&lambda| {
                let x = match floor {
                    Some(fl) if f.needs_floor() => lambda.max(fl),
                    _ => lambda,
                };
                let y = f.eval(x);
                if y.is_finite() {
                    Ok(y)
                } else {
                    Err(Error::NonFiniteFunction { eigenvalue: x })
                }
            })
            .collect()
    }

    /// Spectral evaluation of `f(A)`.
    pub fn apply(&self, f: SpectralFn, floor: Option<f64>) -> Result<HermitianOperator> {
        let values = self.map_eigenvalues(f, floor)?;
        Ok(HermitianOperator::symmetrize(self.compose(&values)))
    }
}

/// Real scalar functions applied through the spectral theorem.
#[derive(Clone, Copy, Debug)]
pub enum SpectralFn {
    Ln,
    Exp,
    Sqrt,
    /// `x^p`; for non-integer `p` the argument is floored like `Ln`.
    Pow(f64),
    Map(fn(f64) -> f64),
}

impl SpectralFn {
    pub fn eval(self, x: f64) -> f64 {
        match self {
            SpectralFn::Ln => x.ln(),
            SpectralFn::Exp => x.exp(),
            SpectralFn::Sqrt => x.sqrt(),
            SpectralFn::Pow(p) => x.powf(p),
            SpectralFn::Map(f) => f(x),
        }
    }

    /// Logarithms and fractional powers are singular at zero and see clamped
    /// eigenvalues.
    pub fn needs_floor(self) -> bool {
        match self {
            SpectralFn::Ln | SpectralFn::Sqrt => true,
            SpectralFn::Pow(p) => p.fract() != 0.0,
            SpectralFn::Exp | SpectralFn::Map(_) => false,
        }
    }
}

/// Eigendecomposition of a Hermitian operator, eigenvalues ascending.
///
/// Eigenvectors belonging to a degenerate cluster (gap below
/// [`DEGENERACY_GAP`]) are re-orthonormalized with a thin QR of the cluster
/// block, so callers may rely on `basis^dag basis = I` regardless of the
/// multiplicities.
pub fn spectral_decompose(a: &HermitianOperator) -> Result<SpectralDecomposition> {
    let m = a.matrix();
    let n = m.dim();
    if n == 0 {
        return Ok(SpectralDecomposition {
            eigenvalues: Vec::new(),
            basis: ComplexMatrix::zeros(0),
        });
    }
    let evd = m
        .as_mat()
        .self_adjoint_eigen(Side::Lower)
        .map_err(|_| Error::EigenNonConvergence {
            residual: f64::INFINITY,
        })?;
    let s = evd.S().column_vector();
    let eigenvalues: Vec<f64> = (0..n).map(|i| s[i].re).collect();
    let mut basis = evd.U().to_owned();

    orthonormalize_clusters(&mut basis, &eigenvalues);

    let av = m.as_mat() * &basis;
    let mut residual = 0.0f64;
    for j in 0..n {
        for i in 0..n {
            residual = residual.max((av[(i, j)] - basis[(i, j)] * eigenvalues[j]).norm());
        }
    }
    let scale = m.norm_max().max(1.0);
    if !residual.is_finite() || residual > RESIDUAL_TOL * scale {
        return Err(Error::EigenNonConvergence { residual });
    }

    Ok(SpectralDecomposition {
        eigenvalues,
        basis: ComplexMatrix::from_mat(basis),
    })
}

fn orthonormalize_clusters(basis: &mut Mat<c64>, eigenvalues: &[f64]) {
    let n = eigenvalues.len();
    let mut start = 0;
    while start < n {
        let mut end = start + 1;
        while end < n && eigenvalues[end] - eigenvalues[end - 1] < DEGENERACY_GAP {
            end += 1;
        }
        let width = end - start;
        if width > 1 {
            let block = basis.as_ref().subcols(start, width).to_owned();
            let q = block.qr().compute_thin_Q();
            basis.as_mut().subcols_mut(start, width).copy_from(&q);
        }
        start = end;
    }
}

/// `f(A)` through the spectral theorem. Logarithms and fractional powers see
/// eigenvalues clamped to `max(lambda, floor)`.
pub fn matrix_function(a: &HermitianOperator, f: SpectralFn, floor: f64) -> Result<HermitianOperator> {
    spectral_decompose(a)?.apply(f, Some(floor))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ring_laplacian(n: usize) -> HermitianOperator {
        HermitianOperator::new(ComplexMatrix::from_real_fn(n, |i, j| {
            if i == j {
                -2.0
            } else if (i + 1) % n == j || (j + 1) % n == i {
                1.0
            } else {
                0.0
            }
        }))
        .unwrap()
    }

    #[test]
    fn identity_spectrum() {
        let d = spectral_decompose(&HermitianOperator::identity(3)).unwrap();
        assert_eq!(d.eigenvalues().len(), 3);
        for &w in d.eigenvalues() {
            assert!((w - 1.0).abs() < 1e-14);
        }
        let gram = &d.basis().adjoint() * d.basis();
        assert!(gram.max_abs_diff(&ComplexMatrix::identity(3)) < 1e-12);
    }

    #[test]
    fn diagonal_is_sorted() {
        let d = spectral_decompose(&HermitianOperator::from_diagonal(&[2.0, -1.0])).unwrap();
        assert!((d.eigenvalues()[0] + 1.0).abs() < 1e-14);
        assert!((d.eigenvalues()[1] - 2.0).abs() < 1e-14);
        // Eigenvector of -1 is e_1 up to phase.
        assert!((d.basis().get(1, 0).norm() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn ring_laplacian_four_nodes() {
        let d = spectral_decompose(&ring_laplacian(4)).unwrap();
        let expected = [-4.0, -2.0, -2.0, 0.0];
        for (w, e) in d.eigenvalues().iter().zip(expected) {
            assert!((w - e).abs() < 1e-12, "{w} vs {e}");
        }
        let residual = d.reconstruct().max_abs_diff(ring_laplacian(4).matrix());
        assert!(residual < 1e-12);
        let gram = &d.basis().adjoint() * d.basis();
        assert!(gram.max_abs_diff(&ComplexMatrix::identity(4)) < 1e-12);
    }

    #[test]
    fn log_of_identity_vanishes() {
        let l = matrix_function(&HermitianOperator::identity(2), SpectralFn::Ln, 1e-300).unwrap();
        assert!(l.matrix().norm_max() < 1e-15);
    }

    #[test]
    fn sqrt_of_diagonal() {
        let s = matrix_function(&HermitianOperator::from_diagonal(&[4.0, 9.0]), SpectralFn::Sqrt, 0.0).unwrap();
        assert!(s.matrix().max_abs_diff(&ComplexMatrix::from_diagonal(&[2.0, 3.0])) < 1e-14);
    }

    #[test]
    fn log_of_maximally_mixed() {
        let n = 100;
        let a = HermitianOperator::identity(n).scale(1.0 / n as f64);
        let l = matrix_function(&a, SpectralFn::Ln, 1e-12).unwrap();
        let expected = ComplexMatrix::identity(n).scale(-(n as f64).ln());
        assert!(l.matrix().max_abs_diff(&expected) < 1e-12);
        assert!((l.matrix().get(0, 0).re + 4.6052).abs() < 1e-4);
    }

    #[test]
    fn floor_applies_only_to_singular_functions() {
        let a = HermitianOperator::from_diagonal(&[0.0, 1.0]);
        let l = matrix_function(&a, SpectralFn::Ln, 1e-12).unwrap();
        assert!((l.matrix().get(0, 0).re - 1e-12f64.ln()).abs() < 1e-12);
        let e = matrix_function(&a, SpectralFn::Exp, 0.5).unwrap();
        assert!((e.matrix().get(0, 0).re - 1.0).abs() < 1e-14);
    }

    #[test]
    fn non_finite_function_names_eigenvalue() {
        let a = HermitianOperator::from_diagonal(&[-1.0, 1.0]);
        let err = matrix_function(&a, SpectralFn::Map(|x| x.ln()), 0.0).unwrap_err();
        assert_eq!(err, Error::NonFiniteFunction { eigenvalue: -1.0 });
    }
}
