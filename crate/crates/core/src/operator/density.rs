use faer::{c64, Mat};

use super::matrix::{ComplexMatrix, HermitianOperator};
use super::spectral::{spectral_decompose, SpectralDecomposition};
use crate::error::{Error, Result};

/// Eigenvalues above `-NEGATIVE_TOL` are clipped to zero on admission.
pub const NEGATIVE_TOL: f64 = 1e-10;
/// Admissible deviation of the trace from one.
pub const TRACE_TOL: f64 = 1e-8;
/// Admissible deviation of `U^dag U` from the identity.
pub const UNITARY_TOL: f64 = 1e-9;

/// Hermitian, positive semi-definite, unit-trace operator together with its
/// spectral decomposition.
#[derive(Clone, Debug)]
pub struct DensityMatrix {
    matrix: HermitianOperator,
    spectrum: SpectralDecomposition,
}

impl DensityMatrix {
    /// Admits a Hermitian operator as a state: small negative eigenvalues are
    /// clipped to zero, the trace must already be one within [`TRACE_TOL`].
    pub fn new(op: HermitianOperator) -> Result<Self> {
        let spectrum = spectral_decompose(&op)?;
        Self::from_spectrum(spectrum)
    }

    /// Admits a state given directly by its eigenpairs.
    pub fn from_spectrum(spectrum: SpectralDecomposition) -> Result<Self> {
        let min = spectrum.eigenvalues().first().copied().unwrap_or(0.0);
        if min < -NEGATIVE_TOL {
            return Err(Error::NegativeEigenvalue { value: min });
        }
        let clipped: Vec<f64> = spectrum.eigenvalues().iter().map(|&w| w.max(0.0)).collect();
        let trace: f64 = clipped.iter().sum();
        if (trace - 1.0).abs() > TRACE_TOL {
            return Err(Error::TraceMismatch { trace });
        }
        let spectrum = SpectralDecomposition::from_parts(clipped, spectrum.basis().clone());
        let matrix = HermitianOperator::symmetrize(spectrum.reconstruct());
        Ok(Self { matrix, spectrum })
    }

    /// Projector onto a normalized pure state `|psi><psi|`.
    pub fn pure(psi: &[c64]) -> Result<Self> {
        let norm: f64 = psi.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm == 0.0 {
            return Err(Error::TraceMismatch { trace: 0.0 });
        }
        let v: Vec<c64> = psi.iter().map(|z| z / norm).collect();
        Self::new(HermitianOperator::symmetrize(ComplexMatrix::outer(&v)))
    }

    /// `I / dim`.
    pub fn maximally_mixed(dim: usize) -> Self {
        let basis = ComplexMatrix::identity(dim);
        let values = vec![1.0 / dim as f64; dim];
        let spectrum = SpectralDecomposition::from_parts(values, basis);
        let matrix = HermitianOperator::symmetrize(spectrum.reconstruct());
        Self { matrix, spectrum }
    }

    pub fn operator(&self) -> &HermitianOperator {
        &self.matrix
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        self.matrix.matrix()
    }

    pub fn spectrum(&self) -> &SpectralDecomposition {
        &self.spectrum
    }

    pub fn eigenvalues(&self) -> &[f64] {
        self.spectrum.eigenvalues()
    }

    pub fn dim(&self) -> usize {
        self.matrix.dim()
    }

    pub fn trace(&self) -> f64 {
        self.matrix.trace()
    }

    /// `Tr(rho^2)`.
    pub fn purity(&self) -> f64 {
        self.eigenvalues().iter().map(|w| w * w).sum()
    }
}

/// Which factor of a bipartite space survives a partial trace.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Subsystem {
    First,
    Second,
}

/// Traces out one factor of `rho` on a `dim_a * dim_b` product space, using
/// the subsystem-1-outermost index convention of [`super::tensor`].
pub fn partial_trace(rho: &DensityMatrix, dim_a: usize, dim_b: usize, keep: Subsystem) -> Result<DensityMatrix> {
    if dim_a * dim_b != rho.dim() {
        return Err(Error::DimensionMismatch {
            expected: dim_a * dim_b,
            found: rho.dim(),
        });
    }
    let m = rho.matrix().as_mat();
    let reduced = match keep {
        Subsystem::First => Mat::from_fn(dim_a, dim_a, |i, j| {
            (0..dim_b).map(|k| m[(i * dim_b + k, j * dim_b + k)]).sum::<c64>()
        }),
        Subsystem::Second => Mat::from_fn(dim_b, dim_b, |k, l| {
            (0..dim_a).map(|i| m[(i * dim_b + k, i * dim_b + l)]).sum::<c64>()
        }),
    };
    DensityMatrix::new(HermitianOperator::symmetrize(ComplexMatrix::from_mat(reduced)))
}

/// Maximum entrywise deviation of `U^dag U` from the identity.
pub fn unitarity_deviation(u: &ComplexMatrix) -> f64 {
    (&u.adjoint() * u).max_abs_diff(&ComplexMatrix::identity(u.dim()))
}

/// `U rho U^dag`. The spectrum is carried over exactly; only the basis rotates.
pub fn unitary_conjugate(rho: &DensityMatrix, u: &ComplexMatrix) -> Result<DensityMatrix> {
    if u.dim() != rho.dim() {
        return Err(Error::DimensionMismatch {
            expected: rho.dim(),
            found: u.dim(),
        });
    }
    let deviation = unitarity_deviation(u);
    if deviation > UNITARY_TOL {
        return Err(Error::NotUnitary { deviation });
    }
    let basis = u * rho.spectrum().basis();
    let spectrum = SpectralDecomposition::from_parts(rho.eigenvalues().to_vec(), basis);
    let matrix = HermitianOperator::symmetrize(spectrum.reconstruct());
    Ok(DensityMatrix { matrix, spectrum })
}

#[cfg(test)]
mod tests {
    use super::super::products::tensor;
    use super::*;

    fn diag_state(p: &[f64]) -> DensityMatrix {
        DensityMatrix::new(HermitianOperator::from_diagonal(p)).unwrap()
    }

    #[test]
    fn admission_clips_round_off_negatives() {
        let rho = diag_state(&[1.0 + 5e-11, -5e-11]);
        assert!(rho.eigenvalues().iter().all(|&w| w >= 0.0));
    }

    #[test]
    fn admission_rejects_negative_eigenvalue() {
        let err = DensityMatrix::new(HermitianOperator::from_diagonal(&[1.1, -0.1])).unwrap_err();
        assert!(matches!(err, Error::NegativeEigenvalue { .. }));
    }

    #[test]
    fn admission_rejects_bad_trace() {
        let err = DensityMatrix::new(HermitianOperator::from_diagonal(&[0.5, 0.4])).unwrap_err();
        assert!(matches!(err, Error::TraceMismatch { .. }));
    }

    #[test]
    fn partial_trace_of_product_state() {
        let r1 = diag_state(&[0.7, 0.3]);
        let r2 = diag_state(&[0.2, 0.5, 0.3]);
        let joint = DensityMatrix::new(HermitianOperator::symmetrize(tensor(r1.matrix(), r2.matrix()))).unwrap();
        let a = partial_trace(&joint, 2, 3, Subsystem::First).unwrap();
        let b = partial_trace(&joint, 2, 3, Subsystem::Second).unwrap();
        assert!(a.matrix().max_abs_diff(r1.matrix()) < 1e-12);
        assert!(b.matrix().max_abs_diff(r2.matrix()) < 1e-12);
    }

    #[test]
    fn partial_trace_of_bell_state() {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let psi = [c64::new(s, 0.0), c64::new(0.0, 0.0), c64::new(0.0, 0.0), c64::new(s, 0.0)];
        let bell = DensityMatrix::pure(&psi).unwrap();
        let a = partial_trace(&bell, 2, 2, Subsystem::First).unwrap();
        assert!(a.matrix().max_abs_diff(&ComplexMatrix::identity(2).scale(0.5)) < 1e-12);
    }

    #[test]
    fn partial_trace_dimension_mismatch() {
        let rho = DensityMatrix::maximally_mixed(6);
        assert!(matches!(
            partial_trace(&rho, 2, 2, Subsystem::First),
            Err(Error::DimensionMismatch { expected: 4, found: 6 })
        ));
    }

    #[test]
    fn conjugation_by_identity() {
        let rho = diag_state(&[0.6, 0.4]);
        let out = unitary_conjugate(&rho, &ComplexMatrix::identity(2)).unwrap();
        assert!(out.matrix().max_abs_diff(rho.matrix()) < 1e-15);
    }

    #[test]
    fn conjugation_rejects_non_unitary() {
        let rho = diag_state(&[0.6, 0.4]);
        let err = unitary_conjugate(&rho, &ComplexMatrix::identity(2).scale(2.0)).unwrap_err();
        assert!(matches!(err, Error::NotUnitary { .. }));
    }
}
