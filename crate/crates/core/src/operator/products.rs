use faer::Mat;

use super::matrix::ComplexMatrix;
use crate::error::{Error, Result};

fn check_dims(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<()> {
    if a.dim() != b.dim() {
        return Err(Error::DimensionMismatch {
            expected: a.dim(),
            found: b.dim(),
        });
    }
    Ok(())
}

/// The SEA inner product `<A|B> = Tr(A^dag B + B^dag A) / 2 = Re Tr(A^dag B)`.
pub fn hs_inner(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<f64> {
    check_dims(a, b)?;
    let (a, b) = (a.as_mat(), b.as_mat());
    let mut acc = 0.0;
    for j in 0..a.ncols() {
        for i in 0..a.nrows() {
            acc += (a[(i, j)].conj() * b[(i, j)]).re;
        }
    }
    Ok(acc)
}

/// Kronecker product with subsystem 1 outermost:
/// `(A ⊗ B)[i*dB + k, j*dB + l] = A[i, j] * B[k, l]`.
pub fn tensor(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    let (da, db) = (a.dim(), b.dim());
    let (am, bm) = (a.as_mat(), b.as_mat());
    ComplexMatrix::from_mat(Mat::from_fn(da * db, da * db, |r, c| {
        am[(r / db, c / db)] * bm[(r % db, c % db)]
    }))
}

/// `[A, B] = AB - BA`.
pub fn commutator(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<ComplexMatrix> {
    check_dims(a, b)?;
    Ok(&(a * b) - &(b * a))
}

/// `{A, B} = AB + BA`.
pub fn anticommutator(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<ComplexMatrix> {
    check_dims(a, b)?;
    Ok(&(a * b) + &(b * a))
}

#[cfg(test)]
mod tests {
    use faer::c64;

    use super::*;

    fn sigma_x() -> ComplexMatrix {
        ComplexMatrix::from_real_rows(&[&[0.0, 1.0], &[1.0, 0.0]]).unwrap()
    }

    fn sigma_y() -> ComplexMatrix {
        ComplexMatrix::from_fn(2, |i, j| match (i, j) {
            (0, 1) => c64::new(0.0, -1.0),
            (1, 0) => c64::new(0.0, 1.0),
            _ => c64::new(0.0, 0.0),
        })
    }

    fn sigma_z() -> ComplexMatrix {
        ComplexMatrix::from_diagonal(&[1.0, -1.0])
    }

    #[test]
    fn inner_product_examples() {
        let i2 = ComplexMatrix::identity(2);
        assert_eq!(hs_inner(&i2, &i2).unwrap(), 2.0);
        assert_eq!(hs_inner(&sigma_x(), &sigma_z()).unwrap(), 0.0);
        let a = ComplexMatrix::from_diagonal(&[1.0, 2.0]);
        let b = ComplexMatrix::from_diagonal(&[3.0, 4.0]);
        assert_eq!(hs_inner(&a, &b).unwrap(), 11.0);
    }

    #[test]
    fn inner_product_dimension_mismatch() {
        let err = hs_inner(&ComplexMatrix::identity(2), &ComplexMatrix::identity(3)).unwrap_err();
        assert_eq!(err, Error::DimensionMismatch { expected: 2, found: 3 });
    }

    #[test]
    fn tensor_examples() {
        let t = tensor(&ComplexMatrix::identity(2), &ComplexMatrix::identity(3));
        assert_eq!(t, ComplexMatrix::identity(6));
        let t = tensor(
            &ComplexMatrix::from_diagonal(&[1.0, 2.0]),
            &ComplexMatrix::from_diagonal(&[3.0, 4.0]),
        );
        assert_eq!(t, ComplexMatrix::from_diagonal(&[3.0, 4.0, 6.0, 8.0]));
    }

    #[test]
    fn pauli_commutator() {
        let c = commutator(&sigma_x(), &sigma_y()).unwrap();
        let expected = sigma_z().scale_complex(c64::new(0.0, 2.0));
        assert!(c.max_abs_diff(&expected) < 1e-15);
    }

    #[test]
    fn anticommutator_with_identity() {
        let a = sigma_y();
        let ac = anticommutator(&ComplexMatrix::identity(2), &a).unwrap();
        assert!(ac.max_abs_diff(&a.scale(2.0)) < 1e-15);
        let c = commutator(&a, &a).unwrap();
        assert_eq!(c.norm_max(), 0.0);
    }
}
