//! Dense complex operator algebra: Hermitian admission, spectral functions,
//! density matrices and the bilinear products used by the dynamics.

mod density;
mod matrix;
mod products;
mod spectral;

pub use density::{
    partial_trace, unitarity_deviation, unitary_conjugate, DensityMatrix, Subsystem, NEGATIVE_TOL, TRACE_TOL,
    UNITARY_TOL,
};
pub use matrix::{ComplexMatrix, HermitianOperator, HERMITIAN_TOL};
pub use products::{anticommutator, commutator, hs_inner, tensor};
pub use spectral::{matrix_function, spectral_decompose, SpectralDecomposition, SpectralFn, DEGENERACY_GAP};

pub use faer::c64;
