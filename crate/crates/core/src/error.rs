use thiserror::Error;

/// Errors raised by the operator algebra, the walk model and the SEA engine.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("matrix is not square: {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },

    #[error("matrix has a non-finite entry at ({row}, {col})")]
    NonFinite { row: usize, col: usize },

    #[error("matrix is not Hermitian (max |M - M^dag| = {deviation:e})")]
    NotHermitian { deviation: f64 },

    #[error("density matrix has eigenvalue {value:e} below the admission tolerance")]
    NegativeEigenvalue { value: f64 },

    #[error("density matrix trace is {trace}, expected 1")]
    TraceMismatch { trace: f64 },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("eigen-solver did not converge (residual {residual:e})")]
    EigenNonConvergence { residual: f64 },

    #[error("matrix function is not finite at eigenvalue {eigenvalue:e}")]
    NonFiniteFunction { eigenvalue: f64 },

    #[error("matrix is not unitary (max |U^dag U - I| = {deviation:e})")]
    NotUnitary { deviation: f64 },

    #[error("invalid graph: {0}")]
    InvalidGraph(String),

    #[error("invalid walker configuration: {0}")]
    InvalidWalker(String),

    #[error("invalid parameter `{name}` = {value}: {reason}")]
    InvalidParameter {
        name: &'static str,
        value: f64,
        reason: &'static str,
    },

    #[error("inverse temperature is undefined for a traceless Hamiltonian")]
    UndefinedBeta,

    #[error("constraint system is singular (det = {det_delta:e})")]
    SingularConstraintSystem { det_delta: f64 },

    #[error("trace drifted by {drift:e} during one step (limit {limit:e})")]
    TraceDrift { drift: f64, limit: f64 },

    #[error("step {step} failed: {source}")]
    Step {
        step: usize,
        #[source]
        source: Box<Error>,
    },
}

pub type Result<T> = std::result::Result<T, Error>;
