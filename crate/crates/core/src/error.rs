use thiserror::Error;

/// Errors produced by state validation, circuit handling, and invariant
/// enumeration.
#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("amplitude vector is not normalized: sum of |a_i|^2 = {norm_sq}")]
    NotNormalized { norm_sq: f64 },
    #[error("matrix is not Hermitian: max |rho - rho^H| entry = {deviation}")]
    NotHermitian { deviation: f64 },
    #[error("density matrix trace is {trace}, expected 1")]
    TraceNotOne { trace: f64 },
    #[error("matrix is not positive semidefinite: min eigenvalue = {min_eigenvalue}")]
    NotPositiveSemidefinite { min_eigenvalue: f64 },
    #[error("non-finite entry in input data")]
    NonFinite,
    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },
    #[error("state index {index} out of range 1..={len}")]
    IndexOutOfRange { index: usize, len: usize },
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("resource budget exceeded: {required} invariant sequences requested, budget is {budget}")]
    ResourceBudget { required: u128, budget: u128 },
    #[error("circuit does not match the simulation spec: {0}")]
    CircuitMismatch(String),
    #[error("circuit parse error at line {line}: {message}")]
    CircuitParse { line: usize, message: String },
}

pub type Result<T> = std::result::Result<T, Error>;
