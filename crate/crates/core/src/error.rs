//! Error type shared by all modules.

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, thiserror::Error)]
pub enum Error {
    #[error("matrix entry at ({row},{col}) is not finite")]
    NonFiniteEntry { row: usize, col: usize },

    #[error("matrix is not square: {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("matrix is not Hermitian: max |A - A*| = {deviation:.3e} exceeds tolerance {tolerance:.3e}")]
    NotHermitian { deviation: f64, tolerance: f64 },

    #[error("matrix is not positive semidefinite: min eigenvalue {min_eigenvalue:.3e} below tolerance -{tolerance:.3e}")]
    NotPositiveSemidefinite { min_eigenvalue: f64, tolerance: f64 },

    #[error("LAPACK {routine} failed to converge (info = {info})")]
    EigFailed { routine: &'static str, info: i32 },

    #[error("vector family is numerically degenerate: Gram determinant {gram_det:.6e}")]
    DegenerateFamily { gram_det: f64 },

    #[error("operation budget exceeded: {required} coefficient operations > budget {budget}")]
    BudgetExceeded { required: u128, budget: u128 },

    #[error("inadmissible parameters for d = {d}: {requirement} (got gamma = {gamma})")]
    Inadmissible { d: usize, gamma: f64, requirement: &'static str },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }
}
