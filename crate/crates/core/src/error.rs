use thiserror::Error;

/// Errors produced while building grids, discretizations or running solvers.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("cells_per_subdomain must be even-coarsenable down to the coarsest level, got {0}")]
    NotCoarsenable(usize),

    #[error("invalid problem data: {0}")]
    InvalidProblem(String),

    #[error("vector length {found} does not match grid unknown count {expected}")]
    ShapeMismatch { expected: usize, found: usize },

    #[error("singular matrix at pivot {0}")]
    SingularMatrix(usize),

    #[error("coarse-grid solver did not converge: residual {residual:.3e} after {iterations} iterations")]
    CoarseSolve { residual: f64, iterations: usize },

    #[error(
        "Newton iteration did not converge: residual {residual:.3e} after {iterations} iterations"
    )]
    Newton { residual: f64, iterations: usize },

    #[error("transfer operator mismatch: {0}")]
    TransferMismatch(String),

    #[error("configuration error in `{key}`: {message}")]
    Config { key: String, message: String },

    #[error("malformed input: {0}")]
    Input(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
