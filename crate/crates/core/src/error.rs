use thiserror::Error;

/// Errors produced anywhere in the toolkit.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    Argument(String),

    #[error("singular parameter: {0}")]
    Singular(String),

    #[error("steady state is not unique: null space dimension {nullity} (smallest singular values {singular_values:?})")]
    Degenerate {
        nullity: usize,
        singular_values: Vec<f64>,
    },

    #[error("solver failure: {0}")]
    Solver(String),

    #[error("fit failed: {message} (residual {residual:.3e})")]
    Fit { message: String, residual: f64 },

    #[error("ill-conditioned problem: {0}")]
    Conditioning(String),

    #[error("reconstruction failed: {0}")]
    Reconstruction(String),

    #[error("config error: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn arg(msg: impl Into<String>) -> Self {
        Error::Argument(msg.into())
    }

    /// Solver-type errors map to exit code 3, everything related to input to 2.
    pub fn is_solver_error(&self) -> bool {
        matches!(
            self,
            Error::Degenerate { .. }
                | Error::Solver(_)
                | Error::Fit { .. }
                | Error::Conditioning(_)
                | Error::Reconstruction(_)
                | Error::Singular(_)
        )
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
