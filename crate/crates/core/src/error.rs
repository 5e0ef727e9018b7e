use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    Argument(String),

    #[error("grid mismatch: expected {expected} modes, found {found}")]
    GridMismatch { expected: usize, found: usize },

    #[error("time step mismatch: scheme uses tau = {scheme}, symbols were built for tau = {symbols}")]
    StepMismatch { scheme: f64, symbols: f64 },

    #[error("fixed-point iteration did not converge after {iterations} iterations (residual {residual:e})")]
    SolverFailure { iterations: usize, residual: f64 },

    #[error("step {step}: {source}")]
    AtStep {
        step: usize,
        #[source]
        source: Box<Error>,
    },

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn arg(msg: impl Into<String>) -> Self {
        Error::Argument(msg.into())
    }

    /// Strips step annotations and reports the residual of a solver failure.
    pub fn solver_residual(&self) -> Option<f64> {
        match self {
            Error::SolverFailure { residual, .. } => Some(*residual),
            Error::AtStep { source, .. } => source.solver_residual(),
            _ => None,
        }
    }
}
