use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("grid functions live on different grids")]
    GridMismatch,

    #[error("expected {expected} values, got {got}")]
    LengthMismatch { expected: usize, got: usize },

    #[error("mode {mode} outside the resolved range |j| <= {max}")]
    ModeOutOfRange { mode: i64, max: i64 },

    #[error("invalid density: {0}")]
    InvalidDensity(String),

    #[error("operation requires a linear density G = c u^2")]
    NonlinearDensity,

    #[error("invalid time step {0}")]
    InvalidTimeStep(f64),

    #[error("invalid solver configuration: {0}")]
    InvalidSolver(String),

    #[error("fixed-point iteration did not converge after {iterations} sweeps (residual {residual:e})")]
    NonConvergence { iterations: usize, residual: f64 },

    #[error("initial datum has nonzero mean {mean:e}")]
    MeanModeViolation { mean: f64 },

    #[error("step {step} failed: {source}")]
    StepFailed {
        step: usize,
        #[source]
        source: Box<Error>,
    },
}
