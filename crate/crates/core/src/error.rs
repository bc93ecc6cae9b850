use thiserror::Error;

/// Stage of an evolve-filter-relax step, used to tag propagated failures.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EfrStage {
    Evolve,
    Indicator,
    Filter,
}

impl std::fmt::Display for EfrStage {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            EfrStage::Evolve => write!(f, "evolve"),
            EfrStage::Indicator => write!(f, "indicator"),
            EfrStage::Filter => write!(f, "filter"),
        }
    }
}

/// Errors produced by mesh construction, assembly, solves, and time stepping.
///
/// Solver residuals are reported as `f64` regardless of the working scalar.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("solver did not converge after {iterations} iterations (relative residual {residual:e}, tolerance {tolerance:e})")]
    SolverFailure {
        iterations: usize,
        residual: f64,
        tolerance: f64,
    },

    #[error("matrix is structurally singular (row {row} has no entries)")]
    SingularMatrix { row: usize },

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("{stage} stage failed: {source}")]
    EfrStageFailed {
        stage: EfrStage,
        #[source]
        source: Box<Error>,
    },

    #[error("time step {step} (t = {time}) failed: {source}")]
    StepFailed {
        step: usize,
        time: f64,
        #[source]
        source: Box<Error>,
    },
}

impl Error {
    pub fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }

    /// Wrap an error with the EFR stage it occurred in.
    pub fn in_stage(self, stage: EfrStage) -> Self {
        Error::EfrStageFailed {
            stage,
            source: Box::new(self),
        }
    }

    /// Wrap an error with the time step it occurred in.
    pub fn at_step(self, step: usize, time: f64) -> Self {
        Error::StepFailed {
            step,
            time,
            source: Box::new(self),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
