use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("distance {distance} m is below the path-loss reference distance {reference} m")]
    BelowReferenceDistance { distance: f64, reference: f64 },

    #[error("division by zero: {0}")]
    DivisionByZero(&'static str),

    #[error("closed form undefined: {0}")]
    Undefined(String),

    #[error("solver failed: {0}")]
    Solver(String),

    #[error("no feasible randomization candidate (best score {best_score})")]
    NoFeasibleCandidate {
        best_score: f64,
        best: Box<crate::model::ReflectionVector>,
    },

    #[error("config error: {0}")]
    Config(String),

    #[error("{failed} of {total} runs failed at {point}")]
    FailureThreshold { point: String, failed: usize, total: usize },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
