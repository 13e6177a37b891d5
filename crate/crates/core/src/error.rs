use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("rejected input: {0}")]
    RejectedInput(String),

    #[error("rejected parameters: {0}")]
    RejectedParameters(String),

    #[error("rejected spec: {0}")]
    RejectedSpec(String),

    #[error("rejected grid: {0}")]
    RejectedGrid(String),

    #[error("undefined correlation: {0}")]
    UndefinedCorrelation(String),

    #[error("undefined score: calls + puts = 0")]
    UndefinedScore,

    #[error("mutual information diverges for |a| = {0} >= 1")]
    Divergence(f64),

    #[error("out of regime: {0}")]
    OutOfRegime(String),

    #[error("x = {x} lies outside the achievable interval [{lo}, {hi}]")]
    OutOfSupport { x: f64, lo: f64, hi: f64 },

    #[error("saddle not found: {0}")]
    SaddleNotFound(String),

    #[error("invalid saddle at z = {z}: second derivative {phi2} is not negative")]
    InvalidSaddle { z: f64, phi2: f64 },

    #[error("numerical failure: {detail} (residual {residual:e})")]
    NumericalFailure { detail: String, residual: f64 },

    #[error("grid overflow: {leaked:e} of mass leaked; extend the grid to at least {suggested_cells} cells")]
    GridOverflow { leaked: f64, suggested_cells: usize },

    #[error("insufficient data: need {needed}, got {got}")]
    InsufficientData { needed: usize, got: usize },

    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Toml(#[from] toml::de::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn reject<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::RejectedInput(msg.into()))
}
