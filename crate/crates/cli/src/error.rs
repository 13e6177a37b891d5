use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Invalid(String),

    #[error(transparent)]
    Core(#[from] stochlab::Error),

    #[error("config: {0}")]
    Config(#[from] toml::de::Error),

    #[error("write failed: {0}")]
    Io(#[from] std::io::Error),

    #[error("write failed: {0}")]
    Json(#[from] serde_json::Error),

    #[error("{failed} self-check(s) failed")]
    SelfcheckFailed { failed: usize },
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Invalid(_) | CliError::Core(_) | CliError::Config(_) => 2,
            CliError::Io(_) | CliError::Json(_) | CliError::SelfcheckFailed { .. } => 1,
        }
    }
}

pub type CliResult<T> = Result<T, CliError>;

pub fn invalid<T>(msg: impl Into<String>) -> CliResult<T> {
    Err(CliError::Invalid(msg.into()))
}
