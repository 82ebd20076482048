use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{path}:{line}:{column}: {message}")]
    Syntax {
        path: String,
        line: usize,
        column: usize,
        message: String,
    },
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Core(#[from] polyloop_core::Error),
    #[error("{0}")]
    Io(#[from] std::io::Error),
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
}

pub type CliResult<T> = Result<T, CliError>;

impl CliError {
    /// Process exit code for this error.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Syntax { .. } | CliError::Usage(_) => 1,
            CliError::Core(e) if e.is_budget_exceeded() => 2,
            CliError::Core(polyloop_core::Error::Parse { .. })
            | CliError::Core(polyloop_core::Error::UnknownVariable(_))
            | CliError::Core(polyloop_core::Error::Arity { .. })
            | CliError::Core(polyloop_core::Error::InvalidTemplate(_)) => 1,
            _ => 3,
        }
    }
}
