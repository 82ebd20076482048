use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("polynomials live in different variable contexts")]
    ContextMismatch,
    #[error("arity mismatch: expected {expected}, got {found}")]
    Arity { expected: usize, found: usize },
    #[error("unknown variable `{0}`")]
    UnknownVariable(String),
    #[error("duplicate variable `{0}`")]
    DuplicateVariable(String),
    #[error("no binding for variable `{0}`")]
    MissingBinding(String),
    #[error("context cannot be embedded: variable `{0}` is absent from the target context")]
    NotEmbeddable(String),
    #[error("parse error at {line}:{column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("invalid template: {0}")]
    InvalidTemplate(String),
    #[error("computation budget exceeded: {0}")]
    BudgetExceeded(String),
    #[error("polynomial system is empty")]
    EmptySystem,
    #[error("zero polynomial")]
    ZeroPolynomial,
    #[error("polynomial is not univariate")]
    NotUnivariate,
    #[error("enumeration of {0} points exceeds the configured cap")]
    EnumerationCap(u128),
    #[error("solver unavailable: {0}")]
    SolverUnavailable(String),
    #[error("malformed solver output: {0}")]
    MalformedModel(String),
    #[error("i/o error: {0}")]
    Io(String),
}

impl Error {
    pub(crate) fn parse(line: usize, column: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            line,
            column,
            message: message.into(),
        }
    }

    pub fn is_budget_exceeded(&self) -> bool {
        matches!(self, Error::BudgetExceeded(_))
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
