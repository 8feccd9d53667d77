use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    /// An argument lies outside the domain of the function.
    #[error("domain error: {0}")]
    Domain(String),

    /// A statistical test cannot be evaluated on this sample.
    #[error("undefined test: {0}")]
    UndefinedTest(String),

    #[error("degenerate reference: {0}")]
    DegenerateReference(String),

    #[error("shape mismatch: expected {expected} values, got {got}")]
    Shape { expected: usize, got: usize },

    #[error("data error: {0}")]
    Data(String),

    /// The requested quantity is outside the range where its approximation is certified.
    #[error("outside validity range: {0}")]
    OutOfValidity(String),

    #[error("range error: {0}")]
    Range(String),

    #[error("arithmetic error: {0}")]
    Arithmetic(String),

    #[error("singular system: determinant is zero")]
    SingularSystem,

    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("usage error: {0}")]
    Usage(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }
}
