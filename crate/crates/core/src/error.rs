use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// A bound's hypothesis does not hold for the supplied parameters.
    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("vertex set {0:?} is not a clique")]
    NotAClique(Vec<usize>),

    #[error("input contains no {0}-clique")]
    NoClique(usize),

    #[error("instance too large: {0}")]
    TooLarge(String),

    #[error("root solver failed: {0}")]
    Solver(String),

    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidParameter(msg.into())
}
