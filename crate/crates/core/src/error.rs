use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Error, Debug)]
pub enum Error {
    /// Malformed arguments: bad vertex index, self-loop, wrong sizes, bad probabilities.
    #[error("invalid input: {0}")]
    Input(String),
    /// The request is well-formed but outside what the implementation supports.
    #[error("unsupported: {0}")]
    Unsupported(String),
    /// A documented precondition on the graph does not hold.
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
}

impl Error {
    pub fn input(msg: impl Into<String>) -> Self {
        Error::Input(msg.into())
    }
}
