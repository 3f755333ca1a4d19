use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    Argument(String),

    #[error("sampling failed for {component}: no accepted draw in {attempts} attempts")]
    Sampling { component: String, attempts: usize },

    #[error("format error at row {row}: {message}")]
    Format { row: usize, message: String },

    #[error("capability error: {0}")]
    Capability(String),

    #[error("learner state error: {0}")]
    State(String),

    #[error("protocol error: {0}")]
    Protocol(String),

    #[error("insufficient data: {0}")]
    InsufficientData(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn arg(msg: impl Into<String>) -> Self {
        Error::Argument(msg.into())
    }
}
