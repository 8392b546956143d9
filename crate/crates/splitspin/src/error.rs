use thiserror::Error;

/// Errors produced by state construction, splitting, moment evaluation and
/// criterion reports.
#[derive(Debug, Error)]
pub enum Error {
    /// A precondition on the arguments does not hold.
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// The request exceeds a built-in size guard.
    #[error("resource limit: {0}")]
    ResourceLimit(String),

    /// A matrix function was requested outside its spectral domain.
    #[error("domain error: {0}")]
    Domain(String),

    /// A gain optimization hit a vanishing variance in the remote subsystem.
    #[error("degenerate variance: {0}")]
    DegenerateVariance(String),

    /// A criterion is undefined for the supplied state.
    #[error("degenerate state: {0}")]
    DegenerateState(String),

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),

    /// A shot record file does not follow the CSV schema.
    #[error("csv error: {0}")]
    Csv(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }

    /// Process exit code used by the command-line front end.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::ResourceLimit(_) => 3,
            _ => 2,
        }
    }
}
