use thiserror::Error;

/// Library-wide error type. Variants are grouped by the exit status the CLI
/// maps them to: configuration/usage problems (2), numerical aborts (3) and
/// verification failures (4).
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid grid: {0}")]
    Grid(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("configuration error: {0}")]
    Config(String),

    #[error("numerical abort: {0}")]
    Numerical(String),

    #[error("verification failure: {0}")]
    Verification(String),

    #[error("checkpoint format error: {0}")]
    Checkpoint(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Error {
        Error::Io(e.into())
    }
}

impl Error {
    /// Process exit status used by the command-line driver.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Grid(_) | Error::InvalidArgument(_) | Error::Config(_) => 2,
            Error::Numerical(_) => 3,
            Error::Verification(_) => 4,
            Error::Checkpoint(_) | Error::Io(_) => 2,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
