use thiserror::Error;

/// Errors raised by the library. The CLI maps [`Error::Identity`] to exit
/// code 1 and every other variant to exit code 2.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("iteration did not converge: {0}")]
    NoConvergence(String),
    #[error("root bracketing failed: {0}")]
    Bracket(String),
    #[error("singular point: {0}")]
    Singular(String),
    #[error("identity failed: {0}")]
    Identity(String),
    #[error("usage error: {0}")]
    Usage(String),
    #[error("i/o error: {0}")]
    Io(String),
    #[error("output closed")]
    BrokenPipe,
}

pub type Result<T> = std::result::Result<T, Error>;

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        if e.kind() == std::io::ErrorKind::BrokenPipe {
            return Error::BrokenPipe;
        }
        Error::Io(e.to_string())
    }
}

impl From<csv::Error> for Error {
    fn from(e: csv::Error) -> Self {
        match e.into_kind() {
            csv::ErrorKind::Io(e) => e.into(),
            k => Error::Io(format!("{k:?}")),
        }
    }
}
