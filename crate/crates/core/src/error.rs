use thiserror::Error;

/// Errors produced by the graph, estimator, generator and exposure routines.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("empty input: no edges found")]
    EmptyInput,

    #[error("invalid argument: {0}")]
    Argument(String),

    /// An oracle or exact enumerator declined an instance above its size budget.
    #[error("refused: {0}")]
    Refused(String),

    #[error("generation failed at shell {shell}: {message}")]
    Generation { shell: usize, message: String },

    #[error("I/O error: {0}")]
    Io(String),
}

impl Error {
    pub(crate) fn argument(msg: impl Into<String>) -> Self {
        Error::Argument(msg.into())
    }

    /// Short stable tag for machine-readable error lines.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::Parse { .. } => "parse",
            Error::EmptyInput => "empty_input",
            Error::Argument(_) => "argument",
            Error::Refused(_) => "refused",
            Error::Generation { .. } => "generation",
            Error::Io(_) => "io",
        }
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
