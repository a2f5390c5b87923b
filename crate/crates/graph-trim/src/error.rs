use std::fmt;
use std::io;

/// Errors surfaced by loaders, generators, and engine configuration.
#[derive(Debug)]
pub enum Error {
    /// Underlying I/O failure while reading or writing a graph file.
    Io(io::Error),
    /// Malformed edge-list input; `line` is 1-based.
    Parse { line: usize, msg: String },
    /// Binary CSR stream with a bad magic, version, or structural violation.
    Format(String),
    /// A value does not fit the on-disk or in-memory representation.
    Capacity(String),
    /// An argument is outside its documented domain.
    InvalidArgument(String),
    /// A generator was asked for an impossible graph.
    Infeasible(String),
    /// An engine was configured inconsistently.
    Config(String),
    /// The supplied transpose does not match the graph it claims to reverse.
    TransposeMismatch {
        graph: (usize, usize),
        transpose: (usize, usize),
    },
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::Io(e) => write!(f, "i/o error: {e}"),
            Error::Parse { line, msg } => write!(f, "parse error at line {line}: {msg}"),
            Error::Format(msg) => write!(f, "format error: {msg}"),
            Error::Capacity(msg) => write!(f, "capacity error: {msg}"),
            Error::InvalidArgument(msg) => write!(f, "invalid argument: {msg}"),
            Error::Infeasible(msg) => write!(f, "infeasible request: {msg}"),
            Error::Config(msg) => write!(f, "configuration error: {msg}"),
            Error::TransposeMismatch { graph, transpose } => write!(
                f,
                "transpose mismatch: graph has (n, m) = {graph:?} but transpose has {transpose:?}"
            ),
        }
    }
}

impl std::error::Error for Error {
    fn source(&self) -> Option<&(dyn std::error::Error + 'static)> {
        match self {
            Error::Io(e) => Some(e),
            _ => None,
        }
    }
}

impl From<io::Error> for Error {
    fn from(e: io::Error) -> Self {
        Error::Io(e)
    }
}
