//! Crate-wide error type.

use std::fmt;
use std::io;

/// Errors produced by graph loading, slicing, and simulation.
///
/// The variants are grouped by how a caller should react: `Io`, `Parse`,
/// and `Format` mean the input bytes are unusable; `Config` and `Capacity`
/// mean the parameters must change.
#[derive(Debug)]
pub enum Error {
    /// Reading the input failed at the OS level.
    Io(io::Error),
    /// A text input line could not be parsed. `line` is 1-based.
    Parse { line: usize, message: String },
    /// A binary artifact is corrupt or truncated.
    Format(String),
    /// Invalid parameter combination.
    Config(String),
    /// Input exceeds a documented size bound of the chosen engine.
    Capacity(String),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::Io(e) => write!(f, "i/o error: {e}"),
            Error::Parse { line, message } => write!(f, "parse error at line {line}: {message}"),
            Error::Format(msg) => write!(f, "format error: {msg}"),
            Error::Config(msg) => write!(f, "config error: {msg}"),
            Error::Capacity(msg) => write!(f, "capacity error: {msg}"),
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

pub type Result<T> = std::result::Result<T, Error>;
