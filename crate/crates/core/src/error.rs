use alloc::string::String;
use core::fmt;

pub type Result<T> = core::result::Result<T, Error>;

/// Errors raised by the measurement pipeline.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// An argument violated an operation's precondition.
    InvalidInput(String),
    /// A byte stream did not match the lane layout.
    Format { offset: usize, reason: String },
    /// A series has no variance to normalize.
    DegenerateInput(String),
    /// A linear system or recursion was too ill-conditioned to solve.
    Conditioning(String),
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::InvalidInput(msg) => write!(f, "invalid input: {msg}"),
            Error::Format { offset, reason } => {
                write!(f, "format error at byte {offset}: {reason}")
            }
            Error::DegenerateInput(msg) => write!(f, "degenerate input: {msg}"),
            Error::Conditioning(msg) => write!(f, "numerical conditioning: {msg}"),
        }
    }
}

impl core::error::Error for Error {}
