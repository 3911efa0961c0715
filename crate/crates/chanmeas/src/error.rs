use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("configuration error: {0}")]
    Config(String),

    #[error("format error at byte {offset}: {reason}")]
    Format { offset: usize, reason: String },

    #[error("unsupported trace version {found} (supported: {supported})")]
    UnsupportedVersion { found: u16, supported: u16 },

    #[error(transparent)]
    Core(#[from] chanmeas_core::Error),

    #[error("{context}: {source}")]
    Io {
        context: String,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub fn io(context: impl Into<String>, source: std::io::Error) -> Self {
        Error::Io { context: context.into(), source }
    }

    /// Process exit status: 2 configuration, 3 data format, 4 numerical.
    pub fn exit_code(&self) -> u8 {
        use chanmeas_core::Error as Core;
        match self {
            Error::Config(_) | Error::Core(Core::InvalidInput(_)) => 2,
            Error::Format { .. } | Error::UnsupportedVersion { .. } | Error::Core(Core::Format { .. }) => 3,
            Error::Io { .. } => 3,
            Error::Core(Core::DegenerateInput(_)) | Error::Core(Core::Conditioning(_)) => 4,
        }
    }
}
