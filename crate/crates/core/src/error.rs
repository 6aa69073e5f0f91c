use thiserror::Error;

/// Errors raised by the codecs, the harness and the file formats.
#[derive(Debug, Error)]
pub enum Error {
    /// Caller violated an operation contract (wrong length, reused one-time key, ...).
    #[error("usage error: {0}")]
    Usage(String),

    /// Argument outside the mathematical domain of the operation (e.g. inverting zero).
    #[error("domain error: {0}")]
    Domain(String),

    /// Parameters cannot be satisfied; the message names the violated inequality.
    #[error("configuration error: {0}")]
    Config(String),

    /// The received word is beyond what the decoder can correct.
    #[error("decode failure: {0}")]
    Decode(String),

    /// Malformed key, codeword or puzzle encoding.
    #[error("format error: {0}")]
    Format(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn usage(msg: impl Into<String>) -> Self {
        Error::Usage(msg.into())
    }

    pub(crate) fn config(msg: impl Into<String>) -> Self {
        Error::Config(msg.into())
    }

    pub(crate) fn decode(msg: impl Into<String>) -> Self {
        Error::Decode(msg.into())
    }

    pub(crate) fn format(msg: impl Into<String>) -> Self {
        Error::Format(msg.into())
    }

    /// True for the decode-failure variant (block overflow, no majority, ...).
    pub fn is_decode_failure(&self) -> bool {
        matches!(self, Error::Decode(_))
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
