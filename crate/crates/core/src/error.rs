use thiserror::Error;

/// Rejection of an image ID at construction time.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum IdError {
    #[error("image id is empty")]
    Empty,
    #[error("image id {0:?} contains non-digit characters")]
    NonDigit(String),
}

/// Errors from [`crate::parse_dialogues`].
///
/// `Syntax` means the text is not JSON at all (not even in the relaxed
/// single-quoted form models sometimes emit); `Schema` means it is JSON but
/// does not follow the dialogue array layout.
#[derive(Debug, Error)]
pub enum ParseError {
    #[error("invalid JSON: {0}")]
    Syntax(String),
    #[error("schema violation: {0}")]
    Schema(String),
}

/// Errors from loading or saving image-description pool files.
#[derive(Debug, Error)]
pub enum PoolFileError {
    #[error("io error on {path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("invalid pool file {path}: {message}")]
    Format { path: String, message: String },
}
