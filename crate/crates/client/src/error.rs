use thiserror::Error;

/// Failures surfaced by [`crate::ChatClient::complete_chat`].
#[derive(Debug, Error)]
pub enum ClientError {
    /// Transport-level failure after all retries were spent.
    #[error("transport failed after {attempts} attempts: {last}")]
    Transport { attempts: u32, last: String },
    /// Credential rejection; never retried.
    #[error("authentication failed: {0}")]
    Auth(String),
    /// The endpoint answered, but not with a usable chat completion.
    #[error("protocol error: {0}")]
    Protocol(String),
    /// A replay transport had no recorded response for this request.
    #[error("no fixture entry matches request: {0}")]
    FixtureMiss(String),
}

/// Failure of a single transport send (pre-retry classification).
#[derive(Debug, Error)]
pub enum TransportFailure {
    #[error("connection failed: {0}")]
    Connect(String),
    #[error("no fixture entry matches request: {0}")]
    FixtureMiss(String),
}
