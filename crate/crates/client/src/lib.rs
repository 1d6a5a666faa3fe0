//! HTTP chat-completion client used by the generation and evaluation stages.
//!
//! One client serves three roles: the data LLM that writes dialogues, the
//! judge that scores transcripts, and the model under test. Requests and
//! responses use the common chat-completions JSON body. A replay transport
//! backed by recorded fixtures makes every network-facing path testable
//! offline; unmatched requests fail loudly rather than falling through.

mod config;
mod error;
mod fixture;
mod request;
mod retry;
mod transport;

pub use config::{demo_generation_config, default_generation_config, ClientRole, GenerationConfig};
pub use error::{ClientError, TransportFailure};
pub use fixture::{load_fixture, FixtureEntry, RecordingTransport, ReplayTransport};
pub use request::{
    parts_from_tagged_text, parts_from_tagged_text_with, ChatMessage, ChatRequest, ChatResponse,
    Endpoint, FinishReason, Part, TokenUsage, WireRole, IMAGE_SLOT,
};
pub use retry::{RetryPolicy, Sleeper, ThreadSleeper};
pub use transport::{HttpResponse, HttpTransport, Transport};

use std::sync::{Arc, Mutex};
use std::time::Duration;

/// Chat client: a transport plus retry policy and optional rate limiting.
///
/// Shareable across threads; the only mutable state is the token bucket,
/// which is taken under a lock.
pub struct ChatClient {
    transport: Arc<dyn Transport>,
    retry: RetryPolicy,
    sleeper: Arc<dyn Sleeper>,
    bucket: Option<Mutex<TokenBucket>>,
}

impl ChatClient {
    pub fn new(transport: Arc<dyn Transport>) -> Self {
        ChatClient {
            transport,
            retry: RetryPolicy::default(),
            sleeper: Arc::new(ThreadSleeper),
            bucket: None,
        }
    }

    pub fn with_retry(mut self, retry: RetryPolicy) -> Self {
        self.retry = retry;
        self
    }

    pub fn with_sleeper(mut self, sleeper: Arc<dyn Sleeper>) -> Self {
        self.sleeper = sleeper;
        self
    }

    /// Caps request rate at `per_minute` requests using a token bucket.
    pub fn with_rate_limit(mut self, per_minute: u32) -> Self {
        self.bucket = Some(Mutex::new(TokenBucket::per_minute(per_minute)));
        self
    }

    /// Sends the request, retrying transport errors and rate-limit
    /// responses with exponential backoff. Authentication failures are
    /// never retried. Returns the first successful response.
    pub fn complete_chat(&self, req: &ChatRequest) -> Result<ChatResponse, ClientError> {
        let body = req.wire_body();
        let body_text = serde_json::to_string(&body).expect("wire body serializes");

        let mut last_failure = String::new();
        for attempt in 1..=self.retry.max_attempts {
            if attempt > 1 {
                self.sleeper.sleep(self.retry.delay_before(attempt));
            }
            if let Some(bucket) = &self.bucket {
                let wait = bucket.lock().expect("bucket lock").take();
                if !wait.is_zero() {
                    self.sleeper.sleep(wait);
                }
            }

            match self.transport.send(&req.endpoint, &body_text) {
                Ok(resp) if resp.status == 200 => {
                    return ChatResponse::from_body(&resp.body)
                        .map_err(|e| ClientError::Protocol(e.to_string()));
                }
                Ok(resp) if resp.status == 401 || resp.status == 403 => {
                    return Err(ClientError::Auth(format!(
                        "endpoint rejected credentials with status {}",
                        resp.status
                    )));
                }
                Ok(resp) if resp.status == 429 || resp.status >= 500 => {
                    last_failure = format!("status {}: {}", resp.status, truncate(&resp.body));
                }
                Ok(resp) => {
                    return Err(ClientError::Protocol(format!(
                        "unexpected status {}: {}",
                        resp.status,
                        truncate(&resp.body)
                    )));
                }
                Err(error::TransportFailure::FixtureMiss(msg)) => {
                    return Err(ClientError::FixtureMiss(msg));
                }
                Err(e) => {
                    last_failure = e.to_string();
                }
            }
        }
        Err(ClientError::Transport {
            attempts: self.retry.max_attempts,
            last: last_failure,
        })
    }
}

fn truncate(s: &str) -> String {
    const LIMIT: usize = 200;
    if s.len() <= LIMIT {
        s.to_owned()
    } else {
        let mut end = LIMIT;
        while !s.is_char_boundary(end) {
            end -= 1;
        }
        format!("{}…", &s[..end])
    }
}

/// Simple token bucket: `capacity` tokens refilled evenly over a minute.
struct TokenBucket {
    capacity: u32,
    available: f64,
    refill_per_sec: f64,
    last: std::time::Instant,
}

impl TokenBucket {
    fn per_minute(per_minute: u32) -> Self {
        TokenBucket {
            capacity: per_minute.max(1),
            available: per_minute.max(1) as f64,
            refill_per_sec: per_minute.max(1) as f64 / 60.0,
            last: std::time::Instant::now(),
        }
    }

    /// Takes one token, returning how long the caller must wait first.
    fn take(&mut self) -> Duration {
        let now = std::time::Instant::now();
        let elapsed = now.duration_since(self.last).as_secs_f64();
        self.last = now;
        self.available =
            (self.available + elapsed * self.refill_per_sec).min(self.capacity as f64);
        if self.available >= 1.0 {
            self.available -= 1.0;
            Duration::ZERO
        } else {
            let deficit = 1.0 - self.available;
            self.available = 0.0;
            Duration::from_secs_f64(deficit / self.refill_per_sec)
        }
    }
}
