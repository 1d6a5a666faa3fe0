//! Record/replay fixtures for deterministic offline runs.
//!
//! A fixture is JSON Lines of `{"request_hash", "response_body", "status"}`.
//! Entries sharing a hash form a FIFO queue, so a retried request can see a
//! 429 first and a 200 next. The hash `"*"` is a wildcard queue consumed by
//! any request that has no exact match — handy for scripting a sequence of
//! replies without pre-computing hashes. Requests with no match fail loudly.

use std::collections::HashMap;
use std::collections::VecDeque;
use std::fs;
use std::io::Write;
use std::path::Path;
use std::sync::Mutex;

use serde::{Deserialize, Serialize};

use crate::error::TransportFailure;
use crate::request::{hash_request, Endpoint};
use crate::transport::{HttpResponse, Transport};

/// One recorded exchange.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FixtureEntry {
    pub request_hash: String,
    pub response_body: String,
    pub status: u16,
}

impl FixtureEntry {
    /// Entry that matches any request, consumed in file order.
    pub fn wildcard(response_body: impl Into<String>, status: u16) -> Self {
        FixtureEntry {
            request_hash: "*".into(),
            response_body: response_body.into(),
            status,
        }
    }

    /// Wildcard 200 entry wrapping `content` in a chat-completions body.
    pub fn wildcard_chat(content: &str) -> Self {
        let body = serde_json::json!({
            "choices": [{"message": {"content": content}, "finish_reason": "stop"}],
            "usage": {"prompt_tokens": 0, "completion_tokens": 0}
        });
        FixtureEntry::wildcard(body.to_string(), 200)
    }
}

/// Loads a fixture file (JSON Lines).
pub fn load_fixture(path: &Path) -> std::io::Result<Vec<FixtureEntry>> {
    let text = fs::read_to_string(path)?;
    let mut entries = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let entry: FixtureEntry = serde_json::from_str(line).map_err(|e| {
            std::io::Error::new(
                std::io::ErrorKind::InvalidData,
                format!("{}:{}: {e}", path.display(), lineno + 1),
            )
        })?;
        entries.push(entry);
    }
    Ok(entries)
}

/// Transport that replays recorded responses keyed by request hash.
pub struct ReplayTransport {
    by_hash: Mutex<HashMap<String, VecDeque<HttpResponse>>>,
    wildcard: Mutex<VecDeque<HttpResponse>>,
    has_wildcards: bool,
}

impl ReplayTransport {
    pub fn new(entries: Vec<FixtureEntry>) -> Self {
        let mut by_hash: HashMap<String, VecDeque<HttpResponse>> = HashMap::new();
        let mut wildcard = VecDeque::new();
        for e in entries {
            let resp = HttpResponse {
                status: e.status,
                body: e.response_body,
            };
            if e.request_hash == "*" {
                wildcard.push_back(resp);
            } else {
                by_hash.entry(e.request_hash).or_default().push_back(resp);
            }
        }
        let has_wildcards = !wildcard.is_empty();
        ReplayTransport {
            by_hash: Mutex::new(by_hash),
            wildcard: Mutex::new(wildcard),
            has_wildcards,
        }
    }

    pub fn from_file(path: &Path) -> std::io::Result<Self> {
        Ok(Self::new(load_fixture(path)?))
    }

    /// True when the fixture contains wildcard entries. Wildcards are
    /// consumed in request order, so callers should run sequentially to
    /// keep the pairing deterministic.
    pub fn has_wildcards(&self) -> bool {
        self.has_wildcards
    }
}

impl Transport for ReplayTransport {
    fn send(&self, endpoint: &Endpoint, body: &str) -> Result<HttpResponse, TransportFailure> {
        let hash = hash_request(&endpoint.base_url, body);
        if let Some(queue) = self.by_hash.lock().expect("replay lock").get_mut(&hash) {
            if let Some(resp) = queue.pop_front() {
                return Ok(resp);
            }
        }
        if let Some(resp) = self.wildcard.lock().expect("wildcard lock").pop_front() {
            return Ok(resp);
        }
        Err(TransportFailure::FixtureMiss(format!(
            "hash {hash} (model {}, body starts {:?})",
            endpoint.model,
            &body[..body.len().min(80)]
        )))
    }
}

/// Wraps another transport and appends every successful exchange to a
/// fixture file, enabling later replay.
pub struct RecordingTransport<T: Transport> {
    inner: T,
    out: Mutex<fs::File>,
}

impl<T: Transport> RecordingTransport<T> {
    pub fn create(inner: T, path: &Path) -> std::io::Result<Self> {
        Ok(RecordingTransport {
            inner,
            out: Mutex::new(fs::File::create(path)?),
        })
    }
}

impl<T: Transport> Transport for RecordingTransport<T> {
    fn send(&self, endpoint: &Endpoint, body: &str) -> Result<HttpResponse, TransportFailure> {
        let resp = self.inner.send(endpoint, body)?;
        let entry = FixtureEntry {
            request_hash: hash_request(&endpoint.base_url, body),
            response_body: resp.body.clone(),
            status: resp.status,
        };
        let mut out = self.out.lock().expect("recorder lock");
        let line = serde_json::to_string(&entry).expect("entry serializes");
        let _ = writeln!(out, "{line}");
        Ok(resp)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::{default_generation_config, ClientRole};
    use crate::request::{ChatMessage, ChatRequest};
    use crate::retry::RetryPolicy;
    use crate::ChatClient;
    use std::sync::Arc;

    fn request(text: &str) -> ChatRequest {
        ChatRequest {
            endpoint: Endpoint::new("mock://chat", "mock-model"),
            system: "You are a helpful assistant.".into(),
            messages: vec![ChatMessage::user_text(text)],
            config: default_generation_config(ClientRole::DataLlm),
        }
    }

    fn chat_body(content: &str) -> String {
        serde_json::json!({
            "choices": [{"message": {"content": content}, "finish_reason": "stop"}],
            "usage": {"prompt_tokens": 1, "completion_tokens": 1}
        })
        .to_string()
    }

    #[test]
    fn replay_echoes_recorded_response() {
        let req = request("say OK");
        let transport = ReplayTransport::new(vec![FixtureEntry {
            request_hash: req.request_hash(),
            response_body: chat_body("OK"),
            status: 200,
        }]);
        let client = ChatClient::new(Arc::new(transport));
        let resp = client.complete_chat(&req).unwrap();
        assert_eq!(resp.content, "OK");
    }

    #[test]
    fn rate_limited_twice_then_success() {
        let req = request("persist");
        let hash = req.request_hash();
        let entries = vec![
            FixtureEntry {
                request_hash: hash.clone(),
                response_body: "slow down".into(),
                status: 429,
            },
            FixtureEntry {
                request_hash: hash.clone(),
                response_body: "slow down".into(),
                status: 429,
            },
            FixtureEntry {
                request_hash: hash,
                response_body: chat_body("finally"),
                status: 200,
            },
        ];
        let client = ChatClient::new(Arc::new(ReplayTransport::new(entries)))
            .with_retry(RetryPolicy::immediate(3));
        let resp = client.complete_chat(&req).unwrap();
        assert_eq!(resp.content, "finally");
    }

    #[test]
    fn retries_do_not_exceed_policy_maximum() {
        let req = request("always limited");
        let entries: Vec<FixtureEntry> = (0..5)
            .map(|_| FixtureEntry::wildcard("limited", 429))
            .collect();
        let transport = Arc::new(ReplayTransport::new(entries));
        let client =
            ChatClient::new(transport.clone()).with_retry(RetryPolicy::immediate(3));
        let err = client.complete_chat(&req).unwrap_err();
        assert!(matches!(
            err,
            crate::ClientError::Transport { attempts: 3, .. }
        ));
        // Two wildcard entries must remain: exactly 3 were consumed.
        assert!(transport.wildcard.lock().unwrap().len() == 2);
    }

    #[test]
    fn auth_failure_is_never_retried() {
        let req = request("who am i");
        let transport = Arc::new(ReplayTransport::new(vec![
            FixtureEntry::wildcard("forbidden", 401),
            FixtureEntry::wildcard_chat("should not be reached"),
        ]));
        let client =
            ChatClient::new(transport.clone()).with_retry(RetryPolicy::immediate(3));
        assert!(matches!(
            client.complete_chat(&req).unwrap_err(),
            crate::ClientError::Auth(_)
        ));
        assert_eq!(transport.wildcard.lock().unwrap().len(), 1);
    }

    #[test]
    fn malformed_body_is_a_protocol_error() {
        let req = request("gibberish please");
        let client = ChatClient::new(Arc::new(ReplayTransport::new(vec![
            FixtureEntry::wildcard("{\"not\": \"a completion\"}", 200),
        ])));
        assert!(matches!(
            client.complete_chat(&req).unwrap_err(),
            crate::ClientError::Protocol(_)
        ));
    }

    #[test]
    fn unmatched_request_fails_loudly() {
        let req = request("nothing recorded");
        let client = ChatClient::new(Arc::new(ReplayTransport::new(vec![])));
        assert!(matches!(
            client.complete_chat(&req).unwrap_err(),
            crate::ClientError::FixtureMiss(_)
        ));
    }

    #[test]
    fn recording_then_replaying_round_trips() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("fixture.jsonl");

        let req = request("record me");
        let backing = ReplayTransport::new(vec![FixtureEntry {
            request_hash: req.request_hash(),
            response_body: chat_body("recorded"),
            status: 200,
        }]);
        let recorder = RecordingTransport::create(backing, &path).unwrap();
        let client = ChatClient::new(Arc::new(recorder));
        assert_eq!(client.complete_chat(&req).unwrap().content, "recorded");
        drop(client);

        let replayed = ChatClient::new(Arc::new(ReplayTransport::from_file(&path).unwrap()));
        assert_eq!(replayed.complete_chat(&req).unwrap().content, "recorded");
    }
}
