//! Request/response types and the chat-completions wire body.
//!
//! Serialization is stable: the same request always produces the same wire
//! bytes (the auth header is added at send time and never hashed), which is
//! what keys the record/replay fixtures.

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use crate::config::GenerationConfig;

/// Marker inside framed prompt text where an image embedding is spliced in.
pub const IMAGE_SLOT: &str = "<ImageHere>";

/// Where a request goes: base URL, model name, and the env var holding the
/// API key. Secrets never live in config structs or fixtures.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Endpoint {
    pub base_url: String,
    pub model: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub api_key_env: Option<String>,
}

impl Endpoint {
    pub fn new(base_url: impl Into<String>, model: impl Into<String>) -> Self {
        Endpoint {
            base_url: base_url.into(),
            model: model.into(),
            api_key_env: None,
        }
    }

    pub fn with_api_key_env(mut self, env: impl Into<String>) -> Self {
        self.api_key_env = Some(env.into());
        self
    }
}

/// Message roles on the wire.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum WireRole {
    System,
    User,
    Assistant,
}

/// One content part: a text segment or an image reference.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Part {
    Text(String),
    Image(String),
}

/// A chat message whose content interleaves text and image parts.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChatMessage {
    pub role: WireRole,
    pub parts: Vec<Part>,
}

impl ChatMessage {
    pub fn user_text(text: impl Into<String>) -> Self {
        ChatMessage {
            role: WireRole::User,
            parts: vec![Part::Text(text.into())],
        }
    }

    pub fn assistant_text(text: impl Into<String>) -> Self {
        ChatMessage {
            role: WireRole::Assistant,
            parts: vec![Part::Text(text.into())],
        }
    }

    pub fn user_parts(parts: Vec<Part>) -> Self {
        ChatMessage {
            role: WireRole::User,
            parts,
        }
    }

    /// Concatenated text of the message with image parts elided.
    pub fn text(&self) -> String {
        self.parts
            .iter()
            .filter_map(|p| match p {
                Part::Text(t) => Some(t.as_str()),
                Part::Image(_) => None,
            })
            .collect()
    }
}

/// A complete chat request.
///
/// `system` is the single system message for the call; an empty string
/// means the request carries no system message on the wire (used when the
/// prompt text already embeds its own framing).
#[derive(Debug, Clone, PartialEq)]
pub struct ChatRequest {
    pub endpoint: Endpoint,
    pub system: String,
    pub messages: Vec<ChatMessage>,
    pub config: GenerationConfig,
}

impl ChatRequest {
    /// Builds the chat-completions JSON body. Deterministic field order.
    pub fn wire_body(&self) -> Value {
        let mut messages = Vec::new();
        if !self.system.is_empty() {
            messages.push(json!({"role": "system", "content": self.system}));
        }
        for m in &self.messages {
            let role = match m.role {
                WireRole::System => "system",
                WireRole::User => "user",
                WireRole::Assistant => "assistant",
            };
            let content = if m.parts.len() == 1 {
                if let Part::Text(t) = &m.parts[0] {
                    Value::String(t.clone())
                } else {
                    parts_value(&m.parts)
                }
            } else {
                parts_value(&m.parts)
            };
            messages.push(json!({"role": role, "content": content}));
        }

        let mut body = serde_json::Map::new();
        body.insert("model".into(), Value::String(self.endpoint.model.clone()));
        body.insert("messages".into(), Value::Array(messages));
        body.insert("temperature".into(), json!(self.config.temperature));
        body.insert("top_p".into(), json!(self.config.top_p));
        body.insert("max_tokens".into(), json!(self.config.max_tokens));
        body.insert(
            "frequency_penalty".into(),
            json!(self.config.frequency_penalty),
        );
        body.insert(
            "presence_penalty".into(),
            json!(self.config.presence_penalty),
        );
        if let Some(b) = self.config.beam_size {
            body.insert("beam_size".into(), json!(b));
        }
        if let Some(r) = self.config.repetition_penalty {
            body.insert("repetition_penalty".into(), json!(r));
        }
        if let Some(l) = self.config.length_penalty {
            body.insert("length_penalty".into(), json!(l));
        }
        Value::Object(body)
    }

    /// Hash keying record/replay fixtures: SHA-256 of URL + wire body,
    /// excluding any auth material.
    pub fn request_hash(&self) -> String {
        let body = serde_json::to_string(&self.wire_body()).expect("body serializes");
        hash_request(&self.endpoint.base_url, &body)
    }
}

pub(crate) fn hash_request(url: &str, body: &str) -> String {
    let mut hasher = Sha256::new();
    hasher.update(url.as_bytes());
    hasher.update([0]);
    hasher.update(body.as_bytes());
    hex::encode(hasher.finalize())
}

fn parts_value(parts: &[Part]) -> Value {
    Value::Array(
        parts
            .iter()
            .map(|p| match p {
                Part::Text(t) => json!({"type": "text", "text": t}),
                Part::Image(locator) => {
                    json!({"type": "image_url", "image_url": {"url": locator}})
                }
            })
            .collect(),
    )
}

/// Splits framed prompt text into wire parts at each [`IMAGE_SLOT`] marker,
/// pairing the k-th slot with `media[k]`.
///
/// Errors if the slot count and media count disagree.
pub fn parts_from_tagged_text(text: &str, media: &[String]) -> Result<Vec<Part>, String> {
    parts_from_tagged_text_with(text, media, IMAGE_SLOT)
}

/// [`parts_from_tagged_text`] with a custom slot marker, for framings that
/// rename the slot token.
pub fn parts_from_tagged_text_with(
    text: &str,
    media: &[String],
    slot: &str,
) -> Result<Vec<Part>, String> {
    let pieces: Vec<&str> = text.split(slot).collect();
    let slots = pieces.len() - 1;
    if slots != media.len() {
        return Err(format!(
            "prompt has {slots} image slots but {} media entries",
            media.len()
        ));
    }
    let mut parts = Vec::with_capacity(pieces.len() * 2);
    for (i, piece) in pieces.iter().enumerate() {
        if !piece.is_empty() {
            parts.push(Part::Text((*piece).to_owned()));
        }
        if i < slots {
            parts.push(Part::Image(media[i].clone()));
        }
    }
    if parts.is_empty() {
        parts.push(Part::Text(String::new()));
    }
    Ok(parts)
}

/// Why a completion stopped.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FinishReason {
    Stop,
    Length,
    Other,
}

/// Token accounting reported by the endpoint.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct TokenUsage {
    #[serde(default)]
    pub prompt_tokens: u64,
    #[serde(default)]
    pub completion_tokens: u64,
}

/// A parsed chat completion.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChatResponse {
    pub content: String,
    pub finish_reason: FinishReason,
    pub usage: TokenUsage,
}

impl ChatResponse {
    /// Parses a chat-completions response body; any structural deviation is
    /// a protocol error.
    pub fn from_body(body: &str) -> Result<ChatResponse, String> {
        let value: Value =
            serde_json::from_str(body).map_err(|e| format!("response body is not JSON: {e}"))?;
        let choice = value
            .get("choices")
            .and_then(Value::as_array)
            .and_then(|c| c.first())
            .ok_or("response has no choices")?;
        let content = choice
            .get("message")
            .and_then(|m| m.get("content"))
            .and_then(Value::as_str)
            .ok_or("choice has no message content")?
            .to_owned();
        let finish_reason = match choice.get("finish_reason").and_then(Value::as_str) {
            Some("stop") | None => FinishReason::Stop,
            Some("length") => FinishReason::Length,
            Some(_) => FinishReason::Other,
        };
        let usage = value
            .get("usage")
            .and_then(|u| serde_json::from_value(u.clone()).ok())
            .unwrap_or_default();
        Ok(ChatResponse {
            content,
            finish_reason,
            usage,
        })
    }
}
