use std::fmt;
use std::sync::OnceLock;

use regex::Regex;
use serde::{Deserialize, Serialize};

use crate::error::IdError;

/// Prefix used to reference an image inside message text, as in `IMAGE#2331159`.
pub const IMAGE_REF_PREFIX: &str = "IMAGE#";

/// Identifier of an image: a non-empty string of ASCII digits.
///
/// IDs are stored as strings even when they arrive as JSON numbers, so that
/// both quoting styles found in real pool files round-trip to one canonical
/// form.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(transparent)]
pub struct ImageId(String);

impl ImageId {
    pub fn new(id: impl Into<String>) -> Result<Self, IdError> {
        let id = id.into();
        if id.is_empty() {
            return Err(IdError::Empty);
        }
        if !id.bytes().all(|b| b.is_ascii_digit()) {
            return Err(IdError::NonDigit(id));
        }
        Ok(ImageId(id))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }

    /// The inline form used in message content, e.g. `IMAGE#42`.
    pub fn reference(&self) -> String {
        format!("{IMAGE_REF_PREFIX}{}", self.0)
    }
}

impl fmt::Display for ImageId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl<'de> Deserialize<'de> for ImageId {
    fn deserialize<D>(deserializer: D) -> Result<Self, D::Error>
    where
        D: serde::Deserializer<'de>,
    {
        // Accepts both `"2331159"` and `2331159`.
        let value = serde_json::Value::deserialize(deserializer)?;
        image_id_from_value(&value).map_err(serde::de::Error::custom)
    }
}

/// Converts a JSON string or integer into an [`ImageId`].
pub(crate) fn image_id_from_value(value: &serde_json::Value) -> Result<ImageId, String> {
    match value {
        serde_json::Value::String(s) => {
            ImageId::new(s.clone()).map_err(|e| format!("bad image id: {e}"))
        }
        serde_json::Value::Number(n) => {
            if let Some(u) = n.as_u64() {
                ImageId::new(u.to_string()).map_err(|e| format!("bad image id: {e}"))
            } else {
                Err(format!("image id must be a non-negative integer, got {n}"))
            }
        }
        other => Err(format!("image id must be a string or number, got {other}")),
    }
}

/// An (image ID, caption) pair standing in for the pixels of an image.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ImageDescription {
    pub image_id: ImageId,
    pub caption: String,
    /// Optional locator (path or URL) of the underlying image file.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub media: Option<String>,
}

impl ImageDescription {
    pub fn new(image_id: ImageId, caption: impl Into<String>) -> Self {
        ImageDescription {
            image_id,
            caption: caption.into(),
            media: None,
        }
    }

    pub fn with_media(mut self, media: impl Into<String>) -> Self {
        self.media = Some(media.into());
        self
    }
}

/// Message author role.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Role {
    User,
    Assistant,
}

impl fmt::Display for Role {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Role::User => f.write_str("user"),
            Role::Assistant => f.write_str("assistant"),
        }
    }
}

/// One message of a dialogue.
///
/// Only user messages carry an `image_ids` field (the IDs newly selected in
/// that turn); assistant messages never do. Field order here fixes the key
/// order of the canonical JSON form.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Message {
    pub role: Role,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub image_ids: Option<Vec<ImageId>>,
    pub content: String,
}

impl Message {
    pub fn user(image_ids: Vec<ImageId>, content: impl Into<String>) -> Self {
        Message {
            role: Role::User,
            image_ids: Some(image_ids),
            content: content.into(),
        }
    }

    pub fn assistant(content: impl Into<String>) -> Self {
        Message {
            role: Role::Assistant,
            image_ids: None,
            content: content.into(),
        }
    }
}

/// An ordered user/assistant exchange about a set of images.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Dialogue {
    pub dialogue_id: String,
    pub messages: Vec<Message>,
}

impl Dialogue {
    pub fn new(dialogue_id: impl Into<String>, messages: Vec<Message>) -> Self {
        Dialogue {
            dialogue_id: dialogue_id.into(),
            messages,
        }
    }

    /// Number of complete (user, assistant) turns.
    pub fn turn_count(&self) -> usize {
        self.messages.len() / 2
    }

    /// The user message opening turn `t` (1-based), if present.
    pub fn user_message(&self, turn: usize) -> Option<&Message> {
        self.messages
            .get((turn - 1) * 2)
            .filter(|m| m.role == Role::User)
    }

    /// The assistant message closing turn `t` (1-based), if present.
    pub fn assistant_message(&self, turn: usize) -> Option<&Message> {
        self.messages
            .get((turn - 1) * 2 + 1)
            .filter(|m| m.role == Role::Assistant)
    }

    /// Image IDs introduced by the user message of turn `t` (1-based).
    pub fn images_of_turn(&self, turn: usize) -> &[ImageId] {
        self.user_message(turn)
            .and_then(|m| m.image_ids.as_deref())
            .unwrap_or(&[])
    }

    /// All image IDs introduced across turns, in introduction order.
    pub fn all_image_ids(&self) -> Vec<ImageId> {
        let mut out = Vec::new();
        for m in &self.messages {
            if let Some(ids) = &m.image_ids {
                out.extend(ids.iter().cloned());
            }
        }
        out
    }
}

fn image_ref_regex() -> &'static Regex {
    static RE: OnceLock<Regex> = OnceLock::new();
    RE.get_or_init(|| Regex::new(r"IMAGE#(\d+)").expect("valid regex"))
}

/// Extracts the IDs of all `IMAGE#<digits>` references in `content`,
/// de-duplicated in first-occurrence order.
pub fn extract_image_refs(content: &str) -> Vec<ImageId> {
    let mut seen = Vec::new();
    for cap in image_ref_regex().captures_iter(content) {
        let id = ImageId::new(&cap[1]).expect("regex guarantees digits");
        if !seen.contains(&id) {
            seen.push(id);
        }
    }
    seen
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn image_id_rejects_empty_and_non_digit() {
        assert_eq!(ImageId::new(""), Err(IdError::Empty));
        assert!(matches!(ImageId::new("12a"), Err(IdError::NonDigit(_))));
        assert_eq!(ImageId::new("007").unwrap().as_str(), "007");
    }

    #[test]
    fn extract_refs_in_first_occurrence_order() {
        let ids = extract_image_refs("link IMAGE#2331159 and IMAGE#2330601");
        assert_eq!(
            ids,
            vec![ImageId::new("2331159").unwrap(), ImageId::new("2330601").unwrap()]
        );
    }

    #[test]
    fn extract_refs_empty_when_no_images() {
        assert!(extract_image_refs("no images here").is_empty());
    }

    #[test]
    fn extract_refs_dedups_repeats() {
        let ids = extract_image_refs("IMAGE#5 then IMAGE#5 again");
        assert_eq!(ids, vec![ImageId::new("5").unwrap()]);
    }

    #[test]
    fn extract_refs_takes_full_digit_run() {
        let ids = extract_image_refs("see IMAGE#12 not IMAGE#1");
        assert_eq!(ids.len(), 2);
        assert_eq!(ids[0].as_str(), "12");
        assert_eq!(ids[1].as_str(), "1");
    }
}
