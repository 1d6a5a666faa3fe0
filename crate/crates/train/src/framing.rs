use serde::{Deserialize, Serialize};

/// Text framing used to assemble training sequences and evaluation prompts.
///
/// Defaults follow the conversational fine-tuning convention this pipeline
/// targets: a fixed system message, `###` separating system/user/assistant
/// blocks, `Human:`/`Assistant:` speaker markers, and
/// `<Img><ImageHere></Img>` marking where an image embedding is spliced in.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct FramingConfig {
    pub system_message: String,
    pub separator: String,
    pub user_marker: String,
    pub assistant_marker: String,
    pub image_open: String,
    pub image_slot: String,
    pub image_close: String,
}

impl Default for FramingConfig {
    fn default() -> Self {
        FramingConfig {
            system_message: "Give the following image: <Img>ImageContent</Img>. \
                             You will be able to see the image once I provide it to you. \
                             Please answer my questions."
                .into(),
            separator: "###".into(),
            user_marker: "Human".into(),
            assistant_marker: "Assistant".into(),
            image_open: "<Img>".into(),
            image_slot: "<ImageHere>".into(),
            image_close: "</Img>".into(),
        }
    }
}

impl FramingConfig {
    /// Separator non-empty; the slot tag distinct from its delimiters.
    pub fn validate(&self) -> Result<(), String> {
        if self.separator.is_empty() {
            return Err("separator must be non-empty".into());
        }
        if self.image_slot == self.image_open || self.image_slot == self.image_close {
            return Err("image_slot must differ from image_open/image_close".into());
        }
        Ok(())
    }

    /// The full `<Img><ImageHere></Img>` slot tag.
    pub fn slot_tag(&self) -> String {
        format!("{}{}{}", self.image_open, self.image_slot, self.image_close)
    }

    /// `"Human: "` — marker, colon, one space.
    pub fn user_prefix(&self) -> String {
        format!("{}: ", self.user_marker)
    }

    /// `"Assistant: "` — marker, colon, one space.
    pub fn assistant_prefix(&self) -> String {
        format!("{}: ", self.assistant_marker)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_framing_matches_training_convention() {
        let cfg = FramingConfig::default();
        assert_eq!(cfg.separator, "###");
        assert_eq!(cfg.slot_tag(), "<Img><ImageHere></Img>");
        assert!(cfg.system_message.starts_with("Give the following image:"));
        assert!(cfg.system_message.ends_with("Please answer my questions."));
        cfg.validate().unwrap();
    }

    #[test]
    fn validate_rejects_degenerate_configs() {
        let mut cfg = FramingConfig::default();
        cfg.separator.clear();
        assert!(cfg.validate().is_err());

        let mut cfg = FramingConfig::default();
        cfg.image_slot = cfg.image_open.clone();
        assert!(cfg.validate().is_err());
    }
}
