//! Dialogue → per-turn training samples.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};
use sparkles_core::{Dialogue, ImageId, Role};

use crate::framing::FramingConfig;
use crate::interleave::{interleave_with_history, MediaLocator};
use crate::TrainError;

/// One training sample: the framed prompt up to turn `turn_index`'s
/// assistant marker, that turn's response, the media feeding the prompt's
/// image slots, and the byte span of the response within prompt+response.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TrainingSample {
    pub dialogue_id: String,
    /// 1-based turn number.
    pub turn_index: usize,
    pub prompt_text: String,
    pub response_text: String,
    /// Media locators in prompt slot order.
    pub image_order: Vec<MediaLocator>,
    /// `[start, end)` byte offsets into `prompt_text + response_text`;
    /// covers exactly `response_text`.
    pub loss_span: (usize, usize),
}

/// Maps image IDs to media locators when expanding dialogues.
pub trait MediaResolver {
    fn resolve(&self, id: &ImageId) -> Option<String>;
}

/// Resolver backed by an explicit map (e.g. a description pool's media).
pub struct MediaMap(pub BTreeMap<ImageId, String>);

impl MediaResolver for MediaMap {
    fn resolve(&self, id: &ImageId) -> Option<String> {
        self.0.get(id).cloned()
    }
}

/// Resolver that never resolves; every locator comes out dangling with the
/// image ID as its text.
pub struct NoMedia;

impl MediaResolver for NoMedia {
    fn resolve(&self, _id: &ImageId) -> Option<String> {
        None
    }
}

/// Expands a valid dialogue into one training sample per turn.
///
/// The prompt recurrence: turn 1 is `system<SEP>Human: q1<SEP>Assistant: `,
/// and each later turn extends the previous prompt with the previous answer,
/// the separator, and the next `Human:`/`Assistant:` block. User contents
/// are image-interleaved; responses are the raw assistant answers plus the
/// trailing separator.
pub fn expand_dialogue(
    dialogue: &Dialogue,
    cfg: &FramingConfig,
    media: &dyn MediaResolver,
) -> Result<Vec<TrainingSample>, TrainError> {
    if !dialogue.messages.len().is_multiple_of(2) {
        return Err(TrainError::Framing(format!(
            "dialogue {} has {} messages; complete turns required",
            dialogue.dialogue_id,
            dialogue.messages.len()
        )));
    }
    let turns = dialogue.messages.len() / 2;
    if turns == 0 {
        return Err(TrainError::Framing(format!(
            "dialogue {} is empty",
            dialogue.dialogue_id
        )));
    }

    let sep = &cfg.separator;
    let mut prefix = format!("{}{sep}", cfg.system_message);
    let mut known: BTreeSet<ImageId> = BTreeSet::new();
    let mut slot_media: Vec<MediaLocator> = Vec::new();
    let mut samples = Vec::with_capacity(turns);

    for turn in 1..=turns {
        let user = &dialogue.messages[(turn - 1) * 2];
        let assistant = &dialogue.messages[(turn - 1) * 2 + 1];
        if user.role != Role::User || assistant.role != Role::Assistant {
            return Err(TrainError::Framing(format!(
                "dialogue {} turn {turn} does not alternate user/assistant",
                dialogue.dialogue_id
            )));
        }

        let new: BTreeSet<ImageId> = user
            .image_ids
            .as_deref()
            .unwrap_or(&[])
            .iter()
            .cloned()
            .collect();
        let (tagged, slot_ids) = interleave_with_history(&user.content, &new, &known, cfg)?;
        known.extend(new);
        slot_media.extend(slot_ids.iter().map(|id| match media.resolve(id) {
            Some(locator) => MediaLocator::Resolved(locator),
            None => MediaLocator::Dangling(id.to_string()),
        }));

        if turn > 1 {
            // Close the previous turn: its answer plus the separator.
            let previous_answer = &dialogue.messages[(turn - 2) * 2 + 1].content;
            prefix.push_str(previous_answer);
            prefix.push_str(sep);
        }
        prefix.push_str(&cfg.user_prefix());
        prefix.push_str(&tagged);
        prefix.push_str(sep);
        prefix.push_str(&cfg.assistant_prefix());

        let response = format!("{}{sep}", assistant.content);
        let loss_span = (prefix.len(), prefix.len() + response.len());
        // Slot/media pairing must stay exact; a literal slot token inside
        // message content (or the system message) would shift every later
        // image against its slot.
        let slots_in_prompt = prefix.matches(&cfg.image_slot).count();
        if slots_in_prompt != slot_media.len() {
            return Err(TrainError::Framing(format!(
                "dialogue {} turn {turn}: prompt carries {slots_in_prompt} image slots \
                 but {} media entries; content embeds the slot token",
                dialogue.dialogue_id,
                slot_media.len()
            )));
        }
        samples.push(TrainingSample {
            dialogue_id: dialogue.dialogue_id.clone(),
            turn_index: turn,
            prompt_text: prefix.clone(),
            response_text: response,
            image_order: slot_media.clone(),
            loss_span,
        });
    }
    Ok(samples)
}
