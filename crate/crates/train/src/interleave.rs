//! Word-level image-tag interleaving.
//!
//! The first mention of each newly introduced image gets an embedding slot
//! appended directly after its `IMAGE#<id>` text: `IMAGE#7` becomes
//! `IMAGE#7<Img><ImageHere></Img>`. Repeat mentions and mentions of images
//! introduced in earlier turns stay plain text.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};
use sparkles_core::{extract_image_refs, ImageId};

use crate::framing::FramingConfig;
use crate::TrainError;

/// A media locator that remembers whether resolution succeeded.
///
/// Serializes as a bare string either way; strict writers refuse dangling
/// entries.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum MediaLocator {
    Resolved(String),
    Dangling(String),
}

impl MediaLocator {
    pub fn as_str(&self) -> &str {
        match self {
            MediaLocator::Resolved(s) | MediaLocator::Dangling(s) => s,
        }
    }

    pub fn is_dangling(&self) -> bool {
        matches!(self, MediaLocator::Dangling(_))
    }
}

/// Tags the first mention of each image in `images`, returning the rewritten
/// text and the media locators in slot order.
///
/// Every `IMAGE#<id>` mention in `content` must resolve in `images`; this is
/// the single-turn form where no earlier-turn images exist.
pub fn interleave_image_tokens(
    content: &str,
    images: &BTreeMap<ImageId, String>,
) -> Result<(String, Vec<String>), TrainError> {
    let cfg = FramingConfig::default();
    let new_ids: BTreeSet<ImageId> = images.keys().cloned().collect();
    let (text, slot_ids) = tag_first_mentions(content, &new_ids, &BTreeSet::new(), &cfg)?;
    let media = slot_ids
        .iter()
        .map(|id| images[id].clone())
        .collect();
    Ok((text, media))
}

/// Multi-turn form: ids in `new` get tagged at first mention, ids in `known`
/// (earlier turns) stay plain, anything else is an error. Returns the
/// rewritten text and the IDs in slot order.
pub fn interleave_with_history(
    content: &str,
    new: &BTreeSet<ImageId>,
    known: &BTreeSet<ImageId>,
    cfg: &FramingConfig,
) -> Result<(String, Vec<ImageId>), TrainError> {
    tag_first_mentions(content, new, known, cfg)
}

fn tag_first_mentions(
    content: &str,
    new: &BTreeSet<ImageId>,
    known: &BTreeSet<ImageId>,
    cfg: &FramingConfig,
) -> Result<(String, Vec<ImageId>), TrainError> {
    for id in extract_image_refs(content) {
        if !new.contains(&id) && !known.contains(&id) {
            return Err(TrainError::UnknownImageId(id));
        }
    }

    let slot = cfg.slot_tag();
    let mut out = String::with_capacity(content.len() + new.len() * slot.len());
    let mut slot_ids: Vec<ImageId> = Vec::new();
    let mut rest = content;
    while let Some(pos) = rest.find("IMAGE#") {
        let (before, at) = rest.split_at(pos);
        out.push_str(before);
        let digits_start = "IMAGE#".len();
        let digits_len = at[digits_start..]
            .bytes()
            .take_while(|b| b.is_ascii_digit())
            .count();
        let mention = &at[..digits_start + digits_len];
        out.push_str(mention);
        if digits_len > 0 {
            let id = ImageId::new(&at[digits_start..digits_start + digits_len])
                .expect("digits form a valid id");
            if new.contains(&id) && !slot_ids.contains(&id) {
                out.push_str(&slot);
                slot_ids.push(id);
            }
        }
        rest = &at[digits_start + digits_len..];
    }
    out.push_str(rest);
    Ok((out, slot_ids))
}
