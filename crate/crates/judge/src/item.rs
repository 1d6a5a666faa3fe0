//! Benchmark items.

use std::collections::BTreeSet;
use std::path::Path;

use serde::{Deserialize, Serialize};
use sparkles_core::{ImageDescription, ImageId};

use crate::JudgeError;

/// One turn of a benchmark item: the scripted user question and the image
/// IDs it newly introduces.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EvalTurn {
    pub question: String,
    pub image_ids: Vec<ImageId>,
}

/// A two-turn benchmark item with its image descriptions. `config_class`
/// is the (turn-1, turn-2) image-count pair; the benchmark ships three
/// classes: (2,1), (2,2), and (3,1).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EvalItem {
    pub item_id: String,
    pub image_descriptions: Vec<ImageDescription>,
    pub turn1: EvalTurn,
    pub turn2: EvalTurn,
    pub config_class: (usize, usize),
}

impl EvalItem {
    /// Checks class/count agreement, per-item image disjointness, and that
    /// every referenced ID has a description.
    pub fn validate(&self) -> Result<(), JudgeError> {
        let bad = |message: String| JudgeError::BadItem {
            item: self.item_id.clone(),
            message,
        };
        let actual = (self.turn1.image_ids.len(), self.turn2.image_ids.len());
        if actual != self.config_class {
            return Err(bad(format!(
                "config_class {:?} does not match actual image counts {:?}",
                self.config_class, actual
            )));
        }
        let t1: BTreeSet<&ImageId> = self.turn1.image_ids.iter().collect();
        for id in &self.turn2.image_ids {
            if t1.contains(id) {
                return Err(bad(format!("image {id} appears in both turns")));
            }
        }
        let described: BTreeSet<&ImageId> =
            self.image_descriptions.iter().map(|d| &d.image_id).collect();
        for id in self.turn1.image_ids.iter().chain(&self.turn2.image_ids) {
            if !described.contains(id) {
                return Err(bad(format!("image {id} has no description")));
            }
        }
        Ok(())
    }

    /// Description lookup, `None` for unknown IDs.
    pub fn description(&self, id: &ImageId) -> Option<&ImageDescription> {
        self.image_descriptions.iter().find(|d| &d.image_id == id)
    }

    /// Media locator for an image: the description's media if set, else the
    /// bare ID.
    pub fn media(&self, id: &ImageId) -> String {
        self.description(id)
            .and_then(|d| d.media.clone())
            .unwrap_or_else(|| id.to_string())
    }
}

/// Loads a benchmark file: JSON Lines, one item per line. Every item is
/// validated on load.
pub fn load_benchmark(path: &Path) -> Result<Vec<EvalItem>, JudgeError> {
    let text = std::fs::read_to_string(path)?;
    let mut items = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let item: EvalItem = serde_json::from_str(line).map_err(|e| JudgeError::BadItem {
            item: format!("{}:{}", path.display(), lineno + 1),
            message: e.to_string(),
        })?;
        item.validate()?;
        items.push(item);
    }
    Ok(items)
}

#[cfg(test)]
pub(crate) fn sample_item(class: (usize, usize)) -> EvalItem {
    use sparkles_core::ImageDescription;
    let mut descriptions = Vec::new();
    let mut t1 = Vec::new();
    let mut t2 = Vec::new();
    for i in 0..class.0 {
        let id = ImageId::new(format!("{}", 100 + i)).unwrap();
        descriptions.push(ImageDescription::new(id.clone(), format!("first-turn image {i}")));
        t1.push(id);
    }
    for i in 0..class.1 {
        let id = ImageId::new(format!("{}", 200 + i)).unwrap();
        descriptions.push(ImageDescription::new(id.clone(), format!("second-turn image {i}")));
        t2.push(id);
    }
    let mention = |ids: &[ImageId]| {
        ids.iter()
            .map(|i| i.reference())
            .collect::<Vec<_>>()
            .join(" and ")
    };
    EvalItem {
        item_id: format!("item-{}-{}", class.0, class.1),
        image_descriptions: descriptions,
        turn1: EvalTurn {
            question: format!("Compare {}.", mention(&t1)),
            image_ids: t1,
        },
        turn2: EvalTurn {
            question: format!("Now relate {} to the earlier ones.", mention(&t2)),
            image_ids: t2,
        },
        config_class: class,
    }
}
