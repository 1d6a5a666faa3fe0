//! Task examples and annotation-file adapters.

use std::collections::BTreeSet;
use std::path::Path;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::TaskError;

/// The two supported tasks.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Task {
    Bison,
    Nlvr2,
}

/// An answer label. Image selection answers with IMAGE#1/IMAGE#2;
/// verification answers with TRUE/FALSE.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Answer {
    Image1,
    Image2,
    True,
    False,
}

impl Answer {
    pub fn fits(self, task: Task) -> bool {
        match task {
            Task::Bison => matches!(self, Answer::Image1 | Answer::Image2),
            Task::Nlvr2 => matches!(self, Answer::True | Answer::False),
        }
    }
}

/// An image reference: an optional source ID plus a locator (path or URL).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MediaRef {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub image_id: Option<String>,
    pub locator: String,
}

impl MediaRef {
    pub fn with_id(image_id: impl Into<String>, locator: impl Into<String>) -> Self {
        MediaRef {
            image_id: Some(image_id.into()),
            locator: locator.into(),
        }
    }

    pub fn from_locator(locator: impl Into<String>) -> Self {
        MediaRef {
            image_id: None,
            locator: locator.into(),
        }
    }

    fn matches_registry(&self, registry: &BTreeSet<String>) -> bool {
        if let Some(id) = &self.image_id {
            if registry.contains(id) {
                return true;
            }
        }
        registry.contains(&self.locator)
    }
}

/// One benchmark instance: two images, the caption or statement, and the
/// gold label.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TaskExample {
    pub task: Task,
    pub example_id: String,
    pub image_pair: (MediaRef, MediaRef),
    pub text: String,
    pub gold: Answer,
}

impl TaskExample {
    pub fn new(
        task: Task,
        example_id: impl Into<String>,
        image_pair: (MediaRef, MediaRef),
        text: impl Into<String>,
        gold: Answer,
    ) -> Result<Self, TaskError> {
        if !gold.fits(task) {
            return Err(TaskError::GoldMismatch { task, gold });
        }
        Ok(TaskExample {
            task,
            example_id: example_id.into(),
            image_pair,
            text: text.into(),
            gold,
        })
    }
}

/// Loads binary-image-selection annotations: a JSON object whose `data`
/// array (or a bare array) holds `{bison_id, caption, image_candidates:
/// [{image_id, image_filename}, ...], true_image_id}` entries. The first
/// candidate becomes IMAGE#1.
pub fn load_bison(path: &Path) -> Result<Vec<TaskExample>, TaskError> {
    let text = std::fs::read_to_string(path)?;
    let bad = |message: String| TaskError::Annotations {
        path: path.display().to_string(),
        message,
    };
    let value: Value = serde_json::from_str(&text).map_err(|e| bad(e.to_string()))?;
    let entries = value
        .get("data")
        .and_then(Value::as_array)
        .or_else(|| value.as_array())
        .ok_or_else(|| bad("expected a data array".into()))?;

    let mut out = Vec::with_capacity(entries.len());
    for (i, entry) in entries.iter().enumerate() {
        let caption = entry
            .get("caption")
            .and_then(Value::as_str)
            .ok_or_else(|| bad(format!("entry {i}: missing caption")))?;
        let candidates = entry
            .get("image_candidates")
            .and_then(Value::as_array)
            .filter(|c| c.len() == 2)
            .ok_or_else(|| bad(format!("entry {i}: need exactly 2 image_candidates")))?;
        let mut refs = Vec::with_capacity(2);
        let mut ids = Vec::with_capacity(2);
        for c in candidates {
            let id = c
                .get("image_id")
                .map(render_scalar)
                .ok_or_else(|| bad(format!("entry {i}: candidate missing image_id")))?;
            let filename = c
                .get("image_filename")
                .and_then(Value::as_str)
                .map(str::to_owned)
                .unwrap_or_else(|| format!("{id}.jpg"));
            refs.push(MediaRef::with_id(id.clone(), filename));
            ids.push(id);
        }
        let true_id = entry
            .get("true_image_id")
            .map(render_scalar)
            .ok_or_else(|| bad(format!("entry {i}: missing true_image_id")))?;
        let gold = if true_id == ids[0] {
            Answer::Image1
        } else if true_id == ids[1] {
            Answer::Image2
        } else {
            return Err(bad(format!(
                "entry {i}: true_image_id {true_id} is not among the candidates"
            )));
        };
        let example_id = entry
            .get("bison_id")
            .map(render_scalar)
            .unwrap_or_else(|| i.to_string());
        let second = refs.pop().expect("two refs");
        let first = refs.pop().expect("two refs");
        out.push(TaskExample::new(
            Task::Bison,
            example_id,
            (first, second),
            caption,
            gold,
        )?);
    }
    Ok(out)
}

fn render_scalar(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

/// Loads statement-verification annotations: JSON Lines with `identifier`,
/// `sentence`, `label` ("True"/"False"), `left_url`, `right_url`.
pub fn load_nlvr2(path: &Path) -> Result<Vec<TaskExample>, TaskError> {
    let text = std::fs::read_to_string(path)?;
    let bad = |lineno: usize, message: String| TaskError::Annotations {
        path: path.display().to_string(),
        message: format!("line {lineno}: {message}"),
    };
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let entry: Value =
            serde_json::from_str(line).map_err(|e| bad(i + 1, e.to_string()))?;
        let sentence = entry
            .get("sentence")
            .and_then(Value::as_str)
            .ok_or_else(|| bad(i + 1, "missing sentence".into()))?;
        let label = entry
            .get("label")
            .and_then(Value::as_str)
            .ok_or_else(|| bad(i + 1, "missing label".into()))?;
        let gold = if label.eq_ignore_ascii_case("true") {
            Answer::True
        } else if label.eq_ignore_ascii_case("false") {
            Answer::False
        } else {
            return Err(bad(i + 1, format!("label {label:?} is neither True nor False")));
        };
        let identifier = entry
            .get("identifier")
            .and_then(Value::as_str)
            .map(str::to_owned)
            .unwrap_or_else(|| (i + 1).to_string());
        let left = entry
            .get("left_url")
            .and_then(Value::as_str)
            .map(MediaRef::from_locator)
            .unwrap_or_else(|| MediaRef::from_locator(format!("{identifier}-img0")));
        let right = entry
            .get("right_url")
            .and_then(Value::as_str)
            .map(MediaRef::from_locator)
            .unwrap_or_else(|| MediaRef::from_locator(format!("{identifier}-img1")));
        out.push(TaskExample::new(
            Task::Nlvr2,
            identifier,
            (left, right),
            sentence,
            gold,
        )?);
    }
    Ok(out)
}

/// Seed-deterministic sample of `n` distinct examples (all of them when the
/// set is smaller).
pub fn sample_examples(examples: &[TaskExample], n: usize, seed: u64) -> Vec<TaskExample> {
    if n >= examples.len() {
        return examples.to_vec();
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut indices: Vec<usize> = (0..examples.len()).collect();
    let mut picked = Vec::with_capacity(n);
    for _ in 0..n {
        let i = rng.random_range(0..indices.len());
        picked.push(indices.swap_remove(i));
    }
    picked.into_iter().map(|i| examples[i].clone()).collect()
}

/// Removes examples that share an image with the training registry
/// (matching on image ID or on locator). Returns the survivors and the
/// removed count.
pub fn dedup_against_training(
    examples: Vec<TaskExample>,
    training_image_ids: &BTreeSet<String>,
) -> (Vec<TaskExample>, usize) {
    let before = examples.len();
    let kept: Vec<TaskExample> = examples
        .into_iter()
        .filter(|e| {
            !e.image_pair.0.matches_registry(training_image_ids)
                && !e.image_pair.1.matches_registry(training_image_ids)
        })
        .collect();
    let removed = before - kept.len();
    (kept, removed)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gold_label_must_fit_the_task() {
        let pair = (
            MediaRef::from_locator("l.jpg"),
            MediaRef::from_locator("r.jpg"),
        );
        assert!(TaskExample::new(Task::Bison, "x", pair.clone(), "cap", Answer::True).is_err());
        assert!(TaskExample::new(Task::Nlvr2, "x", pair, "stmt", Answer::Image1).is_err());
    }

    #[test]
    fn bison_annotations_load_with_positional_gold() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("bison.json");
        std::fs::write(
            &path,
            serde_json::json!({
                "data": [
                    {
                        "bison_id": 1,
                        "caption": "a dog on a couch",
                        "image_candidates": [
                            {"image_id": 10, "image_filename": "10.jpg"},
                            {"image_id": 20, "image_filename": "20.jpg"}
                        ],
                        "true_image_id": 20
                    }
                ]
            })
            .to_string(),
        )
        .unwrap();
        let examples = load_bison(&path).unwrap();
        assert_eq!(examples.len(), 1);
        assert_eq!(examples[0].gold, Answer::Image2);
        assert_eq!(examples[0].image_pair.0.image_id.as_deref(), Some("10"));
    }

    #[test]
    fn nlvr2_annotations_load_dialect_labels() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("nlvr2.jsonl");
        std::fs::write(
            &path,
            concat!(
                r#"{"identifier": "test1-0-0-0", "sentence": "Two dogs.", "label": "True", "left_url": "l.jpg", "right_url": "r.jpg"}"#,
                "\n",
                r#"{"identifier": "test1-0-0-1", "sentence": "Three cats.", "label": "false"}"#,
                "\n",
            ),
        )
        .unwrap();
        let examples = load_nlvr2(&path).unwrap();
        assert_eq!(examples[0].gold, Answer::True);
        assert_eq!(examples[1].gold, Answer::False);
        assert_eq!(examples[1].image_pair.0.locator, "test1-0-0-1-img0");
    }

    fn example(tag: usize) -> TaskExample {
        TaskExample::new(
            Task::Bison,
            format!("e{tag}"),
            (
                MediaRef::with_id(format!("{}", 2 * tag), format!("{}.jpg", 2 * tag)),
                MediaRef::with_id(format!("{}", 2 * tag + 1), format!("{}.jpg", 2 * tag + 1)),
            ),
            "cap",
            Answer::Image1,
        )
        .unwrap()
    }

    #[test]
    fn sampling_is_deterministic_and_distinct() {
        let examples: Vec<TaskExample> = (0..50).map(example).collect();
        let a = sample_examples(&examples, 10, 9);
        let b = sample_examples(&examples, 10, 9);
        assert_eq!(a, b);
        let ids: BTreeSet<&str> = a.iter().map(|e| e.example_id.as_str()).collect();
        assert_eq!(ids.len(), 10);
        assert_ne!(a, sample_examples(&examples, 10, 10));
    }

    #[test]
    fn dedup_removes_overlapping_examples() {
        let examples: Vec<TaskExample> = (0..5).map(example).collect();
        let registry: BTreeSet<String> = ["3".to_string()].into_iter().collect();
        let (kept, removed) = dedup_against_training(examples.clone(), &registry);
        assert_eq!(removed, 1);
        assert_eq!(kept.len(), 4);
        assert!(kept.iter().all(|e| e.example_id != "e1"));

        let (same, zero) = dedup_against_training(examples.clone(), &BTreeSet::new());
        assert_eq!(zero, 0);
        assert_eq!(same, examples);

        let all: BTreeSet<String> = (0..10).map(|i| i.to_string()).collect();
        let (none, five) = dedup_against_training(examples, &all);
        assert!(none.is_empty());
        assert_eq!(five, 5);
    }
}
