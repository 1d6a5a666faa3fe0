//! Generation prompt templates and their JSON block renderers.
//!
//! Two templates exist: single-dialogue generation (one demonstration, four
//! candidate captions, first turn selecting two or three images) and
//! multi-dialogue generation (three demonstrations, nine candidates, three
//! dialogues per reply whose first turns select 1, 2, and 3 images). The
//! wording is fixed; goldens pin the rendered bytes.

use serde::Serialize;
use sparkles_core::{Dialogue, ImageDescription, ImageId, Message, Role};
use thiserror::Error;

/// System-role instruction accompanying every data-LLM and judge request.
pub const DATA_LLM_SYSTEM_MESSAGE: &str = "You are a helpful assistant.";

const DEMO_MARKER: &str = "{Dialogue Demonstration}";
const DEMOS_MARKER: &str = "{Dialogue Demonstrations}";
const CANDIDATES_MARKER: &str = "{Candidate Image Descriptions}";
const NUM_IMAGES_MARKER: &str = "{Number of Images}";

const SINGLE_DIALOGUE_TEMPLATE: &str = r#"Users will interact with a conversational assistant that has advanced capabilities of understanding, analyzing, and reasoning about images. This includes discussing a variety of real-world concepts, objects, and entities, generating a range of text materials, seeking advice, guidance, or assistance, and much more.

Below is an illustrative dialogue presented in a JSON format. The dialogue represents a meaningful conversation between a "user" and the "assistant" regarding multiple images. Each "user" message contains an "image_ids" field recording the IDs of newly selected images. The images are referred to in the "content" field as IMAGE#image_id.

```json
{Dialogue Demonstration}
```

Please note that the user contents in the JSON above may be a counterexample that reveals the content of images and can be answered without looking at the images. Please make sure not to reveal the content of the images or describe the images in the user messages in the conversation that follows.

Please note that the specific "image_ids" and "content" in the JSON above are for illustrative purposes only. The actual candidate images are shown below delimited by triple quotes, each accompanied by an image ID and a caption. Avoid using phrases similar to 'caption' and 'description' in your dialogue as if the user and the assistant have visual capabilities.

```json
{Candidate Image Descriptions}
```

Each dialogue consists of four messages:
1. A user examines all candidate images, selects {Number of Images} highly relevant images, and sends a reasonable and creative message to the assistant.
2. Once the images are provided, the assistant thoroughly perceives and comprehends them, responding with highly helpful and exceptionally detailed answers that provide comprehensive reasoning regarding the visual content of the images.
3. Considering the past dialogue, the user chooses other candidate images for further inquiry. The user should refer to both the newly selected images and those mentioned earlier in the same dialogue.
4. The assistant provides a highly helpful and exceptionally detailed answer providing comprehensive reasoning regarding the visual content of the images.

The following is a dialogue between the user and the assistant, adhering to the given JSON format.
Make sure to formulate accurate and diverse "content" that does not follow the illustrative dialogues. And remember to develop the last "content" even though it is shown as "..." in the JSON format provided above."#;

const MULTI_DIALOGUE_TEMPLATE: &str = r#"Users will interact with a conversational assistant that has advanced capabilities of understanding, analyzing, and reasoning about images. This includes discussing a variety of real-world concepts, objects, and entities, generating a range of text materials, seeking advice, guidance, or assistance, and much more.

Below are three illustrative dialogues presented in a JSON format. Each one represents a self-contained conversation between a "user" and the "assistant" regarding multiple images. Each "user" message contains an "image_ids" field recording the IDs of newly selected images. The images are referred to in the "content" field as IMAGE#image_id.

```json
{Dialogue Demonstrations}
```

Please note that the specific "image_ids" and "content" in the JSON above are for illustrative purposes only. The actual candidate images are shown below delimited by triple quotes, each accompanied by an image ID and a caption. Avoid using phrases similar to 'caption' and 'description' in your dialogue as if the user and the assistant have visual capabilities.

```json
{Candidate Image Descriptions}
```

Each dialogue consists of four messages:
1. A user examines all candidate images, selects highly relevant ones, and sends a reasonable and creative message to the assistant.
2. Once the images are provided, the assistant thoroughly perceives and comprehends them, responding with highly helpful and exceptionally detailed answers that provide comprehensive reasoning.
3. Considering the past dialogue, the user chooses another candidate image for further inquiry. The user should refer to both the newly selected image and those mentioned earlier in the same dialogue.
4. The assistant provides a highly helpful and exceptionally detailed answer providing comprehensive reasoning regarding the visual content of the images.

The following are three independent dialogues between the user and the assistant, adhering to the given JSON format. In this format, the first message in the three dialogues includes 1, 2, and 3 image IDs respectively.
Make sure to formulate accurate and diverse "content" that does not strictly follow the illustrative dialogues. And remember to develop the last "content" even though it is shown as "..." in the JSON format provided above."#;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum TemplateError {
    #[error("at least one demonstration dialogue is required")]
    EmptyDemos,
    #[error("expected {expected} demonstration dialogues, got {got}")]
    DemoCount { expected: usize, got: usize },
    #[error("demonstration {position} must select {expected} images in its first turn, not {got}")]
    DemoBranch {
        position: usize,
        expected: usize,
        got: usize,
    },
    #[error("expected {expected} candidate descriptions, got {got}")]
    CandidateCount { expected: usize, got: usize },
    #[error("candidate image id {0} appears more than once")]
    DuplicateCandidate(ImageId),
    #[error("placeholder {0} left unfilled")]
    UnfilledPlaceholder(String),
}

/// How many images the simulated user selects in the first turn of a
/// single-dialogue request.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum NumImages {
    Two,
    Three,
}

impl NumImages {
    /// The spelled-out form used in the prompt template.
    pub fn word(self) -> &'static str {
        match self {
            NumImages::Two => "two",
            NumImages::Three => "three",
        }
    }

    pub fn count(self) -> usize {
        match self {
            NumImages::Two => 2,
            NumImages::Three => 3,
        }
    }
}

/// Renders demonstration dialogues as the array-of-arrays JSON block, with
/// the final assistant content of each demo replaced by `"..."`.
pub fn render_dialogues_block(demos: &[Dialogue]) -> String {
    let mut out = String::from("[\n");
    for (i, demo) in demos.iter().enumerate() {
        out.push_str("  [\n");
        let last = demo.messages.len().saturating_sub(1);
        for (j, msg) in demo.messages.iter().enumerate() {
            let rendered = if j == last && msg.role == Role::Assistant {
                let elided = Message::assistant("...");
                serde_json::to_string(&elided)
            } else {
                serde_json::to_string(msg)
            }
            .expect("message serializes");
            out.push_str("    ");
            out.push_str(&rendered);
            if j != last {
                out.push(',');
            }
            out.push('\n');
        }
        out.push_str("  ]");
        if i + 1 != demos.len() {
            out.push(',');
        }
        out.push('\n');
    }
    out.push(']');
    out
}

#[derive(Serialize)]
struct CandidateLine<'a> {
    image_id: &'a ImageId,
    caption: &'a str,
}

/// Renders candidate descriptions as a JSON array of id/caption objects
/// (media locators are never shown to the data LLM).
pub fn render_candidates_block(candidates: &[ImageDescription]) -> String {
    let mut out = String::from("[\n");
    for (i, c) in candidates.iter().enumerate() {
        let line = serde_json::to_string(&CandidateLine {
            image_id: &c.image_id,
            caption: &c.caption,
        })
        .expect("candidate serializes");
        out.push_str("  ");
        out.push_str(&line);
        if i + 1 != candidates.len() {
            out.push(',');
        }
        out.push('\n');
    }
    out.push(']');
    out
}

fn check_distinct(candidates: &[ImageDescription]) -> Result<(), TemplateError> {
    for (i, c) in candidates.iter().enumerate() {
        if candidates[..i].iter().any(|p| p.image_id == c.image_id) {
            return Err(TemplateError::DuplicateCandidate(c.image_id.clone()));
        }
    }
    Ok(())
}

fn check_filled(prompt: &str) -> Result<String, TemplateError> {
    for marker in [DEMO_MARKER, DEMOS_MARKER, CANDIDATES_MARKER, NUM_IMAGES_MARKER] {
        if prompt.contains(marker) {
            return Err(TemplateError::UnfilledPlaceholder(marker.to_string()));
        }
    }
    Ok(prompt.to_string())
}

/// Builds the single-dialogue generation prompt: one (or more)
/// demonstration dialogues, exactly four candidate descriptions, and the
/// spelled-out image count ("two" or "three") for the first turn.
pub fn build_single_dialogue_prompt(
    demos: &[Dialogue],
    candidates: &[ImageDescription],
    num_images: NumImages,
) -> Result<String, TemplateError> {
    if demos.is_empty() {
        return Err(TemplateError::EmptyDemos);
    }
    if candidates.len() != 4 {
        return Err(TemplateError::CandidateCount {
            expected: 4,
            got: candidates.len(),
        });
    }
    check_distinct(candidates)?;
    let prompt = SINGLE_DIALOGUE_TEMPLATE
        .replace(DEMO_MARKER, &render_dialogues_block(demos))
        .replace(CANDIDATES_MARKER, &render_candidates_block(candidates))
        .replace(NUM_IMAGES_MARKER, num_images.word());
    check_filled(&prompt)
}

/// Builds the multi-dialogue generation prompt: exactly three
/// demonstrations whose first turns select 1, 2, and 3 images, and exactly
/// nine candidate descriptions.
pub fn build_multi_dialogue_prompt(
    demos: &[Dialogue],
    candidates: &[ImageDescription],
) -> Result<String, TemplateError> {
    if demos.len() != 3 {
        return Err(TemplateError::DemoCount {
            expected: 3,
            got: demos.len(),
        });
    }
    for (i, demo) in demos.iter().enumerate() {
        let got = demo.images_of_turn(1).len();
        if got != i + 1 {
            return Err(TemplateError::DemoBranch {
                position: i + 1,
                expected: i + 1,
                got,
            });
        }
    }
    if candidates.len() != 9 {
        return Err(TemplateError::CandidateCount {
            expected: 9,
            got: candidates.len(),
        });
    }
    check_distinct(candidates)?;
    let prompt = MULTI_DIALOGUE_TEMPLATE
        .replace(DEMOS_MARKER, &render_dialogues_block(demos))
        .replace(CANDIDATES_MARKER, &render_candidates_block(candidates));
    check_filled(&prompt)
}
