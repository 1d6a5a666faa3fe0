//! The judge prompt.
//!
//! A single transcript per prompt: the item's image descriptions, the four
//! dialogue sections (Q1/A1/Q2/A2), the three criterion definitions, and a
//! strict output format whose `[[n]]` placeholders the parser keys on.

use serde::Serialize;
use sparkles_core::ImageId;

use crate::item::EvalItem;
use crate::JudgeError;

/// System-role instruction for judge requests.
pub const JUDGE_SYSTEM_MESSAGE: &str = "You are a helpful assistant.";

const TEMPLATE: &str = r#"Users will interact with a conversational assistant. The assistant is designed to understand, analyze, and reason about multiple images across two turns of conversation. The assistant is expected to provide highly helpful and exceptionally detailed answers providing comprehensive reasoning regarding the visual content of the images.

Below are images represented by their image IDs and captions (delimited by triple quotes):
```json
{Target Image Descriptions}
```

Next is a dialogue between a user and the assistant regarding the images above:
```
###User Q1:
{Q1}

###Assistant A1:
{A1}

###User Q2:
{Q2}

###Assistant A2:
{A2}
```

Your task as an impartial judge is to evaluate the responses (A1 and A2) provided by the assistant to the user's questions.
Please rate the following three criteria C1, C2, and C3 on a scale of 1-10 for A1 and A2 separately, where a higher score indicates better overall performance:

(C1) Image Understanding and Reasoning: This measures the assistant's ability to accurately identify and describe objects, context, and relationships within and between the images.
(C2) Cross-Image and Cross-Turn Coherence: This evaluates the assistant's ability to maintain a consistent understanding across multiple images and dialogue turns.
(C3) Relevance and Completeness of Responses: This assesses whether the assistant's responses are directly related to the user's inquiries and the images' content, and whether the responses provide thorough, detailed answers.

Begin your evaluation by providing a short explanation for each criterion. Be as objective as possible. After providing your explanation, rate the response on a scale of 1 to 10 by strictly following the format below (note that "5" and "..." are placeholders):
```
* Evaluating A1
- (C1) Explanation: "..." Rating: [[5]]
- (C2) Explanation: "..." Rating: [[5]]
- (C3) Explanation: "..." Rating: [[5]]
Therefore, the overall rating of A1 is [[5]]

* Evaluating A2
- (C1) Explanation: "..." Rating: [[5]]
- (C2) Explanation: "..." Rating: [[5]]
- (C3) Explanation: "..." Rating: [[5]]
Therefore, the overall rating of A2 is [[5]]
```"#;

#[derive(Serialize)]
struct DescriptionLine<'a> {
    image_id: &'a ImageId,
    caption: &'a str,
}

fn render_descriptions(item: &EvalItem) -> String {
    let mut out = String::from("[\n");
    for (i, d) in item.image_descriptions.iter().enumerate() {
        let line = serde_json::to_string(&DescriptionLine {
            image_id: &d.image_id,
            caption: &d.caption,
        })
        .expect("description serializes");
        out.push_str("  ");
        out.push_str(&line);
        if i + 1 != item.image_descriptions.len() {
            out.push(',');
        }
        out.push('\n');
    }
    out.push(']');
    out
}

/// Fills the judge template with the item's descriptions and the two
/// question/answer pairs. Answers must be non-empty and every referenced
/// image must carry a description.
pub fn build_judge_prompt(item: &EvalItem, a1: &str, a2: &str) -> Result<String, JudgeError> {
    if a1.trim().is_empty() || a2.trim().is_empty() {
        return Err(JudgeError::Template(
            "both assistant answers must be non-empty".into(),
        ));
    }
    for id in item.turn1.image_ids.iter().chain(&item.turn2.image_ids) {
        if item.description(id).is_none() {
            return Err(JudgeError::Template(format!(
                "no description for referenced image {id}"
            )));
        }
    }
    Ok(TEMPLATE
        .replace("{Target Image Descriptions}", &render_descriptions(item))
        .replace("{Q1}", &item.turn1.question)
        .replace("{A1}", a1)
        .replace("{Q2}", &item.turn2.question)
        .replace("{A2}", a2))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::item::sample_item;

    #[test]
    fn sections_appear_in_order() {
        let item = sample_item((2, 1));
        let prompt = build_judge_prompt(&item, "answer one", "answer two").unwrap();
        let positions: Vec<usize> = [
            "###User Q1:",
            "###Assistant A1:",
            "###User Q2:",
            "###Assistant A2:",
        ]
        .iter()
        .map(|s| prompt.find(s).unwrap_or_else(|| panic!("missing {s}")))
        .collect();
        assert!(positions.windows(2).all(|w| w[0] < w[1]));
        assert!(prompt.contains("Your task as an impartial judge"));
    }

    #[test]
    fn criteria_definitions_are_verbatim() {
        let item = sample_item((2, 1));
        let prompt = build_judge_prompt(&item, "a1", "a2").unwrap();
        assert!(prompt.contains(
            "(C1) Image Understanding and Reasoning: This measures the assistant's ability to accurately identify and describe objects, context, and relationships within and between the images."
        ));
        assert!(prompt.contains("(C2) Cross-Image and Cross-Turn Coherence:"));
        assert!(prompt.contains("(C3) Relevance and Completeness of Responses:"));
        assert!(prompt.contains("Rating: [[5]]"));
    }

    #[test]
    fn missing_description_is_a_template_error() {
        let mut item = sample_item((2, 1));
        item.image_descriptions.remove(0);
        // validate() would catch this too; build_judge_prompt must not rely on it.
        assert!(matches!(
            build_judge_prompt(&item, "a1", "a2"),
            Err(JudgeError::Template(_))
        ));
    }

    #[test]
    fn empty_answers_are_rejected() {
        let item = sample_item((2, 1));
        assert!(build_judge_prompt(&item, "", "a2").is_err());
        assert!(build_judge_prompt(&item, "a1", "  ").is_err());
    }
}
