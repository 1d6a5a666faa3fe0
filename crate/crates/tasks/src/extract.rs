//! Answer extraction from chain-of-thought replies.
//!
//! Only the text after the LAST "Therefore" is inspected for labels; the
//! reasoning before it never influences the answer. Replies that skip the
//! required opening phrase or never say "Therefore" are format violations,
//! and a tail with zero or both labels is ambiguous — both trigger
//! regeneration upstream.

use std::sync::OnceLock;

use regex::Regex;
use thiserror::Error;

use crate::example::{Answer, Task};

const REQUIRED_PREFIX: &str = "Let's think step by step.";
const ANSWER_CUE: &str = "Therefore";

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ExtractError {
    #[error("response does not follow the required format: {0}")]
    FormatViolation(String),
    #[error("answer is ambiguous: {0}")]
    Ambiguous(String),
}

fn image_label_re() -> &'static Regex {
    static RE: OnceLock<Regex> = OnceLock::new();
    // Spacing and case vary in model output: IMAGE#1, IMAGE #1, image#1.
    RE.get_or_init(|| Regex::new(r"(?i)image\s*#\s*([0-9]+)").expect("valid regex"))
}

fn truth_label_re() -> &'static Regex {
    static RE: OnceLock<Regex> = OnceLock::new();
    RE.get_or_init(|| Regex::new(r"(?i)\b(true|false)\b").expect("valid regex"))
}

// Conforming replies echo the instructed format, e.g. "the answer (TRUE or
// FALSE) is TRUE" — the parenthetical names both labels and must not count
// as answer content.
fn scaffold_re(task: Task) -> &'static Regex {
    static TRUTH: OnceLock<Regex> = OnceLock::new();
    static IMAGE: OnceLock<Regex> = OnceLock::new();
    match task {
        Task::Nlvr2 => TRUTH.get_or_init(|| {
            Regex::new(r"(?i)\(\s*true\s+or\s+false\s*\)").expect("valid regex")
        }),
        Task::Bison => IMAGE.get_or_init(|| {
            Regex::new(r"(?i)\(\s*image\s*#?\s*1\s+or\s+image\s*#?\s*2\s*\)")
                .expect("valid regex")
        }),
    }
}

/// Extracts the final answer from a reply.
pub fn extract_final_answer(response: &str, task: Task) -> Result<Answer, ExtractError> {
    let trimmed = response.trim_start();
    if !trimmed.starts_with(REQUIRED_PREFIX) {
        return Err(ExtractError::FormatViolation(format!(
            "response must start with {REQUIRED_PREFIX:?}"
        )));
    }
    let Some(cue_pos) = trimmed.rfind(ANSWER_CUE) else {
        return Err(ExtractError::FormatViolation(format!(
            "response never says {ANSWER_CUE:?}"
        )));
    };
    let tail = &trimmed[cue_pos + ANSWER_CUE.len()..];
    let tail: &str = &scaffold_re(task).replace_all(tail, "");

    let mut found: Vec<Answer> = Vec::new();
    let mut push = |a: Answer| {
        if !found.contains(&a) {
            found.push(a);
        }
    };
    match task {
        Task::Bison => {
            for cap in image_label_re().captures_iter(tail) {
                match &cap[1] {
                    "1" => push(Answer::Image1),
                    "2" => push(Answer::Image2),
                    _ => {} // IMAGE#12 etc. is not a label
                }
            }
        }
        Task::Nlvr2 => {
            for cap in truth_label_re().captures_iter(tail) {
                if cap[1].eq_ignore_ascii_case("true") {
                    push(Answer::True);
                } else {
                    push(Answer::False);
                }
            }
        }
    }
    match found.as_slice() {
        [single] => Ok(*single),
        [] => Err(ExtractError::Ambiguous(
            "no answer label after the last \"Therefore\"".into(),
        )),
        _ => Err(ExtractError::Ambiguous(
            "both answer labels appear after the last \"Therefore\"".into(),
        )),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn clean_true_answer_extracts() {
        let resp = "Let's think step by step. The left image shows two dogs. \
                    Therefore, the answer (TRUE or FALSE) is TRUE.";
        assert_eq!(extract_final_answer(resp, Task::Nlvr2).unwrap(), Answer::True);
    }

    #[test]
    fn only_the_last_therefore_counts() {
        let resp = "Let's think step by step. Therefore, the answer is FALSE, wait. \
                    Let me reconsider the counts. Therefore, the answer (TRUE or FALSE) is TRUE.";
        assert_eq!(extract_final_answer(resp, Task::Nlvr2).unwrap(), Answer::True);
    }

    #[test]
    fn missing_prefix_is_a_format_violation() {
        let resp = "The answer is TRUE. Therefore, TRUE.";
        assert!(matches!(
            extract_final_answer(resp, Task::Nlvr2),
            Err(ExtractError::FormatViolation(_))
        ));
    }

    #[test]
    fn missing_therefore_is_a_format_violation() {
        let resp = "Let's think step by step. The answer is TRUE.";
        assert!(matches!(
            extract_final_answer(resp, Task::Nlvr2),
            Err(ExtractError::FormatViolation(_))
        ));
    }

    #[test]
    fn both_labels_in_tail_is_ambiguous() {
        let resp = "Let's think step by step. Therefore, the answer is TRUE or FALSE.";
        assert!(matches!(
            extract_final_answer(resp, Task::Nlvr2),
            Err(ExtractError::Ambiguous(_))
        ));
    }

    #[test]
    fn empty_tail_is_ambiguous() {
        let resp = "Let's think step by step. I examined both images. Therefore, the answer is";
        assert!(matches!(
            extract_final_answer(resp, Task::Nlvr2),
            Err(ExtractError::Ambiguous(_))
        ));
    }

    #[test]
    fn image_label_variants_match() {
        for tail in ["IMAGE#2", "IMAGE #2", "image#2", "Image # 2"] {
            let resp = format!("Let's think step by step. Therefore, the answer is {tail}.");
            assert_eq!(
                extract_final_answer(&resp, Task::Bison).unwrap(),
                Answer::Image2,
                "variant {tail}"
            );
        }
    }

    #[test]
    fn multi_digit_image_numbers_are_not_labels() {
        let resp = "Let's think step by step. Therefore, the answer is IMAGE#12.";
        assert!(matches!(
            extract_final_answer(resp, Task::Bison),
            Err(ExtractError::Ambiguous(_))
        ));
    }

    #[test]
    fn repeated_identical_label_is_not_ambiguous() {
        let resp = "Let's think step by step. Therefore, the answer is TRUE. Yes, TRUE.";
        assert_eq!(extract_final_answer(resp, Task::Nlvr2).unwrap(), Answer::True);
    }

    #[test]
    fn leading_whitespace_before_prefix_is_tolerated() {
        let resp = "  \nLet's think step by step. Therefore, the answer is FALSE.";
        assert_eq!(extract_final_answer(resp, Task::Nlvr2).unwrap(), Answer::False);
    }

    // Corrupting anything between the prefix and the last "Therefore" never
    // changes the answer.
    #[test]
    fn pre_cue_text_never_influences_the_answer() {
        let noisy_middles = [
            "The answer is FALSE!",
            "IMAGE#1 IMAGE#2 TRUE FALSE",
            "Therefore, the answer is FALSE.",
            "Therefore FALSE. Therefore FALSE.",
        ];
        for middle in noisy_middles {
            let resp = format!(
                "Let's think step by step. {middle} Therefore, the answer (TRUE or FALSE) is TRUE."
            );
            assert_eq!(
                extract_final_answer(&resp, Task::Nlvr2).unwrap(),
                Answer::True,
                "middle {middle:?} leaked into the answer"
            );
        }
    }
}
