//! Parsing of judge replies.

use std::sync::OnceLock;

use regex::Regex;
use serde::{Deserialize, Serialize};

use crate::JudgeError;

/// Ratings for one answer: the three criteria, their explanations, and the
/// judge's own combined rating. The combined rating is retained for audit
/// but never used in aggregation — judges miscompute it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TurnRatings {
    pub c1: u8,
    pub c2: u8,
    pub c3: u8,
    pub explanations: [String; 3],
    pub raw_overall: u8,
}

impl TurnRatings {
    pub fn criteria(&self) -> [u8; 3] {
        [self.c1, self.c2, self.c3]
    }
}

/// A fully parsed judge reply covering both turns.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct JudgeVerdict {
    pub turn1: TurnRatings,
    pub turn2: TurnRatings,
}

fn bracket_re() -> &'static Regex {
    static RE: OnceLock<Regex> = OnceLock::new();
    RE.get_or_init(|| Regex::new(r"\[\[([^\[\]]*)\]\]").expect("valid regex"))
}

fn explanation_re() -> &'static Regex {
    static RE: OnceLock<Regex> = OnceLock::new();
    RE.get_or_init(|| {
        Regex::new(r#"\(C([123])\) Explanation:\s*"((?s).*?)"\s*Rating:"#).expect("valid regex")
    })
}

/// Parses a judge reply: exactly eight `[[n]]` ratings (three criteria plus
/// the judge's combined rating, for each of two answers), each an integer
/// in 1..=10. Explanations are captured best-effort from the quoted
/// segments; any structural deviation is a `MalformedVerdict`.
pub fn parse_judge_output(text: &str) -> Result<JudgeVerdict, JudgeError> {
    let mut ratings: Vec<u8> = Vec::with_capacity(8);
    for cap in bracket_re().captures_iter(text) {
        let inner = cap[1].trim().to_owned();
        let value: i64 = inner.parse().map_err(|_| {
            JudgeError::MalformedVerdict(format!("rating [[{inner}]] is not an integer"))
        })?;
        if !(1..=10).contains(&value) {
            return Err(JudgeError::MalformedVerdict(format!(
                "rating [[{value}]] outside 1..=10"
            )));
        }
        ratings.push(value as u8);
    }
    if ratings.len() != 8 {
        return Err(JudgeError::MalformedVerdict(format!(
            "expected 8 bracketed ratings, found {}",
            ratings.len()
        )));
    }

    // Split at the A2 block so explanations land on the right turn.
    let (first_half, second_half) = match text.find("* Evaluating A2") {
        Some(pos) => text.split_at(pos),
        None => (text, ""),
    };
    let explanations = |chunk: &str| -> [String; 3] {
        let mut out = [String::new(), String::new(), String::new()];
        for cap in explanation_re().captures_iter(chunk) {
            let idx: usize = cap[1].parse::<usize>().expect("digit") - 1;
            if out[idx].is_empty() {
                out[idx] = cap[2].to_string();
            }
        }
        out
    };

    Ok(JudgeVerdict {
        turn1: TurnRatings {
            c1: ratings[0],
            c2: ratings[1],
            c3: ratings[2],
            explanations: explanations(first_half),
            raw_overall: ratings[3],
        },
        turn2: TurnRatings {
            c1: ratings[4],
            c2: ratings[5],
            c3: ratings[6],
            explanations: explanations(second_half),
            raw_overall: ratings[7],
        },
    })
}

/// Renders a reply in exactly the format the judge is instructed to follow.
/// Used to simulate judges in tests and to document the expected shape.
pub fn render_conformant_reply(
    turn1: [u8; 3],
    overall1: u8,
    turn2: [u8; 3],
    overall2: u8,
    explanations: &[&str; 6],
) -> String {
    format!(
        "* Evaluating A1\n\
         - (C1) Explanation: \"{}\" Rating: [[{}]]\n\
         - (C2) Explanation: \"{}\" Rating: [[{}]]\n\
         - (C3) Explanation: \"{}\" Rating: [[{}]]\n\
         Therefore, the overall rating of A1 is [[{}]]\n\
         \n\
         * Evaluating A2\n\
         - (C1) Explanation: \"{}\" Rating: [[{}]]\n\
         - (C2) Explanation: \"{}\" Rating: [[{}]]\n\
         - (C3) Explanation: \"{}\" Rating: [[{}]]\n\
         Therefore, the overall rating of A2 is [[{}]]",
        explanations[0],
        turn1[0],
        explanations[1],
        turn1[1],
        explanations[2],
        turn1[2],
        overall1,
        explanations[3],
        turn2[0],
        explanations[4],
        turn2[1],
        explanations[5],
        turn2[2],
        overall2,
    )
}
