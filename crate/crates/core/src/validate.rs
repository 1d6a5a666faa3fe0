//! Structural validation of a dialogue against a dataset spec.
//!
//! Validation reports every violation it finds rather than stopping at the
//! first. A dialogue is valid iff the violation list is empty; warnings
//! (listed images never mentioned in the text) do not affect the verdict
//! because published dialogue data is not fully strict on that point.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::dialogue::{extract_image_refs, Dialogue, ImageId, Role};
use crate::spec::DatasetSpec;

/// Identifier of a validation rule.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RuleId {
    /// Roles must strictly alternate starting with a user message.
    Alternation,
    /// The message count must be even (complete turns only).
    Completeness,
    /// The number of turns must equal the spec's turn count.
    TurnCount,
    /// Each turn's image count must be in the spec's allowed set.
    ImageCount,
    /// Image IDs of later user turns must be disjoint from earlier turns.
    Disjointness,
    /// Assistant content may only mention IDs introduced at or before its turn.
    AssistantUnknownImage,
    /// User content may only mention IDs introduced at or before its own turn.
    UserUnknownImage,
    /// Warning: an ID listed in `image_ids` is never mentioned in the content.
    UnmentionedImage,
}

/// One rule violation (or warning) with a human-readable location.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Violation {
    pub rule_id: RuleId,
    pub message: String,
    pub location: String,
}

/// Outcome of validating one dialogue.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub verdict: Verdict,
    pub violations: Vec<Violation>,
    pub warnings: Vec<Violation>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Valid,
    Invalid,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.verdict == Verdict::Valid
    }
}

/// Checks alternation, turn count, per-turn image counts, cross-turn
/// disjointness, and `IMAGE#id` mention consistency. Returns all violations.
pub fn validate_dialogue(dialogue: &Dialogue, spec: &DatasetSpec) -> ValidationReport {
    let mut violations = Vec::new();
    let mut warnings = Vec::new();

    for (i, msg) in dialogue.messages.iter().enumerate() {
        let expected = if i % 2 == 0 { Role::User } else { Role::Assistant };
        if msg.role != expected {
            violations.push(Violation {
                rule_id: RuleId::Alternation,
                message: format!("expected {expected} message, found {}", msg.role),
                location: format!("messages[{i}]"),
            });
        }
    }

    if !dialogue.messages.len().is_multiple_of(2) {
        violations.push(Violation {
            rule_id: RuleId::Completeness,
            message: format!(
                "message count {} is odd; dialogues must end on an assistant reply",
                dialogue.messages.len()
            ),
            location: "messages".into(),
        });
    }

    let turns = dialogue.messages.len().div_ceil(2);
    if turns != spec.turn_count() {
        violations.push(Violation {
            rule_id: RuleId::TurnCount,
            message: format!(
                "dialogue has {turns} turns but spec {:?} requires {}",
                spec.name,
                spec.turn_count()
            ),
            location: "messages".into(),
        });
    }

    let mut introduced: BTreeSet<ImageId> = BTreeSet::new();
    for (i, msg) in dialogue.messages.iter().enumerate() {
        let turn = i / 2 + 1;
        let location = format!("messages[{i}]");
        let mentioned = extract_image_refs(&msg.content);
        match msg.role {
            Role::User => {
                let ids = msg.image_ids.as_deref().unwrap_or(&[]);
                if let Some(allowed) = spec.turns.get(turn - 1) {
                    if !allowed.contains(&ids.len()) {
                        violations.push(Violation {
                            rule_id: RuleId::ImageCount,
                            message: format!(
                                "turn {turn} selects {} images; allowed counts are {allowed:?}",
                                ids.len()
                            ),
                            location: location.clone(),
                        });
                    }
                }
                for id in ids {
                    if introduced.contains(id) {
                        violations.push(Violation {
                            rule_id: RuleId::Disjointness,
                            message: format!(
                                "image {id} was already selected in an earlier turn"
                            ),
                            location: location.clone(),
                        });
                    }
                }
                introduced.extend(ids.iter().cloned());
                for id in &mentioned {
                    if !introduced.contains(id) {
                        violations.push(Violation {
                            rule_id: RuleId::UserUnknownImage,
                            message: format!(
                                "user mentions {} which no turn up to {turn} introduced",
                                id.reference()
                            ),
                            location: location.clone(),
                        });
                    }
                }
                for id in ids {
                    if !mentioned.contains(id) {
                        warnings.push(Violation {
                            rule_id: RuleId::UnmentionedImage,
                            message: format!(
                                "image {id} is listed in image_ids but never mentioned as {}",
                                id.reference()
                            ),
                            location: location.clone(),
                        });
                    }
                }
            }
            Role::Assistant => {
                for id in &mentioned {
                    if !introduced.contains(id) {
                        violations.push(Violation {
                            rule_id: RuleId::AssistantUnknownImage,
                            message: format!(
                                "assistant mentions {} before any user turn introduced it",
                                id.reference()
                            ),
                            location: location.clone(),
                        });
                    }
                }
            }
        }
    }

    let verdict = if violations.is_empty() {
        Verdict::Valid
    } else {
        Verdict::Invalid
    };
    ValidationReport {
        verdict,
        violations,
        warnings,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dialogue::Message;
    use crate::spec::SpecCatalog;

    fn id(s: &str) -> ImageId {
        ImageId::new(s).unwrap()
    }

    fn two_turn(first: &[&str], second: &[&str]) -> Dialogue {
        let mention = |ids: &[&str]| {
            ids.iter()
                .map(|i| format!("IMAGE#{i}"))
                .collect::<Vec<_>>()
                .join(" and ")
        };
        Dialogue::new(
            "d1",
            vec![
                Message::user(
                    first.iter().map(|s| id(s)).collect(),
                    format!("tell me about {}", mention(first)),
                ),
                Message::assistant(format!("about {}", mention(first))),
                Message::user(
                    second.iter().map(|s| id(s)).collect(),
                    format!("now {}", mention(second)),
                ),
                Message::assistant(format!("more on {}", mention(second))),
            ],
        )
    }

    #[test]
    fn vg_shape_is_valid() {
        let d = two_turn(&["1", "2"], &["3"]);
        let report = validate_dialogue(&d, &SpecCatalog::by_name("vg").unwrap());
        assert!(report.is_valid(), "{:?}", report.violations);
        assert!(report.warnings.is_empty());
    }

    #[test]
    fn turn_count_mismatch_is_reported() {
        let mut d = two_turn(&["1", "2"], &["3"]);
        d.messages.push(Message::user(vec![id("4")], "IMAGE#4?"));
        d.messages.push(Message::assistant("IMAGE#4."));
        let report = validate_dialogue(&d, &SpecCatalog::by_name("vg").unwrap());
        assert!(!report.is_valid());
        assert!(report
            .violations
            .iter()
            .any(|v| v.rule_id == RuleId::TurnCount));
    }

    #[test]
    fn reused_image_id_violates_disjointness() {
        let d = two_turn(&["1", "2"], &["1"]);
        let report = validate_dialogue(&d, &SpecCatalog::by_name("vg").unwrap());
        assert!(report
            .violations
            .iter()
            .any(|v| v.rule_id == RuleId::Disjointness));
    }

    #[test]
    fn off_count_turn_violates_image_count() {
        let d = two_turn(&["1", "2", "3", "4"], &["5"]);
        let report = validate_dialogue(&d, &SpecCatalog::by_name("vg").unwrap());
        assert!(report
            .violations
            .iter()
            .any(|v| v.rule_id == RuleId::ImageCount));
    }

    #[test]
    fn assistant_mentioning_future_image_is_invalid() {
        let mut d = two_turn(&["1", "2"], &["3"]);
        d.messages[1].content = "let me peek at IMAGE#3 early".into();
        let report = validate_dialogue(&d, &SpecCatalog::by_name("vg").unwrap());
        assert!(report
            .violations
            .iter()
            .any(|v| v.rule_id == RuleId::AssistantUnknownImage));
    }

    #[test]
    fn user_referring_back_is_fine() {
        let mut d = two_turn(&["1", "2"], &["3"]);
        d.messages[2].content = "relate IMAGE#3 to IMAGE#1".into();
        let report = validate_dialogue(&d, &SpecCatalog::by_name("vg").unwrap());
        assert!(report.is_valid(), "{:?}", report.violations);
    }

    #[test]
    fn unmentioned_listed_image_is_only_a_warning() {
        let mut d = two_turn(&["1", "2"], &["3"]);
        d.messages[0].content = "only IMAGE#1 in the text".into();
        let report = validate_dialogue(&d, &SpecCatalog::by_name("vg").unwrap());
        assert!(report.is_valid());
        assert!(report
            .warnings
            .iter()
            .any(|v| v.rule_id == RuleId::UnmentionedImage));
    }

    #[test]
    fn all_violations_are_collected_not_just_the_first() {
        // Wrong count in turn 1 AND a reused id in turn 2.
        let d = two_turn(&["1"], &["1"]);
        let report = validate_dialogue(&d, &SpecCatalog::by_name("vg").unwrap());
        assert!(report.violations.len() >= 2, "{:?}", report.violations);
    }

    #[test]
    fn odd_message_count_flagged() {
        let mut d = two_turn(&["1", "2"], &["3"]);
        d.messages.pop();
        let report = validate_dialogue(&d, &SpecCatalog::by_name("vg").unwrap());
        assert!(report
            .violations
            .iter()
            .any(|v| v.rule_id == RuleId::Completeness));
    }
}
