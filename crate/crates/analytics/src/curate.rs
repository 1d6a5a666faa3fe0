//! Uniqueness curation: keep dialogues whose opening question's verb–noun
//! key occurs exactly once in the corpus.

use std::collections::BTreeMap;

use sparkles_core::{Dialogue, Role};

use crate::parser::{SentenceParser, VerbNounKey};
use crate::stats::extract_verb_noun;

/// Result of [`curate_unique`].
#[derive(Debug, Clone)]
pub struct CurateOutcome {
    pub kept: Vec<Dialogue>,
    /// Dialogues dropped because no verb–noun key could be extracted.
    pub extraction_failures: usize,
    /// Dialogues dropped because their key recurs.
    pub duplicates_removed: usize,
}

impl CurateOutcome {
    /// The key of each kept dialogue, in kept order.
    pub fn kept_keys(&self, parser: &dyn SentenceParser) -> Vec<VerbNounKey> {
        self.kept
            .iter()
            .filter_map(|d| first_user_key(d, parser))
            .collect()
    }
}

fn first_user_key(dialogue: &Dialogue, parser: &dyn SentenceParser) -> Option<VerbNounKey> {
    let first_user = dialogue.messages.iter().find(|m| m.role == Role::User)?;
    extract_verb_noun(&first_user.content, parser).ok()
}

/// Keeps exactly the dialogues whose first-user-message key appears once
/// across the corpus. Extraction failures are excluded and counted.
pub fn curate_unique(dialogues: &[Dialogue], parser: &dyn SentenceParser) -> CurateOutcome {
    let keys: Vec<Option<VerbNounKey>> = dialogues
        .iter()
        .map(|d| first_user_key(d, parser))
        .collect();
    let mut frequency: BTreeMap<&VerbNounKey, usize> = BTreeMap::new();
    for key in keys.iter().flatten() {
        *frequency.entry(key).or_insert(0) += 1;
    }

    let mut outcome = CurateOutcome {
        kept: Vec::new(),
        extraction_failures: 0,
        duplicates_removed: 0,
    };
    for (dialogue, key) in dialogues.iter().zip(&keys) {
        match key {
            None => outcome.extraction_failures += 1,
            Some(k) if frequency[k] == 1 => outcome.kept.push(dialogue.clone()),
            Some(_) => outcome.duplicates_removed += 1,
        }
    }
    outcome
}
