//! Corpus statistics.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use sparkles_core::{Dialogue, Role};

use crate::parser::{SentenceParser, VerbNounKey};
use crate::segment::split_sentences;
use crate::AnalyticsError;

/// Word-length distribution for one role.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct StatsFragment {
    pub messages: usize,
    pub total_words: u64,
    /// word count → number of messages with that count
    pub histogram: BTreeMap<usize, usize>,
}

impl StatsFragment {
    /// Mean words per message; `None` for an empty corpus.
    pub fn mean(&self) -> Option<f64> {
        if self.messages == 0 {
            None
        } else {
            Some(self.total_words as f64 / self.messages as f64)
        }
    }

    fn record(&mut self, words: usize) {
        self.messages += 1;
        self.total_words += words as u64;
        *self.histogram.entry(words).or_insert(0) += 1;
    }
}

/// Whitespace-token counts per message of `role`.
pub fn word_length_stats(dialogues: &[Dialogue], role: Role) -> StatsFragment {
    let mut fragment = StatsFragment::default();
    for d in dialogues {
        for m in &d.messages {
            if m.role == role {
                fragment.record(m.content.split_whitespace().count());
            }
        }
    }
    fragment
}

/// Extracts the verb–noun key of a message: the last sentence usually holds
/// the actual question, so it goes first; the first sentence is the
/// fallback.
pub fn extract_verb_noun(
    message: &str,
    parser: &dyn SentenceParser,
) -> Result<VerbNounKey, AnalyticsError> {
    let sentences = split_sentences(message);
    if let Some(last) = sentences.last() {
        if let Some(key) = parser.verb_noun(last) {
            return Ok(key);
        }
    }
    if let Some(first) = sentences.first() {
        if let Some(key) = parser.verb_noun(first) {
            return Ok(key);
        }
    }
    Err(AnalyticsError::NoPairFound)
}

/// Full corpus statistics: per-role word lengths, the verb–noun pair table
/// over user messages, and the same table partitioned by (turn, image
/// count).
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct CorpusStats {
    pub user: StatsFragment,
    pub assistant: StatsFragment,
    pub pairs: BTreeMap<VerbNounKey, usize>,
    /// (turn index 1-based, images selected that turn) → pair table
    pub grouped_pairs: BTreeMap<(usize, usize), BTreeMap<VerbNounKey, usize>>,
    pub extraction_failures: usize,
}

/// Computes [`CorpusStats`] over a corpus with the given parser.
pub fn corpus_stats(dialogues: &[Dialogue], parser: &dyn SentenceParser) -> CorpusStats {
    let mut stats = CorpusStats {
        user: word_length_stats(dialogues, Role::User),
        assistant: word_length_stats(dialogues, Role::Assistant),
        ..CorpusStats::default()
    };
    for d in dialogues {
        for (i, m) in d.messages.iter().enumerate() {
            if m.role != Role::User {
                continue;
            }
            let turn = i / 2 + 1;
            let n_images = m.image_ids.as_deref().map(<[_]>::len).unwrap_or(0);
            match extract_verb_noun(&m.content, parser) {
                Ok(key) => {
                    *stats.pairs.entry(key.clone()).or_insert(0) += 1;
                    *stats
                        .grouped_pairs
                        .entry((turn, n_images))
                        .or_default()
                        .entry(key)
                        .or_insert(0) += 1;
                }
                Err(_) => stats.extraction_failures += 1,
            }
        }
    }
    stats
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parser::HeuristicParser;
    use sparkles_core::{ImageId, Message};

    fn dialogue(q1: &str, q2: &str) -> Dialogue {
        Dialogue::new(
            "d",
            vec![
                Message::user(vec![ImageId::new("1").unwrap()], q1.to_string()),
                Message::assistant("one two three"),
                Message::user(vec![ImageId::new("2").unwrap()], q2.to_string()),
                Message::assistant("four five six seven"),
            ],
        )
    }

    #[test]
    fn mean_is_total_words_over_messages() {
        let d = Dialogue::new(
            "d",
            vec![
                Message::user(vec![], "Hello world"),
                Message::assistant("three words here"),
            ],
        );
        let users = word_length_stats(std::slice::from_ref(&d), Role::User);
        assert_eq!(users.mean(), Some(2.0));
        let assistants = word_length_stats(&[d], Role::Assistant);
        assert_eq!(assistants.mean(), Some(3.0));
    }

    #[test]
    fn empty_corpus_has_undefined_mean() {
        let stats = word_length_stats(&[], Role::User);
        assert_eq!(stats.mean(), None);
        assert!(stats.histogram.is_empty());
    }

    #[test]
    fn histogram_mass_equals_message_count() {
        let d = dialogue("Compare the images.", "Describe the story now.");
        let stats = word_length_stats(&[d.clone(), d], Role::User);
        assert_eq!(stats.messages, 4);
        assert_eq!(stats.histogram.values().sum::<usize>(), 4);
    }

    #[test]
    fn last_sentence_takes_priority_with_first_as_fallback() {
        let parser = HeuristicParser;
        // Last sentence has the question.
        let key = extract_verb_noun(
            "This is context without a lexicon hit. Compare the images.",
            &parser,
        )
        .unwrap();
        assert_eq!(key.verb, "compare");
        // Last sentence gives nothing; first does.
        let key = extract_verb_noun("Create a song about rain. Okay?", &parser).unwrap();
        assert_eq!(key.verb, "create");
        // Neither works.
        assert_eq!(
            extract_verb_noun("Hmm. Uh.", &parser),
            Err(AnalyticsError::NoPairFound)
        );
    }

    #[test]
    fn grouped_pairs_partition_by_turn_and_image_count() {
        let d = dialogue("Compare the images.", "Describe the story.");
        let stats = corpus_stats(&[d], &HeuristicParser);
        assert_eq!(stats.pairs.len(), 2);
        assert_eq!(stats.grouped_pairs.len(), 2);
        assert!(stats.grouped_pairs.contains_key(&(1, 1)));
        assert!(stats.grouped_pairs.contains_key(&(2, 1)));
        assert_eq!(stats.extraction_failures, 0);
    }
}
