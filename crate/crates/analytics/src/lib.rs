//! Dataset statistics and curation.
//!
//! Word-length distributions per role, root verb–noun pair extraction from
//! user questions (pluggable parser with a bundled deterministic
//! heuristic), top-pair reports, and uniqueness-based curation used to
//! build demonstration pools and evaluation sets.

mod curate;
mod parser;
mod report;
mod segment;
mod stats;

pub use curate::{curate_unique, CurateOutcome};
pub use parser::{HeuristicParser, SentenceParser, VerbNounKey};
pub use report::{
    render_pairs_csv, render_top_pairs_svg, top_pairs_report, TopPairsReport, VerbEntry,
};
pub use segment::split_sentences;
pub use stats::{corpus_stats, extract_verb_noun, word_length_stats, CorpusStats, StatsFragment};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AnalyticsError {
    #[error("no verb-noun pair found in either the last or the first sentence")]
    NoPairFound,
}
