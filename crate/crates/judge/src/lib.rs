//! Judge-based conversational benchmark.
//!
//! Each benchmark item is a two-turn multi-image dialogue. The model under
//! test answers both turns in sequence (turn two sees turn one's answer);
//! a judge LLM then rates each answer on three criteria, and scores
//! aggregate as criterion means over items, per-turn combined scores, and
//! their overall mean. One transcript per judge prompt — candidate answers
//! are never compared side by side, so position bias cannot arise.

mod item;
mod prompt;
mod run;
mod score;
mod verdict;

pub use item::{load_benchmark, EvalItem, EvalTurn};
pub use prompt::{build_judge_prompt, JUDGE_SYSTEM_MESSAGE};
pub use run::{
    frame_turn_prompts, report_json, run_model_dialogue, run_sparkles_eval, EvalOptions,
    FramedTurn, ItemRecord, ModelSession,
};
pub use score::EvalScorecard;
pub use verdict::{parse_judge_output, render_conformant_reply, JudgeVerdict, TurnRatings};

use sparkles_client::ClientError;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum JudgeError {
    #[error("model returned an empty response")]
    EmptyResponse,
    #[error(transparent)]
    Client(#[from] ClientError),
    #[error("cannot build judge prompt: {0}")]
    Template(String),
    #[error("malformed judge verdict: {0}")]
    MalformedVerdict(String),
    #[error("benchmark item {item}: {message}")]
    BadItem { item: String, message: String },
    #[error("{failed} unrecoverable items exceeds the allowed {threshold}")]
    Aborted { failed: usize, threshold: usize },
    #[error("no verdicts to aggregate")]
    NoVerdicts,
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
    #[error("interleaving failed: {0}")]
    Interleave(String),
}
