//! Zero-shot evaluation on two-image tasks.
//!
//! Two tasks share one harness: binary image selection (pick which of two
//! images matches a caption) and statement verification (decide whether a
//! sentence is true of an image pair). Prompts use a chain-of-thought
//! scaffold; answers are read from the text after the last "Therefore",
//! and non-conforming replies are regenerated a bounded number of times
//! before scoring the example as wrong.

mod example;
mod extract;
mod prompt;
mod run;

pub use example::{
    dedup_against_training, load_bison, load_nlvr2, sample_examples, Answer, MediaRef, Task,
    TaskExample,
};
pub use extract::{extract_final_answer, ExtractError};
pub use prompt::build_task_prompt;
pub use run::{run_task_eval, ModelSession, TaskEvalSummary, TaskResult};

use thiserror::Error;

#[derive(Debug, Error)]
pub enum TaskError {
    #[error("gold label {gold:?} does not fit task {task:?}")]
    GoldMismatch { task: Task, gold: Answer },
    #[error("annotation file {path}: {message}")]
    Annotations { path: String, message: String },
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}
