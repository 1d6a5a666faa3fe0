//! Dialogue generation pipeline.
//!
//! Each generation request samples demonstration dialogues and candidate
//! image descriptions, renders one of the two prompt templates, calls the
//! data LLM, extracts the fenced JSON reply, parses it, and validates every
//! dialogue against its dataset spec. Invalid output triggers a fresh
//! request (new demos, new candidates, new randomness) up to a retry cap.

mod extract;
mod pipeline;
mod pool;
mod seed;
mod templates;

pub use extract::{extract_json_block, ExtractError};
pub use pipeline::{
    generate_dialogues, run_generation, GenContext, GenError, GenMode, GeneratedDialogue,
    GenerationTask, Provenance, RequestOutcome, RequestRecord, RequestResult, RunSummary,
    VgImageChoice,
};
pub use pool::{sample_demonstrations, CandidatePool, DemonstrationPool, PoolError};
pub use seed::{derive_seed, derive_uuid};
pub use templates::{
    build_multi_dialogue_prompt, build_single_dialogue_prompt, render_candidates_block,
    render_dialogues_block, NumImages, TemplateError, DATA_LLM_SYSTEM_MESSAGE,
};
