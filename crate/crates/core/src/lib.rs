//! Core data model for multi-image dialogue datasets.
//!
//! A [`Dialogue`] is an ordered list of user/assistant messages where each
//! user message selects a set of images by ID and refers to them inline as
//! `IMAGE#<id>`. This crate owns the on-disk JSON formats, the tolerant
//! parser for model-emitted dialogue arrays, and structural validation
//! against per-dataset turn specifications.

mod dialogue;
mod error;
mod jsonl;
mod parse;
mod relaxed;
mod spec;
mod validate;

pub use dialogue::{
    extract_image_refs, Dialogue, ImageDescription, ImageId, Message, Role, IMAGE_REF_PREFIX,
};
pub use error::{IdError, ParseError, PoolFileError};
pub use jsonl::{
    load_description_pool, read_dialogues_jsonl, save_description_pool, write_dialogues_jsonl,
};
pub use parse::{parse_dialogues, serialize_dialogues};
pub use relaxed::parse_relaxed_json;
pub use spec::{DatasetSpec, SpecCatalog};
pub use validate::{validate_dialogue, RuleId, ValidationReport, Violation};
