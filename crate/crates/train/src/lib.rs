//! Compiles validated dialogues into per-turn instruction-tuning samples.
//!
//! Each turn of a dialogue becomes one training sample: the prompt replays
//! the framed conversation up to that turn's assistant marker, the response
//! is that turn's assistant answer plus the separator, and the loss span
//! covers exactly the response. User text is image-interleaved so that the
//! first mention of each newly selected image carries an embedding slot.

mod expand;
mod framing;
mod interleave;
mod ratio;
mod writer;

pub use expand::{expand_dialogue, MediaMap, MediaResolver, NoMedia, TrainingSample};
pub use framing::FramingConfig;
pub use interleave::{interleave_image_tokens, interleave_with_history, MediaLocator};
pub use ratio::{sample_with_turn_ratio, Manifest, TurnRatio};
pub use writer::{write_jsonl, TrainLine};

use sparkles_core::ImageId;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum TrainError {
    #[error("content mentions IMAGE#{0} which is not resolvable in this turn")]
    UnknownImageId(ImageId),
    #[error("framing error: {0}")]
    Framing(String),
    #[error("turn {turn} has no sampling weight (ratio covers {weights} turns)")]
    MissingTurnWeight { turn: usize, weights: usize },
    #[error("media for image {0} cannot be resolved in strict mode")]
    UnresolvedMedia(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}
