//! JSON Lines writer for training samples.

use std::fs;
use std::io::{BufWriter, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::expand::TrainingSample;
use crate::ratio::Manifest;
use crate::TrainError;

/// One output line of the training file.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TrainLine {
    pub dialogue_id: String,
    pub turn: usize,
    pub prompt: String,
    pub response: String,
    pub images: Vec<String>,
    pub loss_span: [usize; 2],
}

impl TrainLine {
    fn from_sample(sample: &TrainingSample) -> Self {
        TrainLine {
            dialogue_id: sample.dialogue_id.clone(),
            turn: sample.turn_index,
            prompt: sample.prompt_text.clone(),
            response: sample.response_text.clone(),
            images: sample
                .image_order
                .iter()
                .map(|m| m.as_str().to_owned())
                .collect(),
            loss_span: [sample.loss_span.0, sample.loss_span.1],
        }
    }
}

/// Writes manifest entries as JSON Lines, one sample reference per line.
///
/// Output bytes are a pure function of the inputs. In strict mode, any
/// dangling media locator aborts the write.
pub fn write_jsonl(
    path: &Path,
    samples: &[TrainingSample],
    manifest: &Manifest,
    strict_media: bool,
) -> Result<(), TrainError> {
    if strict_media {
        for &i in manifest {
            if let Some(m) = samples[i].image_order.iter().find(|m| m.is_dangling()) {
                return Err(TrainError::UnresolvedMedia(m.as_str().to_owned()));
            }
        }
    }
    let file = fs::File::create(path)?;
    let mut w = BufWriter::new(file);
    for &i in manifest {
        let line = TrainLine::from_sample(&samples[i]);
        serde_json::to_writer(&mut w, &line).map_err(std::io::Error::other)?;
        w.write_all(b"\n")?;
    }
    w.flush()?;
    Ok(())
}
