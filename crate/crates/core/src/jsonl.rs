//! On-disk formats: dialogue JSON Lines and image-description pools.
//!
//! Dataset files are JSON Lines with one `{"dialogue_id": ..., "messages":
//! [...]}` object per line. Pool files are a JSON array of `{"image_id",
//! "caption", "media"?}` objects; both quoting styles for IDs are accepted.

use std::fs;
use std::io::{BufWriter, Write};
use std::path::Path;

use crate::dialogue::{image_id_from_value, Dialogue, ImageDescription};
use crate::error::{ParseError, PoolFileError};

/// Reads a dialogue dataset file (JSON Lines, one dialogue per line).
pub fn read_dialogues_jsonl(path: &Path) -> Result<Vec<Dialogue>, PoolFileError> {
    let text = fs::read_to_string(path).map_err(|source| PoolFileError::Io {
        path: path.display().to_string(),
        source,
    })?;
    let mut out = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let dialogue: Dialogue =
            serde_json::from_str(line).map_err(|e| PoolFileError::Format {
                path: path.display().to_string(),
                message: format!("line {}: {e}", lineno + 1),
            })?;
        out.push(dialogue);
    }
    Ok(out)
}

/// Writes a dialogue dataset file. Output is byte-stable for equal inputs:
/// one compact JSON object per line, newline-terminated.
pub fn write_dialogues_jsonl(path: &Path, dialogues: &[Dialogue]) -> std::io::Result<()> {
    let file = fs::File::create(path)?;
    let mut w = BufWriter::new(file);
    for d in dialogues {
        serde_json::to_writer(&mut w, d)?;
        w.write_all(b"\n")?;
    }
    w.flush()
}

/// Loads an image-description pool: a JSON array of
/// `{"image_id": ..., "caption": ..., "media": optional}`.
pub fn load_description_pool(path: &Path) -> Result<Vec<ImageDescription>, PoolFileError> {
    let text = fs::read_to_string(path).map_err(|source| PoolFileError::Io {
        path: path.display().to_string(),
        source,
    })?;
    parse_description_pool(&text).map_err(|e| PoolFileError::Format {
        path: path.display().to_string(),
        message: e.to_string(),
    })
}

/// Parses pool text. Exposed separately so embedded fixtures can use it.
pub(crate) fn parse_description_pool(text: &str) -> Result<Vec<ImageDescription>, ParseError> {
    let value = crate::relaxed::parse_relaxed_json(text)?;
    let items = value
        .as_array()
        .ok_or_else(|| ParseError::Schema("pool file must be a JSON array".into()))?;
    let mut out = Vec::with_capacity(items.len());
    for (i, item) in items.iter().enumerate() {
        let obj = item
            .as_object()
            .ok_or_else(|| ParseError::Schema(format!("pool[{i}] must be an object")))?;
        let image_id = obj
            .get("image_id")
            .ok_or_else(|| ParseError::Schema(format!("pool[{i}] is missing \"image_id\"")))
            .and_then(|v| {
                image_id_from_value(v).map_err(|e| ParseError::Schema(format!("pool[{i}]: {e}")))
            })?;
        let caption = obj
            .get("caption")
            .and_then(serde_json::Value::as_str)
            .ok_or_else(|| ParseError::Schema(format!("pool[{i}] is missing string \"caption\"")))?;
        if caption.is_empty() {
            return Err(ParseError::Schema(format!("pool[{i}] has an empty caption")));
        }
        let media = obj
            .get("media")
            .and_then(serde_json::Value::as_str)
            .map(str::to_owned);
        out.push(ImageDescription {
            image_id,
            caption: caption.to_owned(),
            media,
        });
    }
    Ok(out)
}

/// Saves a description pool as a canonical JSON array (IDs as strings).
pub fn save_description_pool(path: &Path, pool: &[ImageDescription]) -> std::io::Result<()> {
    let file = fs::File::create(path)?;
    let mut w = BufWriter::new(file);
    serde_json::to_writer_pretty(&mut w, pool)?;
    w.write_all(b"\n")?;
    w.flush()
}
