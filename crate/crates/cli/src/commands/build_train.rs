//! `build-train` — expand dialogues into masked training samples.

use std::collections::BTreeMap;
use std::path::Path;

use sparkles_core::read_dialogues_jsonl;
use sparkles_train::{
    expand_dialogue, sample_with_turn_ratio, write_jsonl, MediaMap, MediaResolver, NoMedia,
    TrainError, TrainingSample, TurnRatio,
};

use crate::manifest::RunManifest;
use crate::{CliError, Runtime};

pub fn run(
    runtime: &Runtime,
    input: &Path,
    ratio: &str,
    out: &Path,
    media_map: Option<&Path>,
    strict_media: bool,
) -> Result<(), CliError> {
    let dialogues =
        read_dialogues_jsonl(input).map_err(|e| CliError::config(format!("input: {e}")))?;
    let ratio: TurnRatio = ratio
        .parse()
        .map_err(|e| CliError::config(format!("--ratio: {e}")))?;

    let resolver: Box<dyn MediaResolver> = match media_map {
        Some(path) => {
            let pool = sparkles_core::load_description_pool(path)
                .map_err(|e| CliError::config(format!("media map: {e}")))?;
            let map: BTreeMap<_, _> = pool
                .into_iter()
                .filter_map(|d| d.media.map(|m| (d.image_id, m)))
                .collect();
            Box::new(MediaMap(map))
        }
        None => Box::new(NoMedia),
    };

    let mut samples: Vec<TrainingSample> = Vec::new();
    for dialogue in &dialogues {
        let expanded = expand_dialogue(dialogue, &runtime.config.framing, resolver.as_ref())
            .map_err(|e| CliError::validation(format!("dialogue {}: {e}", dialogue.dialogue_id)))?;
        samples.extend(expanded);
    }

    let manifest = sample_with_turn_ratio(&samples, &ratio, runtime.seed)
        .map_err(|e| CliError::validation(e.to_string()))?;
    write_jsonl(out, &samples, &manifest, strict_media).map_err(|e| match e {
        TrainError::UnresolvedMedia(_) => CliError::validation(e.to_string()),
        other => CliError::io(other.to_string()),
    })?;

    RunManifest::new(
        "build-train",
        &runtime.argv,
        &runtime.config,
        runtime.seed,
        runtime.mock_fixture.as_deref(),
        &[out],
    )
    .write_next_to(out)?;

    eprintln!(
        "wrote {} training lines from {} dialogues ({} samples, ratio {ratio})",
        manifest.len(),
        dialogues.len(),
        samples.len(),
    );
    Ok(())
}
