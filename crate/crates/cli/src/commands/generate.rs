//! `generate` — run the data LLM over demonstration and candidate pools.

use std::io::Write;
use std::path::Path;

use sparkles_client::{default_generation_config, ClientRole};
use sparkles_core::write_dialogues_jsonl;
use sparkles_gen::{
    run_generation, CandidatePool, DemonstrationPool, GenContext, GenError, GenMode, NumImages,
    VgImageChoice,
};

use crate::manifest::RunManifest;
use crate::{CliError, Runtime};

#[allow(clippy::too_many_arguments)]
pub fn run(
    runtime: &Runtime,
    mode: GenMode,
    count: usize,
    pool_path: &Path,
    demos_path: &Path,
    out: &Path,
    state: Option<&Path>,
    num_images: Option<NumImages>,
    max_attempts: Option<u32>,
) -> Result<(), CliError> {
    let demos = DemonstrationPool::load(demos_path)
        .map_err(|e| CliError::config(format!("demos: {e}")))?;
    let default_state = pool_path.with_extension("state.json");
    let state_path = match mode {
        GenMode::SingleVg => Some(state.unwrap_or(&default_state)),
        GenMode::MultiCc => None,
    };
    let mut candidates = CandidatePool::load(pool_path, state_path)
        .map_err(|e| CliError::config(format!("pool: {e}")))?;

    let ctx = GenContext {
        client: &runtime.client,
        endpoint: runtime.config.endpoints.data_llm.to_endpoint(),
        config: default_generation_config(ClientRole::DataLlm),
    };
    let vg_choice = match num_images {
        Some(n) => VgImageChoice::Fixed(n),
        None => VgImageChoice::Weighted(runtime.config.generation.three_image_weight),
    };
    let max_attempts = max_attempts.unwrap_or(runtime.config.generation.max_attempts);

    let summary = run_generation(
        mode,
        count,
        runtime.seed,
        max_attempts,
        vg_choice,
        &demos,
        &mut candidates,
        &ctx,
    )
    .map_err(|e| match e {
        GenError::Failed { .. } => CliError::validation(e.to_string()),
        GenError::Client(c) => CliError::from(c),
        GenError::Pool(_) | GenError::Template(_) => CliError::config(e.to_string()),
    })?;

    let dialogues: Vec<sparkles_core::Dialogue> = summary
        .dialogues
        .iter()
        .map(|g| g.dialogue.clone())
        .collect();
    write_dialogues_jsonl(out, &dialogues)?;

    let requests_path = sibling(out, ".requests.jsonl");
    let mut requests = std::fs::File::create(&requests_path)?;
    for record in &summary.records {
        let line = serde_json::to_string(record).expect("record serializes");
        writeln!(requests, "{line}")?;
    }

    RunManifest::new(
        "generate",
        &runtime.argv,
        &runtime.config,
        runtime.seed,
        runtime.mock_fixture.as_deref(),
        &[out, &requests_path],
    )
    .write_next_to(out)?;

    eprintln!(
        "generated {} dialogues over {} requests ({} failed)",
        dialogues.len(),
        summary.records.len(),
        summary.failed_requests
    );
    Ok(())
}

fn sibling(out: &Path, suffix: &str) -> std::path::PathBuf {
    let mut name = out.file_name().unwrap_or_default().to_owned();
    name.push(suffix);
    out.with_file_name(name)
}
