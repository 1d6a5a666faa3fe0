//! `eval-task` — zero-shot two-image task evaluation.

use std::collections::BTreeSet;
use std::path::Path;

use sparkles_client::{default_generation_config, ClientRole};
use sparkles_tasks::{
    dedup_against_training, load_bison, load_nlvr2, run_task_eval, sample_examples, ModelSession,
    Task,
};

use crate::manifest::RunManifest;
use crate::{CliError, Runtime};

#[allow(clippy::too_many_arguments)]
pub fn run(
    runtime: &Runtime,
    task: Task,
    annotations: &Path,
    n: usize,
    model_endpoint: Option<&str>,
    model: Option<&str>,
    out: &Path,
    max_regen: Option<u32>,
    dedup_registry: Option<&Path>,
) -> Result<(), CliError> {
    let examples = match task {
        Task::Bison => load_bison(annotations),
        Task::Nlvr2 => load_nlvr2(annotations),
    }
    .map_err(|e| CliError::config(e.to_string()))?;

    let (examples, removed) = match dedup_registry {
        Some(path) => {
            let text = std::fs::read_to_string(path)?;
            let registry: BTreeSet<String> = serde_json::from_str(&text)
                .map_err(|e| CliError::config(format!("dedup registry: {e}")))?;
            dedup_against_training(examples, &registry)
        }
        None => (examples, 0),
    };
    if examples.is_empty() {
        return Err(CliError::validation(
            "no examples left to evaluate after dedup",
        ));
    }
    let sampled = sample_examples(&examples, n, runtime.seed);

    let mut model_cfg = runtime.config.endpoints.model_under_test.clone();
    if let Some(url) = model_endpoint {
        model_cfg.base_url = url.to_owned();
    }
    if let Some(name) = model {
        model_cfg.model = name.to_owned();
    }
    let session = ModelSession {
        client: &runtime.client,
        endpoint: model_cfg.to_endpoint(),
        config: default_generation_config(ClientRole::ModelUnderTest),
    };

    let summary = run_task_eval(
        &sampled,
        &session,
        &runtime.config.framing,
        max_regen.unwrap_or(runtime.config.eval.max_regen),
    )?;

    let report = serde_json::json!({
        "task": task,
        "model": model_cfg.model,
        "examples_loaded": examples.len(),
        "removed_by_dedup": removed,
        "evaluated": summary.total,
        "correct": summary.correct,
        "accuracy": summary.accuracy,
        "accuracy_percent": summary.accuracy_percent,
        "results": summary.results,
    });
    std::fs::write(out, serde_json::to_string_pretty(&report).expect("report") + "\n")?;

    RunManifest::new(
        "eval-task",
        &runtime.argv,
        &runtime.config,
        runtime.seed,
        runtime.mock_fixture.as_deref(),
        &[out],
    )
    .write_next_to(out)?;

    eprintln!(
        "{:?}: {}/{} correct, accuracy {:.1}%",
        task, summary.correct, summary.total, summary.accuracy_percent
    );
    Ok(())
}
