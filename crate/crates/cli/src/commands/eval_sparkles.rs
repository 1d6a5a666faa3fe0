//! `eval-sparkles` — judge-scored two-turn benchmark.

use std::path::Path;

use sparkles_client::{default_generation_config, ClientRole};
use sparkles_judge::{load_benchmark, report_json, run_sparkles_eval, EvalOptions, JudgeError, ModelSession};

use crate::manifest::RunManifest;
use crate::{CliError, Runtime};

#[allow(clippy::too_many_arguments)]
pub fn run(
    runtime: &Runtime,
    bench: &Path,
    model_endpoint: Option<&str>,
    model: Option<&str>,
    judge_endpoint: Option<&str>,
    judge_model: Option<&str>,
    out: &Path,
    max_judge_retries: Option<u32>,
    max_unrecoverable: Option<usize>,
) -> Result<(), CliError> {
    let items = load_benchmark(bench).map_err(|e| CliError::config(format!("bench: {e}")))?;
    if items.is_empty() {
        return Err(CliError::config("benchmark file has no items"));
    }

    let mut model_cfg = runtime.config.endpoints.model_under_test.clone();
    if let Some(url) = model_endpoint {
        model_cfg.base_url = url.to_owned();
    }
    if let Some(name) = model {
        model_cfg.model = name.to_owned();
    }
    let mut judge_cfg = runtime.config.endpoints.judge.clone();
    if let Some(url) = judge_endpoint {
        judge_cfg.base_url = url.to_owned();
    }
    if let Some(name) = judge_model {
        judge_cfg.model = name.to_owned();
    }

    let model_session = ModelSession {
        client: &runtime.client,
        endpoint: model_cfg.to_endpoint(),
        config: default_generation_config(ClientRole::ModelUnderTest),
    };
    let judge_session = ModelSession {
        client: &runtime.client,
        endpoint: judge_cfg.to_endpoint(),
        config: default_generation_config(ClientRole::Judge),
    };

    let default_threshold = ((items.len() as f64)
        * runtime.config.eval.max_unrecoverable_fraction)
        .floor() as usize;
    let opts = EvalOptions {
        max_judge_retries: max_judge_retries.unwrap_or(runtime.config.eval.max_judge_retries),
        max_unrecoverable: max_unrecoverable.unwrap_or(default_threshold),
        parallelism: runtime.config.parallelism,
    };

    let (scorecard, records) = run_sparkles_eval(
        &items,
        &model_session,
        &judge_session,
        &runtime.config.framing,
        &opts,
    )
    .map_err(|e| match e {
        JudgeError::Client(c) => CliError::from(c),
        JudgeError::Aborted { .. } | JudgeError::NoVerdicts => CliError::validation(e.to_string()),
        other => CliError::validation(other.to_string()),
    })?;

    let report = report_json(&scorecard, &records, &model_cfg.model, &judge_cfg.model);
    std::fs::write(out, serde_json::to_string_pretty(&report).expect("report") + "\n")?;

    RunManifest::new(
        "eval-sparkles",
        &runtime.argv,
        &runtime.config,
        runtime.seed,
        runtime.mock_fixture.as_deref(),
        &[out],
    )
    .write_next_to(out)?;

    let rounded = scorecard.rounded();
    eprintln!(
        "scored {} items: A1 {:.2} A2 {:.2} overall {:.2} ({} unrecoverable)",
        scorecard.items_scored,
        rounded.a1,
        rounded.a2,
        rounded.score,
        records.iter().filter(|r| r.ratings.is_none()).count(),
    );
    Ok(())
}
