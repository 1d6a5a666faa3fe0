//! Request orchestration: sample → prompt → call → extract → parse →
//! validate, with fresh randomness on every retry.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use sparkles_client::{ChatClient, ChatMessage, ChatRequest, ClientError, Endpoint, GenerationConfig};
use sparkles_core::{parse_dialogues, validate_dialogue, DatasetSpec, Dialogue, ImageId};

use crate::extract::extract_json_block;
use crate::pool::{CandidatePool, DemonstrationPool, PoolError};
use crate::seed::{derive_seed, derive_uuid};
use crate::templates::{
    build_multi_dialogue_prompt, build_single_dialogue_prompt, NumImages, TemplateError,
    DATA_LLM_SYSTEM_MESSAGE,
};

/// The two generation modes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GenMode {
    /// One dialogue per request; first turn selects two or three images;
    /// candidates are consumed and never reused.
    SingleVg,
    /// Three dialogues per request with first-turn image counts 1, 2, 3;
    /// candidates may recur across requests.
    MultiCc,
}

/// One generation request's parameters.
#[derive(Debug, Clone)]
pub struct GenerationTask {
    pub mode: GenMode,
    /// First-turn image count; required in single-dialogue mode.
    pub num_images_turn1: Option<NumImages>,
    pub seed: u64,
    pub max_attempts: u32,
}

impl GenerationTask {
    pub fn single_vg(num_images: NumImages, seed: u64) -> Self {
        GenerationTask {
            mode: GenMode::SingleVg,
            num_images_turn1: Some(num_images),
            seed,
            max_attempts: 3,
        }
    }

    pub fn multi_cc(seed: u64) -> Self {
        GenerationTask {
            mode: GenMode::MultiCc,
            num_images_turn1: None,
            seed,
            max_attempts: 3,
        }
    }

    pub fn with_max_attempts(mut self, max_attempts: u32) -> Self {
        self.max_attempts = max_attempts.max(1);
        self
    }

    pub fn n_demos(&self) -> usize {
        match self.mode {
            GenMode::SingleVg => 1,
            GenMode::MultiCc => 3,
        }
    }

    pub fn n_candidates(&self) -> usize {
        match self.mode {
            GenMode::SingleVg => 4,
            GenMode::MultiCc => 9,
        }
    }

    pub fn dialogues_per_request(&self) -> usize {
        match self.mode {
            GenMode::SingleVg => 1,
            GenMode::MultiCc => 3,
        }
    }

    /// Dataset spec the dialogue at `position` (0-based) must satisfy.
    pub fn spec_for_position(&self, position: usize) -> DatasetSpec {
        match self.mode {
            GenMode::SingleVg => {
                let n = self
                    .num_images_turn1
                    .expect("single mode has a first-turn image count")
                    .count();
                DatasetSpec::new(
                    format!("vg-{n}-1"),
                    vec![[n].into_iter().collect(), [1].into_iter().collect()],
                    1,
                )
            }
            GenMode::MultiCc => {
                let n = position + 1;
                DatasetSpec::new(
                    format!("cc-{n}-1"),
                    vec![[n].into_iter().collect(), [1].into_iter().collect()],
                    3,
                )
            }
        }
    }
}

/// Client, endpoint, and sampling parameters for the data LLM.
pub struct GenContext<'a> {
    pub client: &'a ChatClient,
    pub endpoint: Endpoint,
    pub config: GenerationConfig,
}

/// Where a generated dialogue came from.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Provenance {
    pub request_index: u32,
    pub attempt: u32,
    pub demo_ids: Vec<String>,
    pub candidate_ids: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GeneratedDialogue {
    pub dialogue: Dialogue,
    pub provenance: Provenance,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RequestOutcome {
    /// Every expected dialogue validated.
    Success,
    /// Some but not all dialogues validated; the valid ones are kept.
    Partial,
    Failed,
}

/// Per-request provenance line for the run manifest.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RequestRecord {
    pub request_index: u32,
    pub attempts: u32,
    pub outcome: RequestOutcome,
    pub dialogue_ids: Vec<String>,
    pub demo_ids: Vec<String>,
    pub candidate_ids: Vec<String>,
    pub failures: Vec<String>,
    pub prompt_tokens: u64,
    pub completion_tokens: u64,
}

/// Outcome of one generation request.
#[derive(Debug)]
pub struct RequestResult {
    pub dialogues: Vec<GeneratedDialogue>,
    pub record: RequestRecord,
}

#[derive(Debug, Error)]
pub enum GenError {
    #[error("generation failed after {attempts} attempts: {}", reasons.join("; "))]
    Failed { attempts: u32, reasons: Vec<String> },
    #[error(transparent)]
    Pool(#[from] PoolError),
    #[error(transparent)]
    Template(#[from] TemplateError),
    #[error(transparent)]
    Client(#[from] ClientError),
}

/// Runs one generation request end to end. Validation failures trigger a
/// fresh attempt (new demos, candidates, randomness) up to
/// `task.max_attempts`; transport-level failures abort immediately.
pub fn generate_dialogues(
    task: &GenerationTask,
    demos: &DemonstrationPool,
    candidates: &mut CandidatePool,
    ctx: &GenContext,
    request_index: u32,
) -> Result<RequestResult, GenError> {
    let mut reasons: Vec<String> = Vec::new();
    let mut prompt_tokens = 0u64;
    let mut completion_tokens = 0u64;

    for attempt in 1..=task.max_attempts {
        let mut rng =
            ChaCha8Rng::seed_from_u64(derive_seed(task.seed, request_index as u64, attempt as u64));

        let picked_demos = match task.mode {
            GenMode::SingleVg => {
                let n = task
                    .num_images_turn1
                    .expect("single mode has a first-turn image count")
                    .count();
                demos.sample_branch(n, 1, &mut rng)?
            }
            GenMode::MultiCc => {
                let mut picked = Vec::with_capacity(3);
                for branch in 1..=3 {
                    picked.extend(demos.sample_branch(branch, 1, &mut rng)?);
                }
                picked
            }
        };
        let exclude = task.mode == GenMode::SingleVg;
        let drawn = candidates.draw(task.n_candidates(), exclude, &mut rng)?;

        let prompt = match task.mode {
            GenMode::SingleVg => build_single_dialogue_prompt(
                &picked_demos,
                &drawn,
                task.num_images_turn1.expect("checked above"),
            )?,
            GenMode::MultiCc => build_multi_dialogue_prompt(&picked_demos, &drawn)?,
        };

        let request = ChatRequest {
            endpoint: ctx.endpoint.clone(),
            system: DATA_LLM_SYSTEM_MESSAGE.into(),
            messages: vec![ChatMessage::user_text(prompt)],
            config: ctx.config.clone(),
        };
        let response = ctx.client.complete_chat(&request)?;
        prompt_tokens += response.usage.prompt_tokens;
        completion_tokens += response.usage.completion_tokens;

        let demo_ids: Vec<String> = picked_demos.iter().map(|d| d.dialogue_id.clone()).collect();
        let candidate_ids: Vec<String> =
            drawn.iter().map(|d| d.image_id.to_string()).collect();
        let allowed_ids: Vec<ImageId> = drawn.iter().map(|d| d.image_id.clone()).collect();

        match accept_response(task, &response.content, &allowed_ids) {
            Ok(accepted) => {
                let expected = task.dialogues_per_request();
                let mut dialogues = Vec::with_capacity(accepted.len());
                for (position, mut dialogue) in accepted {
                    dialogue.dialogue_id = derive_uuid(
                        task.seed,
                        request_index as u64,
                        attempt as u64,
                        position as u64,
                    );
                    dialogues.push(GeneratedDialogue {
                        dialogue,
                        provenance: Provenance {
                            request_index,
                            attempt,
                            demo_ids: demo_ids.clone(),
                            candidate_ids: candidate_ids.clone(),
                        },
                    });
                }
                let outcome = if dialogues.len() == expected {
                    RequestOutcome::Success
                } else {
                    RequestOutcome::Partial
                };
                let record = RequestRecord {
                    request_index,
                    attempts: attempt,
                    outcome,
                    dialogue_ids: dialogues
                        .iter()
                        .map(|g| g.dialogue.dialogue_id.clone())
                        .collect(),
                    demo_ids,
                    candidate_ids,
                    failures: reasons,
                    prompt_tokens,
                    completion_tokens,
                };
                return Ok(RequestResult { dialogues, record });
            }
            Err(attempt_reasons) => {
                reasons.push(format!("attempt {attempt}: {}", attempt_reasons.join("; ")));
            }
        }
    }
    Err(GenError::Failed {
        attempts: task.max_attempts,
        reasons,
    })
}

/// Extracts, parses, and validates a model reply. Returns valid dialogues
/// with their positions, or every reason the reply was rejected.
fn accept_response(
    task: &GenerationTask,
    content: &str,
    allowed_ids: &[ImageId],
) -> Result<Vec<(usize, Dialogue)>, Vec<String>> {
    let block = match extract_json_block(content) {
        Ok(b) => b,
        Err(e) => return Err(vec![e.to_string()]),
    };
    let parsed = match parse_dialogues(&block) {
        Ok(p) => p,
        Err(e) => return Err(vec![e.to_string()]),
    };

    let expected = task.dialogues_per_request();
    let mut reasons = Vec::new();
    if parsed.len() != expected {
        reasons.push(format!(
            "expected {expected} dialogues, model returned {}",
            parsed.len()
        ));
    }

    let mut accepted = Vec::new();
    for (position, dialogue) in parsed.into_iter().enumerate().take(expected) {
        let spec = task.spec_for_position(position);
        let report = validate_dialogue(&dialogue, &spec);
        if !report.is_valid() {
            for v in &report.violations {
                reasons.push(format!("dialogue {position}: [{:?}] {}", v.rule_id, v.message));
            }
            continue;
        }
        let foreign: Vec<String> = dialogue
            .all_image_ids()
            .into_iter()
            .filter(|id| !allowed_ids.contains(id))
            .map(|id| id.to_string())
            .collect();
        if !foreign.is_empty() {
            reasons.push(format!(
                "dialogue {position}: selects non-candidate images {}",
                foreign.join(", ")
            ));
            continue;
        }
        accepted.push((position, dialogue));
    }
    if accepted.is_empty() {
        if reasons.is_empty() {
            reasons.push("model returned no dialogues".into());
        }
        Err(reasons)
    } else {
        Ok(accepted)
    }
}

/// How single-dialogue runs pick the first-turn image count per request.
#[derive(Debug, Clone, Copy)]
pub enum VgImageChoice {
    Fixed(NumImages),
    /// Probability of selecting three images (vs two).
    Weighted(f64),
}

/// A whole run's worth of dialogues and per-request records.
#[derive(Debug)]
pub struct RunSummary {
    pub dialogues: Vec<GeneratedDialogue>,
    pub records: Vec<RequestRecord>,
    pub failed_requests: u32,
}

/// Generates approximately `count` dialogues (exactly `count` requests in
/// single mode, `ceil(count / 3)` in multi mode). Requests that exhaust
/// their attempts are recorded and skipped; the run fails only when nothing
/// at all was produced.
#[allow(clippy::too_many_arguments)]
pub fn run_generation(
    mode: GenMode,
    count: usize,
    seed: u64,
    max_attempts: u32,
    vg_choice: VgImageChoice,
    demos: &DemonstrationPool,
    candidates: &mut CandidatePool,
    ctx: &GenContext,
) -> Result<RunSummary, GenError> {
    let requests = match mode {
        GenMode::SingleVg => count,
        GenMode::MultiCc => count.div_ceil(3),
    };
    let mut summary = RunSummary {
        dialogues: Vec::new(),
        records: Vec::new(),
        failed_requests: 0,
    };
    for request_index in 0..requests as u32 {
        let task = match mode {
            GenMode::SingleVg => {
                let num = match vg_choice {
                    VgImageChoice::Fixed(n) => n,
                    VgImageChoice::Weighted(p_three) => {
                        let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(
                            seed,
                            request_index as u64,
                            0,
                        ));
                        if rng.random_bool(p_three.clamp(0.0, 1.0)) {
                            NumImages::Three
                        } else {
                            NumImages::Two
                        }
                    }
                };
                GenerationTask::single_vg(num, seed).with_max_attempts(max_attempts)
            }
            GenMode::MultiCc => GenerationTask::multi_cc(seed).with_max_attempts(max_attempts),
        };
        match generate_dialogues(&task, demos, candidates, ctx, request_index) {
            Ok(result) => {
                summary.dialogues.extend(result.dialogues);
                summary.records.push(result.record);
            }
            Err(GenError::Failed { attempts, reasons }) => {
                summary.failed_requests += 1;
                summary.records.push(RequestRecord {
                    request_index,
                    attempts,
                    outcome: RequestOutcome::Failed,
                    dialogue_ids: vec![],
                    demo_ids: vec![],
                    candidate_ids: vec![],
                    failures: reasons,
                    prompt_tokens: 0,
                    completion_tokens: 0,
                });
            }
            Err(other) => return Err(other),
        }
    }
    if summary.dialogues.is_empty() && count > 0 {
        let reasons = summary
            .records
            .iter()
            .flat_map(|r| r.failures.iter().cloned())
            .collect();
        return Err(GenError::Failed {
            attempts: max_attempts,
            reasons,
        });
    }
    Ok(summary)
}
