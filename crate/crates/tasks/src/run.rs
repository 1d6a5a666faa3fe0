//! The evaluation loop: prompt, call, extract, regenerate, score.

use serde::{Deserialize, Serialize};
use sparkles_client::{
    parts_from_tagged_text_with, ChatClient, ChatMessage, ChatRequest, ClientError, Endpoint,
    GenerationConfig, IMAGE_SLOT,
};
use sparkles_train::FramingConfig;

use crate::example::{Answer, TaskExample};
use crate::extract::extract_final_answer;
use crate::prompt::build_task_prompt;

/// A client bound to the model under test.
pub struct ModelSession<'a> {
    pub client: &'a ChatClient,
    pub endpoint: Endpoint,
    pub config: GenerationConfig,
}

/// Outcome for one example. `correct` is defined exactly when an answer was
/// extracted; exhausted examples score as incorrect without an answer.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TaskResult {
    pub example_id: String,
    pub raw_response: String,
    pub extracted: Option<Answer>,
    pub attempts: u32,
    pub correct: Option<bool>,
}

/// Whole-run scoring.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TaskEvalSummary {
    pub total: usize,
    pub correct: usize,
    /// Fraction in [0, 1].
    pub accuracy: f64,
    /// Percentage rounded half-up to one decimal, e.g. 56.7.
    pub accuracy_percent: f64,
    pub results: Vec<TaskResult>,
}

/// Percentage with one decimal, rounded half-up, via integer arithmetic.
fn percent_one_decimal(correct: usize, total: usize) -> f64 {
    if total == 0 {
        return 0.0;
    }
    let tenths = (correct as u64 * 2000 + total as u64) / (2 * total as u64);
    tenths as f64 / 10.0
}

/// Evaluates every example in order. Format violations and ambiguous
/// answers trigger regeneration (same prompt, same sampling config) up to
/// `max_regen` extra calls; an example that never conforms is scored
/// incorrect. Transport failures abort the run.
pub fn run_task_eval(
    examples: &[TaskExample],
    model: &ModelSession<'_>,
    cfg: &FramingConfig,
    max_regen: u32,
) -> Result<TaskEvalSummary, ClientError> {
    let mut results = Vec::with_capacity(examples.len());
    for example in examples {
        // Annotation text is untrusted; a literal slot token inside it
        // would add a phantom image slot to the framed prompt.
        let mut example = example.clone();
        example.text = example.text.replace(IMAGE_SLOT, "");
        let example = &example;
        let task_prompt = build_task_prompt(example);
        let framed = format!(
            "{}{sep}{}{}{sep}{}",
            cfg.system_message,
            cfg.user_prefix(),
            task_prompt,
            cfg.assistant_prefix(),
            sep = cfg.separator,
        );
        let media = vec![
            example.image_pair.0.locator.clone(),
            example.image_pair.1.locator.clone(),
        ];
        let parts = parts_from_tagged_text_with(&framed, &media, IMAGE_SLOT)
            .expect("task prompts carry exactly two slots");
        let request = ChatRequest {
            endpoint: model.endpoint.clone(),
            system: String::new(),
            messages: vec![ChatMessage::user_parts(parts)],
            config: model.config.clone(),
        };

        let mut result = TaskResult {
            example_id: example.example_id.clone(),
            raw_response: String::new(),
            extracted: None,
            attempts: 0,
            correct: None,
        };
        for _ in 0..=max_regen {
            result.attempts += 1;
            let response = model.client.complete_chat(&request)?;
            result.raw_response = response.content;
            match extract_final_answer(&result.raw_response, example.task) {
                Ok(answer) => {
                    result.extracted = Some(answer);
                    result.correct = Some(answer == example.gold);
                    break;
                }
                Err(_) => continue,
            }
        }
        results.push(result);
    }

    let correct = results.iter().filter(|r| r.correct == Some(true)).count();
    let total = results.len();
    Ok(TaskEvalSummary {
        total,
        correct,
        accuracy: if total == 0 {
            0.0
        } else {
            correct as f64 / total as f64
        },
        accuracy_percent: percent_one_decimal(correct, total),
        results,
    })
}
