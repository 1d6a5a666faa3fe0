//! Driving the model under test and the judge over a benchmark.

use std::collections::BTreeSet;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;

use serde::{Deserialize, Serialize};
use sparkles_client::{
    parts_from_tagged_text_with, ChatClient, ChatMessage, ChatRequest, ClientError, Endpoint,
    GenerationConfig,
};
use sparkles_core::ImageId;
use sparkles_train::{interleave_with_history, FramingConfig};

use crate::item::EvalItem;
use crate::prompt::{build_judge_prompt, JUDGE_SYSTEM_MESSAGE};
use crate::score::EvalScorecard;
use crate::verdict::{parse_judge_output, JudgeVerdict};
use crate::JudgeError;

/// A client bound to one endpoint and sampling profile.
pub struct ModelSession<'a> {
    pub client: &'a ChatClient,
    pub endpoint: Endpoint,
    pub config: GenerationConfig,
}

impl ModelSession<'_> {
    fn chat_parts(&self, parts: Vec<sparkles_client::Part>) -> Result<String, ClientError> {
        let request = ChatRequest {
            endpoint: self.endpoint.clone(),
            // The framed prompt embeds its own system text; nothing extra
            // goes on the wire.
            system: String::new(),
            messages: vec![ChatMessage::user_parts(parts)],
            config: self.config.clone(),
        };
        Ok(self.client.complete_chat(&request)?.content)
    }

    fn chat_text(&self, system: &str, text: String) -> Result<String, ClientError> {
        let request = ChatRequest {
            endpoint: self.endpoint.clone(),
            system: system.to_owned(),
            messages: vec![ChatMessage::user_text(text)],
            config: self.config.clone(),
        };
        Ok(self.client.complete_chat(&request)?.content)
    }
}

/// A framed prompt plus the media feeding its image slots, in slot order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FramedTurn {
    pub text: String,
    pub media: Vec<String>,
}

/// Builds the framed prompts for both turns. The second turn's prompt is a
/// strict extension of the first: previous answer, separator, next
/// user/assistant block. `a1` fills the first answer slot in the turn-two
/// prompt.
pub fn frame_turn_prompts(
    item: &EvalItem,
    cfg: &FramingConfig,
    a1: Option<&str>,
) -> Result<(FramedTurn, Option<FramedTurn>), JudgeError> {
    let sep = &cfg.separator;
    let t1_new: BTreeSet<ImageId> = item.turn1.image_ids.iter().cloned().collect();
    let (q1_tagged, slots1) =
        interleave_with_history(&item.turn1.question, &t1_new, &BTreeSet::new(), cfg)
            .map_err(|e| JudgeError::Interleave(e.to_string()))?;
    let media1: Vec<String> = slots1.iter().map(|id| item.media(id)).collect();
    let prompt1 = format!(
        "{}{sep}{}{}{sep}{}",
        cfg.system_message,
        cfg.user_prefix(),
        q1_tagged,
        cfg.assistant_prefix()
    );
    let turn1 = FramedTurn {
        text: prompt1.clone(),
        media: media1.clone(),
    };

    let Some(a1) = a1 else {
        return Ok((turn1, None));
    };
    // A stray slot token in the model's answer would corrupt the
    // slot/media pairing of the turn-two prompt.
    let a1 = a1.replace(&cfg.image_slot, "");
    let t2_new: BTreeSet<ImageId> = item.turn2.image_ids.iter().cloned().collect();
    let (q2_tagged, slots2) = interleave_with_history(&item.turn2.question, &t2_new, &t1_new, cfg)
        .map_err(|e| JudgeError::Interleave(e.to_string()))?;
    let mut media2 = media1;
    media2.extend(slots2.iter().map(|id| item.media(id)));
    let prompt2 = format!(
        "{prompt1}{a1}{sep}{}{}{sep}{}",
        cfg.user_prefix(),
        q2_tagged,
        cfg.assistant_prefix()
    );
    Ok((
        turn1,
        Some(FramedTurn {
            text: prompt2,
            media: media2,
        }),
    ))
}

/// Runs the two-turn dialogue against the model under test, threading the
/// first answer into the second prompt. Returns (A1, A2).
pub fn run_model_dialogue(
    item: &EvalItem,
    model: &ModelSession<'_>,
    cfg: &FramingConfig,
) -> Result<(String, String), JudgeError> {
    let (turn1, _) = frame_turn_prompts(item, cfg, None)?;
    let parts = parts_from_tagged_text_with(&turn1.text, &turn1.media, &cfg.image_slot)
        .map_err(JudgeError::Interleave)?;
    let a1 = model.chat_parts(parts)?;
    if a1.trim().is_empty() {
        return Err(JudgeError::EmptyResponse);
    }

    let (_, turn2) = frame_turn_prompts(item, cfg, Some(&a1))?;
    let turn2 = turn2.expect("a1 provided");
    let parts = parts_from_tagged_text_with(&turn2.text, &turn2.media, &cfg.image_slot)
        .map_err(JudgeError::Interleave)?;
    let a2 = model.chat_parts(parts)?;
    if a2.trim().is_empty() {
        return Err(JudgeError::EmptyResponse);
    }
    Ok((a1, a2))
}

/// Per-item evaluation record.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ItemRecord {
    pub item_id: String,
    pub a1_text: String,
    pub a2_text: String,
    /// The judge's final raw reply (empty if the model side failed first).
    pub judge_raw: String,
    pub ratings: Option<JudgeVerdict>,
    /// Judge calls made for this item.
    pub attempts: u32,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub failure: Option<String>,
}

/// Evaluation knobs.
#[derive(Debug, Clone)]
pub struct EvalOptions {
    /// Additional judge calls after a malformed verdict.
    pub max_judge_retries: u32,
    /// How many unrecoverable items the run tolerates before aborting.
    pub max_unrecoverable: usize,
    pub parallelism: usize,
}

impl Default for EvalOptions {
    fn default() -> Self {
        EvalOptions {
            max_judge_retries: 2,
            max_unrecoverable: usize::MAX,
            parallelism: 1,
        }
    }
}

fn evaluate_item(
    item: &EvalItem,
    model: &ModelSession<'_>,
    judge: &ModelSession<'_>,
    cfg: &FramingConfig,
    opts: &EvalOptions,
) -> Result<ItemRecord, JudgeError> {
    let mut record = ItemRecord {
        item_id: item.item_id.clone(),
        a1_text: String::new(),
        a2_text: String::new(),
        judge_raw: String::new(),
        ratings: None,
        attempts: 0,
        failure: None,
    };

    let (a1, a2) = match run_model_dialogue(item, model, cfg) {
        Ok(pair) => pair,
        Err(JudgeError::Client(e)) => return Err(JudgeError::Client(e)),
        Err(e) => {
            record.failure = Some(e.to_string());
            return Ok(record);
        }
    };
    record.a1_text = a1.clone();
    record.a2_text = a2.clone();

    let prompt = match build_judge_prompt(item, &a1, &a2) {
        Ok(p) => p,
        Err(e) => {
            record.failure = Some(e.to_string());
            return Ok(record);
        }
    };

    let mut last_error = String::new();
    for _ in 0..=opts.max_judge_retries {
        record.attempts += 1;
        let reply = match judge.chat_text(JUDGE_SYSTEM_MESSAGE, prompt.clone()) {
            Ok(r) => r,
            Err(e) => return Err(JudgeError::Client(e)),
        };
        record.judge_raw = reply.clone();
        match parse_judge_output(&reply) {
            Ok(verdict) => {
                record.ratings = Some(verdict);
                return Ok(record);
            }
            Err(e) => last_error = e.to_string(),
        }
    }
    record.failure = Some(format!(
        "judge never produced a well-formed verdict: {last_error}"
    ));
    Ok(record)
}

/// Evaluates every item, aggregates the recovered verdicts, and returns
/// per-item records in input order. Items whose judge verdicts stay
/// malformed after retries are excluded from the means and reported;
/// transport-level failures abort the whole run.
pub fn run_sparkles_eval(
    items: &[EvalItem],
    model: &ModelSession<'_>,
    judge: &ModelSession<'_>,
    cfg: &FramingConfig,
    opts: &EvalOptions,
) -> Result<(EvalScorecard, Vec<ItemRecord>), JudgeError> {
    let records: Vec<ItemRecord> = if opts.parallelism <= 1 {
        let mut out = Vec::with_capacity(items.len());
        for item in items {
            out.push(evaluate_item(item, model, judge, cfg, opts)?);
        }
        out
    } else {
        let slots: Vec<Mutex<Option<ItemRecord>>> =
            items.iter().map(|_| Mutex::new(None)).collect();
        let next = AtomicUsize::new(0);
        let first_error: Mutex<Option<JudgeError>> = Mutex::new(None);
        std::thread::scope(|scope| {
            for _ in 0..opts.parallelism.min(items.len()) {
                scope.spawn(|| loop {
                    let i = next.fetch_add(1, Ordering::SeqCst);
                    if i >= items.len() || first_error.lock().unwrap().is_some() {
                        break;
                    }
                    match evaluate_item(&items[i], model, judge, cfg, opts) {
                        Ok(record) => *slots[i].lock().unwrap() = Some(record),
                        Err(e) => {
                            first_error.lock().unwrap().get_or_insert(e);
                            break;
                        }
                    }
                });
            }
        });
        if let Some(e) = first_error.into_inner().unwrap() {
            return Err(e);
        }
        slots
            .into_iter()
            .map(|s| s.into_inner().unwrap().expect("all slots filled"))
            .collect()
    };

    let failed = records.iter().filter(|r| r.ratings.is_none()).count();
    if failed > opts.max_unrecoverable {
        return Err(JudgeError::Aborted {
            failed,
            threshold: opts.max_unrecoverable,
        });
    }
    let verdicts: Vec<JudgeVerdict> = records
        .iter()
        .filter_map(|r| r.ratings.clone())
        .collect();
    let scorecard = EvalScorecard::aggregate(&verdicts)?;
    Ok((scorecard, records))
}

/// Assembles the on-disk evaluation report.
pub fn report_json(
    scorecard: &EvalScorecard,
    records: &[ItemRecord],
    model_name: &str,
    judge_model: &str,
) -> serde_json::Value {
    serde_json::json!({
        "model": model_name,
        "judge_model": judge_model,
        "items_total": records.len(),
        "items_unrecoverable": records.iter().filter(|r| r.ratings.is_none()).count(),
        "scorecard": scorecard.rounded(),
        "items": records,
    })
}
