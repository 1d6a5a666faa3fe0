//! Benchmark runs against replayed model and judge replies.

use std::sync::Arc;

use sparkles_client::{
    default_generation_config, ChatClient, ClientRole, Endpoint, FixtureEntry, ReplayTransport,
    RetryPolicy,
};
use sparkles_core::{ImageDescription, ImageId};
use sparkles_judge::{
    frame_turn_prompts, render_conformant_reply, run_model_dialogue, run_sparkles_eval,
    EvalItem, EvalOptions, EvalTurn, JudgeError, ModelSession,
};
use sparkles_train::FramingConfig;

fn id(s: &str) -> ImageId {
    ImageId::new(s).unwrap()
}

fn item(class: (usize, usize), tag: usize) -> EvalItem {
    let mut descriptions = Vec::new();
    let mut t1 = Vec::new();
    let mut t2 = Vec::new();
    for i in 0..class.0 {
        let iid = id(&format!("{}", 1000 * (tag + 1) + i));
        descriptions.push(ImageDescription::new(iid.clone(), format!("scene {i}")));
        t1.push(iid);
    }
    for i in 0..class.1 {
        let iid = id(&format!("{}", 1000 * (tag + 1) + 500 + i));
        descriptions.push(ImageDescription::new(iid.clone(), format!("extra {i}")));
        t2.push(iid);
    }
    let mention = |ids: &[ImageId]| {
        ids.iter()
            .map(|i| i.reference())
            .collect::<Vec<_>>()
            .join(" and ")
    };
    EvalItem {
        item_id: format!("item-{tag}"),
        image_descriptions: descriptions,
        turn1: EvalTurn {
            question: format!("Compare {}.", mention(&t1)),
            image_ids: t1,
        },
        turn2: EvalTurn {
            question: format!("Relate {} to the earlier images.", mention(&t2)),
            image_ids: t2,
        },
        config_class: class,
    }
}

fn session<'a>(client: &'a ChatClient, role: ClientRole, model: &str) -> ModelSession<'a> {
    ModelSession {
        client,
        endpoint: Endpoint::new(format!("mock://{model}"), model),
        config: default_generation_config(role),
    }
}

fn replay(contents: &[&str]) -> ChatClient {
    let entries: Vec<FixtureEntry> = contents
        .iter()
        .map(|c| FixtureEntry::wildcard_chat(c))
        .collect();
    ChatClient::new(Arc::new(ReplayTransport::new(entries))).with_retry(RetryPolicy::immediate(2))
}

#[test]
fn model_dialogue_captures_both_answers_in_order() {
    let client = replay(&["first answer", "second answer"]);
    let model = session(&client, ClientRole::ModelUnderTest, "mut");
    let (a1, a2) = run_model_dialogue(&item((2, 1), 0), &model, &FramingConfig::default()).unwrap();
    assert_eq!(a1, "first answer");
    assert_eq!(a2, "second answer");
}

#[test]
fn turn_two_prompt_of_a_two_two_item_has_two_new_slots() {
    let cfg = FramingConfig::default();
    let (turn1, turn2) = frame_turn_prompts(&item((2, 2), 0), &cfg, Some("answer one")).unwrap();
    let turn2 = turn2.unwrap();
    assert!(turn2.text.starts_with(&turn1.text));
    let continuation = &turn2.text[turn1.text.len()..];
    assert_eq!(continuation.matches("<ImageHere>").count(), 2);
    assert_eq!(turn1.media.len(), 2);
    assert_eq!(turn2.media.len(), 4);
    assert!(continuation.contains("answer one###Human: "));
    assert!(turn2.text.ends_with("###Assistant: "));
}

#[test]
fn slot_tokens_in_model_answers_are_stripped_from_later_prompts() {
    let client = replay(&["answer with a stray <ImageHere> token", "second answer"]);
    let model = session(&client, ClientRole::ModelUnderTest, "mut");
    let (a1, a2) = run_model_dialogue(&item((2, 1), 0), &model, &FramingConfig::default()).unwrap();
    // The transcript keeps the raw answer; only the embedded prompt is
    // sanitized, which is what lets the turn-two call succeed at all.
    assert!(a1.contains("<ImageHere>"));
    assert_eq!(a2, "second answer");
}

#[test]
fn empty_model_output_is_an_empty_response_error() {
    let client = replay(&["", "unused"]);
    let model = session(&client, ClientRole::ModelUnderTest, "mut");
    assert!(matches!(
        run_model_dialogue(&item((2, 1), 0), &model, &FramingConfig::default()),
        Err(JudgeError::EmptyResponse)
    ));
}

fn good_reply(r: u8) -> String {
    render_conformant_reply([r; 3], r, [r.saturating_sub(1); 3], r, &["e"; 6])
}

#[test]
fn single_item_run_scores_the_mean_of_turn_means() {
    let model_client = replay(&["answer one", "answer two"]);
    let judge_client = replay(&[&good_reply(9)]);
    let model = session(&model_client, ClientRole::ModelUnderTest, "mut");
    let judge = session(&judge_client, ClientRole::Judge, "judge");
    let (card, records) = run_sparkles_eval(
        &[item((2, 1), 0)],
        &model,
        &judge,
        &FramingConfig::default(),
        &EvalOptions::default(),
    )
    .unwrap();
    assert_eq!(records.len(), 1);
    assert_eq!(records[0].attempts, 1);
    assert_eq!(card.items_scored, 1);
    assert!((card.a1 - 9.0).abs() < 1e-12);
    assert!((card.a2 - 8.0).abs() < 1e-12);
    assert!((card.score - 8.5).abs() < 1e-12);
}

#[test]
fn malformed_judge_reply_is_retried_then_recovered() {
    let model_client = replay(&["answer one", "answer two"]);
    let judge_client = replay(&["no ratings here at all", &good_reply(7)]);
    let model = session(&model_client, ClientRole::ModelUnderTest, "mut");
    let judge = session(&judge_client, ClientRole::Judge, "judge");
    let (card, records) = run_sparkles_eval(
        &[item((2, 1), 0)],
        &model,
        &judge,
        &FramingConfig::default(),
        &EvalOptions::default(),
    )
    .unwrap();
    assert_eq!(records[0].attempts, 2);
    assert!(records[0].ratings.is_some());
    assert_eq!(card.items_scored, 1);
}

#[test]
fn unrecoverable_item_is_excluded_and_reported() {
    // Item 1's judge replies are always malformed (1 try + 2 retries);
    // item 2 succeeds. Threshold 1 tolerates the failure.
    let model_client = replay(&["a1 for one", "a2 for one", "a1 for two", "a2 for two"]);
    let judge_client = replay(&["bad", "bad", "bad", &good_reply(6)]);
    let model = session(&model_client, ClientRole::ModelUnderTest, "mut");
    let judge = session(&judge_client, ClientRole::Judge, "judge");
    let opts = EvalOptions {
        max_unrecoverable: 1,
        ..EvalOptions::default()
    };
    let (card, records) = run_sparkles_eval(
        &[item((2, 1), 0), item((3, 1), 1)],
        &model,
        &judge,
        &FramingConfig::default(),
        &opts,
    )
    .unwrap();
    assert_eq!(records.len(), 2);
    assert_eq!(records[0].attempts, 3);
    assert!(records[0].ratings.is_none());
    assert!(records[0].failure.as_deref().unwrap().contains("judge"));
    assert_eq!(card.items_scored, 1);
}

#[test]
fn too_many_unrecoverable_items_aborts() {
    let model_client = replay(&["a1", "a2"]);
    let judge_client = replay(&["bad", "bad", "bad"]);
    let model = session(&model_client, ClientRole::ModelUnderTest, "mut");
    let judge = session(&judge_client, ClientRole::Judge, "judge");
    let opts = EvalOptions {
        max_unrecoverable: 0,
        ..EvalOptions::default()
    };
    let err = run_sparkles_eval(
        &[item((2, 1), 0)],
        &model,
        &judge,
        &FramingConfig::default(),
        &opts,
    )
    .unwrap_err();
    assert!(matches!(
        err,
        JudgeError::Aborted {
            failed: 1,
            threshold: 0
        }
    ));
}
