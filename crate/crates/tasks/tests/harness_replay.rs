//! Task-harness runs against scripted model replies.

use std::sync::Arc;

use sparkles_client::{
    default_generation_config, ChatClient, ClientRole, Endpoint, FixtureEntry, ReplayTransport,
    RetryPolicy,
};
use sparkles_tasks::{run_task_eval, Answer, MediaRef, ModelSession, Task, TaskExample};
use sparkles_train::FramingConfig;

fn example(tag: usize, gold: Answer) -> TaskExample {
    TaskExample::new(
        Task::Bison,
        format!("e{tag}"),
        (
            MediaRef::with_id(format!("{}", 2 * tag), format!("{}.jpg", 2 * tag)),
            MediaRef::with_id(format!("{}", 2 * tag + 1), format!("{}.jpg", 2 * tag + 1)),
        ),
        format!("caption {tag}"),
        gold,
    )
    .unwrap()
}

fn answer_text(answer: &str) -> String {
    format!("Let's think step by step. The caption matches. Therefore, the answer (IMAGE#1 or IMAGE#2) is {answer}.")
}

fn session(client: &ChatClient) -> ModelSession<'_> {
    ModelSession {
        client,
        endpoint: Endpoint::new("mock://mut", "mut-model"),
        config: default_generation_config(ClientRole::ModelUnderTest),
    }
}

fn replay(contents: &[String]) -> ChatClient {
    let entries: Vec<FixtureEntry> = contents
        .iter()
        .map(|c| FixtureEntry::wildcard_chat(c))
        .collect();
    ChatClient::new(Arc::new(ReplayTransport::new(entries))).with_retry(RetryPolicy::immediate(2))
}

#[test]
fn accuracy_counts_correct_answers() {
    // 3 examples, gold all IMAGE#1; the mock answers 1, 2, 1 → 2/3.
    let examples: Vec<TaskExample> = (0..3).map(|t| example(t, Answer::Image1)).collect();
    let replies = vec![
        answer_text("IMAGE#1"),
        answer_text("IMAGE#2"),
        answer_text("IMAGE#1"),
    ];
    let client = replay(&replies);
    let summary = run_task_eval(&examples, &session(&client), &FramingConfig::default(), 3).unwrap();
    assert_eq!(summary.correct, 2);
    assert_eq!(summary.total, 3);
    assert_eq!(summary.accuracy_percent, 66.7);
    assert!(summary.results.iter().all(|r| r.attempts == 1));
}

#[test]
fn malformed_replies_trigger_exactly_max_regen_regenerations() {
    let examples = vec![example(0, Answer::Image1)];
    // Never conforms: 1 + max_regen calls, then scored incorrect.
    let replies: Vec<String> = (0..10).map(|_| "I refuse to follow formats.".to_string()).collect();
    let client = replay(&replies);
    let summary = run_task_eval(&examples, &session(&client), &FramingConfig::default(), 3).unwrap();
    let r = &summary.results[0];
    assert_eq!(r.attempts, 4);
    assert!(r.extracted.is_none());
    assert!(r.correct.is_none());
    assert_eq!(summary.correct, 0);
    assert_eq!(summary.accuracy, 0.0);
}

#[test]
fn recovery_on_regeneration_counts_the_answer() {
    let examples = vec![example(0, Answer::Image2)];
    let replies = vec![
        "no format".to_string(),
        answer_text("IMAGE#1 or IMAGE#2"), // ambiguous → regenerate
        answer_text("IMAGE#2"),
    ];
    let client = replay(&replies);
    let summary = run_task_eval(&examples, &session(&client), &FramingConfig::default(), 3).unwrap();
    let r = &summary.results[0];
    assert_eq!(r.attempts, 3);
    assert_eq!(r.extracted, Some(Answer::Image2));
    assert_eq!(r.correct, Some(true));
}

#[test]
fn transport_exhaustion_aborts_the_run() {
    let entries = vec![
        FixtureEntry::wildcard("be right back", 503),
        FixtureEntry::wildcard("be right back", 503),
    ];
    let client =
        ChatClient::new(Arc::new(ReplayTransport::new(entries))).with_retry(RetryPolicy::immediate(2));
    let examples = vec![example(0, Answer::Image1)];
    let err = run_task_eval(&examples, &session(&client), &FramingConfig::default(), 3).unwrap_err();
    assert!(matches!(
        err,
        sparkles_client::ClientError::Transport { attempts: 2, .. }
    ));
}

#[test]
fn accuracy_is_invariant_to_example_order() {
    let examples: Vec<TaskExample> = (0..6).map(|t| example(t, Answer::Image1)).collect();
    let replies: Vec<String> = (0..6)
        .map(|t| answer_text(if t % 2 == 0 { "IMAGE#1" } else { "IMAGE#2" }))
        .collect();

    let client = replay(&replies);
    let forward =
        run_task_eval(&examples, &session(&client), &FramingConfig::default(), 0).unwrap();

    let mut reversed_examples = examples.clone();
    reversed_examples.reverse();
    let mut reversed_replies = replies.clone();
    reversed_replies.reverse();
    let client = replay(&reversed_replies);
    let backward = run_task_eval(
        &reversed_examples,
        &session(&client),
        &FramingConfig::default(),
        0,
    )
    .unwrap();

    assert_eq!(forward.correct, backward.correct);
    assert_eq!(forward.accuracy, backward.accuracy);

    // Brute-force recount oracle.
    let recount = forward
        .results
        .iter()
        .filter(|r| r.correct == Some(true))
        .count();
    assert_eq!(forward.correct, recount);
}

#[test]
fn framed_request_keeps_both_image_slots() {
    // The request text must contain both slots after framing; a response
    // echo isn't available here, so assert via the prompt builder plus
    // framing round-trip.
    let ex = example(0, Answer::Image1);
    let prompt = sparkles_tasks::build_task_prompt(&ex);
    let cfg = FramingConfig::default();
    let framed = format!(
        "{}###{}{}###{}",
        cfg.system_message,
        cfg.user_prefix(),
        prompt,
        cfg.assistant_prefix()
    );
    assert_eq!(framed.matches("<ImageHere>").count(), 2);
    assert!(framed.ends_with("Assistant: "));
}
