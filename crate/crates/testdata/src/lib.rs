//! Fixture data shared by tests across the workspace.
//!
//! The dialogue and caption material here mirrors the published sample
//! material for the two generation modes: a two-image demonstration
//! dialogue with four candidate captions (single-dialogue mode) and three
//! demonstration dialogues with nine candidate captions (multi-dialogue
//! mode), plus the raw model replies for both, kept in the single-quoted
//! form the model actually emits.

/// Demonstration pool for single-dialogue generation (JSON Lines, 1 dialogue).
pub const VG_DEMO_DIALOGUES_JSONL: &str = include_str!("../data/vg_demo_dialogues.jsonl");

/// Candidate image descriptions for single-dialogue generation (4 entries).
pub const VG_CANDIDATES_JSON: &str = include_str!("../data/vg_candidates.json");

/// Raw model reply for single-dialogue generation: one fenced two-turn
/// dialogue selecting images 2331159+2330601 then 2408549.
pub const VG_SAMPLE_RESPONSE: &str = include_str!("../data/vg_sample_response.txt");

/// Demonstration pool for multi-dialogue generation (JSON Lines, 3 dialogues
/// whose first turns select 1, 2, and 3 images).
pub const CC_DEMO_DIALOGUES_JSONL: &str = include_str!("../data/cc_demo_dialogues.jsonl");

/// Candidate image descriptions for multi-dialogue generation (9 entries).
pub const CC_CANDIDATES_JSON: &str = include_str!("../data/cc_candidates.json");

/// Raw model reply for multi-dialogue generation: three fenced dialogues
/// with first-turn image counts 1, 2, 3.
pub const CC_SAMPLE_RESPONSE: &str = include_str!("../data/cc_sample_response.txt");

/// Writes `content` to `dir/name` and returns the path.
pub fn write_file(dir: &std::path::Path, name: &str, content: &str) -> std::path::PathBuf {
    let path = dir.join(name);
    std::fs::write(&path, content).expect("write fixture file");
    path
}

/// A chat-completions response body wrapping `content`, as a mock endpoint
/// would return it.
pub fn chat_body(content: &str) -> String {
    // Hand-rolled JSON escape to keep this crate dependency-free.
    let mut escaped = String::with_capacity(content.len() + 16);
    for c in content.chars() {
        match c {
            '"' => escaped.push_str("\\\""),
            '\\' => escaped.push_str("\\\\"),
            '\n' => escaped.push_str("\\n"),
            '\r' => escaped.push_str("\\r"),
            '\t' => escaped.push_str("\\t"),
            c if (c as u32) < 0x20 => escaped.push_str(&format!("\\u{:04x}", c as u32)),
            c => escaped.push(c),
        }
    }
    format!(
        r#"{{"choices":[{{"message":{{"content":"{escaped}"}},"finish_reason":"stop"}}],"usage":{{"prompt_tokens":0,"completion_tokens":0}}}}"#
    )
}

/// A wildcard fixture line (JSON Lines entry) answering any request with
/// `content` via a 200 chat completion.
pub fn wildcard_fixture_line(content: &str) -> String {
    let body = chat_body(content);
    let mut escaped = String::with_capacity(body.len() + 16);
    for c in body.chars() {
        match c {
            '"' => escaped.push_str("\\\""),
            '\\' => escaped.push_str("\\\\"),
            c => escaped.push(c),
        }
    }
    format!(r#"{{"request_hash":"*","response_body":"{escaped}","status":200}}"#)
}
