//! Parsing and canonical serialization of dialogue arrays.
//!
//! The wire form is a JSON array of dialogues, each dialogue an array of
//! message objects with the keys `role`, `image_ids`, `content`. The
//! canonical serialized form always quotes image IDs as strings and orders
//! keys as `role`, `image_ids`, `content`.

use serde_json::Value;

use crate::dialogue::{image_id_from_value, Dialogue, Message, Role};
use crate::error::ParseError;
use crate::relaxed::parse_relaxed_json;

/// Parses a JSON array of dialogues (array of message-object arrays).
///
/// Accepts strict JSON and the single-quoted dialect; image IDs may be
/// numbers or strings and are normalized to strings. Dialogue IDs are left
/// empty — the pipeline assigns them.
pub fn parse_dialogues(json_text: &str) -> Result<Vec<Dialogue>, ParseError> {
    let value = parse_relaxed_json(json_text)?;
    let outer = value
        .as_array()
        .ok_or_else(|| ParseError::Schema("top level must be an array of dialogues".into()))?;

    let mut dialogues = Vec::with_capacity(outer.len());
    for (d_idx, inner) in outer.iter().enumerate() {
        let msgs = inner.as_array().ok_or_else(|| {
            ParseError::Schema(format!("dialogue[{d_idx}] must be an array of messages"))
        })?;
        let mut messages = Vec::with_capacity(msgs.len());
        for (m_idx, msg) in msgs.iter().enumerate() {
            messages.push(parse_message(msg, d_idx, m_idx)?);
        }
        if messages.first().map(|m| m.role) == Some(Role::Assistant) {
            return Err(ParseError::Schema(format!(
                "dialogue[{d_idx}] starts with an assistant message"
            )));
        }
        dialogues.push(Dialogue::new(String::new(), messages));
    }
    Ok(dialogues)
}

fn parse_message(msg: &Value, d_idx: usize, m_idx: usize) -> Result<Message, ParseError> {
    let at = format!("dialogue[{d_idx}].messages[{m_idx}]");
    let obj = msg
        .as_object()
        .ok_or_else(|| ParseError::Schema(format!("{at} must be an object")))?;

    let role = match obj.get("role").and_then(Value::as_str) {
        Some("user") => Role::User,
        Some("assistant") => Role::Assistant,
        Some(other) => {
            return Err(ParseError::Schema(format!(
                "{at} has unknown role {other:?}"
            )))
        }
        None => return Err(ParseError::Schema(format!("{at} is missing \"role\""))),
    };

    let content = obj
        .get("content")
        .and_then(Value::as_str)
        .ok_or_else(|| ParseError::Schema(format!("{at} is missing string \"content\"")))?
        .to_owned();

    let image_ids = match (role, obj.get("image_ids")) {
        (Role::Assistant, Some(_)) => {
            return Err(ParseError::Schema(format!(
                "{at} is an assistant message but carries \"image_ids\""
            )))
        }
        (Role::Assistant, None) => None,
        (Role::User, Some(Value::Array(ids))) => {
            let mut parsed = Vec::with_capacity(ids.len());
            for id in ids {
                parsed.push(
                    image_id_from_value(id)
                        .map_err(|e| ParseError::Schema(format!("{at}: {e}")))?,
                );
            }
            Some(parsed)
        }
        (Role::User, Some(other)) => {
            return Err(ParseError::Schema(format!(
                "{at}: \"image_ids\" must be an array, got {other}"
            )))
        }
        (Role::User, None) => {
            return Err(ParseError::Schema(format!(
                "{at} is a user message but is missing \"image_ids\""
            )))
        }
    };

    Ok(Message {
        role,
        image_ids,
        content,
    })
}

/// Serializes dialogues back to the canonical array-of-arrays form.
///
/// Inverse of [`parse_dialogues`] up to ID quoting: image IDs always come
/// out as strings, and key order is fixed by the [`Message`] field order.
pub fn serialize_dialogues(dialogues: &[Dialogue]) -> String {
    let arrays: Vec<&Vec<Message>> = dialogues.iter().map(|d| &d.messages).collect();
    serde_json::to_string(&arrays).expect("dialogues serialize to JSON")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dialogue::ImageId;
    use proptest::prelude::*;

    fn id(s: &str) -> ImageId {
        ImageId::new(s).unwrap()
    }

    #[test]
    fn empty_array_parses_to_no_dialogues() {
        assert!(parse_dialogues("[]").unwrap().is_empty());
    }

    #[test]
    fn parses_numeric_and_string_image_ids() {
        let text = r#"[[
            {"role": "user", "image_ids": [2331159, "2330601"], "content": "IMAGE#2331159 IMAGE#2330601"},
            {"role": "assistant", "content": "ok"}
        ]]"#;
        let ds = parse_dialogues(text).unwrap();
        assert_eq!(ds.len(), 1);
        assert_eq!(
            ds[0].messages[0].image_ids.as_deref().unwrap(),
            &[id("2331159"), id("2330601")]
        );
    }

    #[test]
    fn assistant_first_is_schema_error() {
        let err = parse_dialogues(r#"[[{"role":"assistant","content":"x"}]]"#).unwrap_err();
        assert!(matches!(err, ParseError::Schema(_)), "got {err:?}");
    }

    #[test]
    fn assistant_with_image_ids_is_schema_error() {
        let text = r#"[[
            {"role": "user", "image_ids": [], "content": "q"},
            {"role": "assistant", "image_ids": [1], "content": "a"}
        ]]"#;
        assert!(matches!(
            parse_dialogues(text).unwrap_err(),
            ParseError::Schema(_)
        ));
    }

    #[test]
    fn user_without_image_ids_is_schema_error() {
        let text = r#"[[{"role": "user", "content": "q"}]]"#;
        assert!(matches!(
            parse_dialogues(text).unwrap_err(),
            ParseError::Schema(_)
        ));
    }

    #[test]
    fn prose_is_syntax_error() {
        assert!(matches!(
            parse_dialogues("hello there").unwrap_err(),
            ParseError::Syntax(_)
        ));
    }

    #[test]
    fn single_quoted_model_output_parses() {
        let text = "[[{'role': 'user', 'image_ids': [7], 'content': 'see IMAGE#7'}, {'role': 'assistant', 'content': 'it\\'s nice'}]]";
        let ds = parse_dialogues(text).unwrap();
        assert_eq!(ds[0].messages[1].content, "it's nice");
    }

    prop_compose! {
        fn arb_content()(s in "[ -~]{0,60}") -> String { s }
    }

    prop_compose! {
        fn arb_turn()(ids in prop::collection::vec(0u32..100_000, 0..4),
                      q in arb_content(),
                      a in arb_content()) -> (Message, Message) {
            let ids: Vec<ImageId> = ids.iter().map(|n| ImageId::new(n.to_string()).unwrap()).collect();
            (Message::user(ids, q), Message::assistant(a))
        }
    }

    proptest! {
        // Round-trip: parse(serialize(d)) recovers d, and re-serializing is
        // byte-identical (canonical key ordering).
        #[test]
        fn serialize_parse_round_trip(turns in prop::collection::vec(arb_turn(), 1..4)) {
            let mut messages = Vec::new();
            for (q, a) in turns {
                messages.push(q);
                messages.push(a);
            }
            let d = Dialogue::new(String::new(), messages);
            let text = serialize_dialogues(std::slice::from_ref(&d));
            let parsed = parse_dialogues(&text).unwrap();
            prop_assert_eq!(&parsed, &vec![d]);
            prop_assert_eq!(serialize_dialogues(&parsed), text);
        }
    }
}
