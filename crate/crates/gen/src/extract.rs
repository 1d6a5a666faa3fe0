//! Extraction of the JSON payload from a model reply.

use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ExtractError {
    #[error("no JSON payload found in model output")]
    NoJsonFound,
}

/// Returns the contents of the first ```json fenced block; when no fence is
/// present, falls back to the longest bracket-balanced array starting at the
/// first `[` (string-aware, so brackets inside quoted content don't count).
pub fn extract_json_block(llm_output: &str) -> Result<String, ExtractError> {
    if let Some(fence_start) = llm_output.find("```json") {
        let after = &llm_output[fence_start + "```json".len()..];
        let body = match after.find("```") {
            Some(end) => &after[..end],
            None => after,
        };
        let trimmed = body.trim();
        if !trimmed.is_empty() {
            return Ok(trimmed.to_string());
        }
        return Err(ExtractError::NoJsonFound);
    }
    balanced_array(llm_output).ok_or(ExtractError::NoJsonFound)
}

/// Scans from the first `[` and returns the span that closes it, tracking
/// quote state (both quote styles, backslash escapes).
fn balanced_array(text: &str) -> Option<String> {
    let start = text.find('[')?;
    let bytes = text.as_bytes();
    let mut depth = 0usize;
    let mut in_string: Option<u8> = None;
    let mut escaped = false;
    for (offset, &b) in bytes[start..].iter().enumerate() {
        if let Some(quote) = in_string {
            if escaped {
                escaped = false;
            } else if b == b'\\' {
                escaped = true;
            } else if b == quote {
                in_string = None;
            }
            continue;
        }
        match b {
            b'\'' | b'"' => in_string = Some(b),
            b'[' => depth += 1,
            b']' => {
                depth -= 1;
                if depth == 0 {
                    return Some(text[start..=start + offset].to_string());
                }
            }
            _ => {}
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fenced_block_is_stripped() {
        assert_eq!(
            extract_json_block("```json\n[[1, 2]]\n```").unwrap(),
            "[[1, 2]]"
        );
    }

    #[test]
    fn prose_around_fence_is_ignored() {
        let out = "Here you go:\n```json\n[[{\"a\": 1}]]\n```\nHope that helps!";
        assert_eq!(extract_json_block(out).unwrap(), "[[{\"a\": 1}]]");
    }

    #[test]
    fn unfenced_array_is_found_by_balancing() {
        let out = "Sure thing: [[{'content': 'nested [brackets] inside'}]] done";
        assert_eq!(
            extract_json_block(out).unwrap(),
            "[[{'content': 'nested [brackets] inside'}]]"
        );
    }

    #[test]
    fn brackets_inside_strings_do_not_close_the_array() {
        let out = r#"[["a ] tricky \" one"]]"#;
        assert_eq!(extract_json_block(out).unwrap(), out);
    }

    #[test]
    fn prose_without_brackets_is_no_json() {
        assert_eq!(
            extract_json_block("I could not produce a dialogue, sorry."),
            Err(ExtractError::NoJsonFound)
        );
    }

    #[test]
    fn unbalanced_array_is_no_json() {
        assert_eq!(
            extract_json_block("starts [ but never closes"),
            Err(ExtractError::NoJsonFound)
        );
    }

    #[test]
    fn unterminated_fence_takes_the_rest() {
        assert_eq!(extract_json_block("```json\n[1, 2]").unwrap(), "[1, 2]");
    }

    #[test]
    fn empty_fence_is_no_json() {
        assert_eq!(
            extract_json_block("```json\n\n```"),
            Err(ExtractError::NoJsonFound)
        );
    }
}
