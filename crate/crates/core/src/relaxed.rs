//! Tolerant JSON reader for model-emitted dialogue arrays.
//!
//! The generation prompts show the expected format with Python-style
//! single-quoted strings, and models frequently reply in kind. This module
//! accepts strict JSON first and falls back to rewriting the Python-literal
//! dialect (single-quoted strings, `True`/`False`/`None`) into strict JSON.

use crate::error::ParseError;

/// Parses `text` as JSON, accepting the single-quoted Python-literal dialect
/// as a fallback.
pub fn parse_relaxed_json(text: &str) -> Result<serde_json::Value, ParseError> {
    if let Ok(v) = serde_json::from_str(text) {
        return Ok(v);
    }
    let rewritten = rewrite_python_literals(text)?;
    serde_json::from_str(&rewritten).map_err(|e| ParseError::Syntax(e.to_string()))
}

/// Rewrites single-quoted strings and Python keywords to strict JSON,
/// leaving double-quoted strings and structure untouched.
fn rewrite_python_literals(text: &str) -> Result<String, ParseError> {
    let mut out = String::with_capacity(text.len() + 16);
    let mut chars = text.chars().peekable();

    while let Some(c) = chars.next() {
        match c {
            '\'' | '"' => {
                let quote = c;
                out.push('"');
                loop {
                    let Some(c) = chars.next() else {
                        return Err(ParseError::Syntax(format!(
                            "unterminated {quote}-quoted string"
                        )));
                    };
                    match c {
                        '\\' => {
                            let Some(esc) = chars.next() else {
                                return Err(ParseError::Syntax(
                                    "dangling escape at end of input".into(),
                                ));
                            };
                            match esc {
                                // \' is a Python escape; JSON wants a bare apostrophe.
                                '\'' => out.push('\''),
                                '"' => out.push_str("\\\""),
                                '\\' | '/' | 'b' | 'f' | 'n' | 'r' | 't' | 'u' => {
                                    out.push('\\');
                                    out.push(esc);
                                }
                                other => {
                                    // Unknown escape: keep the character literally.
                                    out.push(other);
                                }
                            }
                        }
                        c if c == quote => break,
                        // A raw double quote inside a single-quoted string must
                        // be escaped in the JSON output.
                        '"' => out.push_str("\\\""),
                        '\n' => out.push_str("\\n"),
                        '\r' => out.push_str("\\r"),
                        '\t' => out.push_str("\\t"),
                        c => out.push(c),
                    }
                }
                out.push('"');
            }
            c if c.is_alphabetic() => {
                let mut word = String::new();
                word.push(c);
                while let Some(&n) = chars.peek() {
                    if n.is_alphanumeric() || n == '_' {
                        word.push(n);
                        chars.next();
                    } else {
                        break;
                    }
                }
                match word.as_str() {
                    "True" => out.push_str("true"),
                    "False" => out.push_str("false"),
                    "None" => out.push_str("null"),
                    other => out.push_str(other),
                }
            }
            c => out.push(c),
        }
    }
    Ok(out)
}
