//! Sentence segmentation tuned for the user-question register: split on
//! `.?!` runs followed by whitespace or end of text, ignoring terminators
//! inside double-quoted spans.

/// Splits `text` into trimmed, non-empty sentences.
pub fn split_sentences(text: &str) -> Vec<&str> {
    let bytes = text.as_bytes();
    let mut sentences = Vec::new();
    let mut start = 0usize;
    let mut in_quotes = false;
    let mut i = 0usize;
    while i < bytes.len() {
        match bytes[i] {
            b'"' => in_quotes = !in_quotes,
            b'.' | b'?' | b'!' if !in_quotes => {
                let mut end = i + 1;
                while end < bytes.len() && matches!(bytes[end], b'.' | b'?' | b'!') {
                    end += 1;
                }
                if end >= bytes.len() || bytes[end].is_ascii_whitespace() {
                    let sentence = text[start..end].trim();
                    if !sentence.is_empty() {
                        sentences.push(sentence);
                    }
                    start = end;
                    i = end;
                    continue;
                }
            }
            _ => {}
        }
        i += 1;
    }
    let rest = text[start..].trim();
    if !rest.is_empty() {
        sentences.push(rest);
    }
    sentences
}
