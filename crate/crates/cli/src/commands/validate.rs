//! `validate` — structural validation of a dialogue file.

use std::path::Path;

use sparkles_core::{read_dialogues_jsonl, validate_dialogue, SpecCatalog};

use crate::{CliError, Runtime};

pub fn run(_runtime: &Runtime, input: &Path, spec_name: &str) -> Result<(), CliError> {
    let spec = SpecCatalog::by_name(spec_name).ok_or_else(|| {
        CliError::config(format!(
            "unknown spec {spec_name:?}; known: cc, vg, cc-1-1, cc-2-1, cc-3-1, vg-2-1, vg-3-1, eval-2-1, eval-2-2, eval-3-1"
        ))
    })?;
    let dialogues =
        read_dialogues_jsonl(input).map_err(|e| CliError::config(format!("input: {e}")))?;

    let mut invalid = 0usize;
    for dialogue in &dialogues {
        let report = validate_dialogue(dialogue, &spec);
        let line = serde_json::json!({
            "dialogue_id": dialogue.dialogue_id,
            "verdict": report.verdict,
            "violations": report.violations,
            "warnings": report.warnings.len(),
        });
        println!("{line}");
        if !report.is_valid() {
            invalid += 1;
        }
    }
    eprintln!(
        "validated {} dialogues against {}: {} invalid",
        dialogues.len(),
        spec.name,
        invalid
    );
    if invalid > 0 {
        return Err(CliError::validation(format!(
            "{invalid} of {} dialogues failed validation",
            dialogues.len()
        )));
    }
    Ok(())
}
