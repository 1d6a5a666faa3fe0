//! `stats` — corpus statistics, reports, and uniqueness curation.

use std::path::Path;

use sparkles_analytics::{
    corpus_stats, curate_unique, render_pairs_csv, render_top_pairs_svg, top_pairs_report,
    HeuristicParser, StatsFragment,
};
use sparkles_core::{read_dialogues_jsonl, write_dialogues_jsonl};

use crate::manifest::RunManifest;
use crate::{CliError, Runtime};

fn fragment_json(fragment: &StatsFragment) -> serde_json::Value {
    serde_json::json!({
        "messages": fragment.messages,
        "total_words": fragment.total_words,
        "mean_words": fragment.mean(),
        "histogram": fragment
            .histogram
            .iter()
            .map(|(words, count)| serde_json::json!([words, count]))
            .collect::<Vec<_>>(),
    })
}

pub fn run(
    runtime: &Runtime,
    input: &Path,
    report_dir: &Path,
    curate: Option<&Path>,
) -> Result<(), CliError> {
    let dialogues =
        read_dialogues_jsonl(input).map_err(|e| CliError::config(format!("input: {e}")))?;
    std::fs::create_dir_all(report_dir)?;

    let parser = HeuristicParser;
    let stats = corpus_stats(&dialogues, &parser);
    let top = top_pairs_report(&stats.pairs, 20, 4);

    let grouped: Vec<serde_json::Value> = stats
        .grouped_pairs
        .iter()
        .map(|((turn, images), table)| {
            serde_json::json!({
                "turn": turn,
                "images": images,
                "top_pairs": top_pairs_report(table, 20, 4).verbs,
            })
        })
        .collect();
    let report = serde_json::json!({
        "dialogues": dialogues.len(),
        "user": fragment_json(&stats.user),
        "assistant": fragment_json(&stats.assistant),
        "verb_noun_extraction_failures": stats.extraction_failures,
        "top_pairs": top.verbs,
        "by_turn_and_image_count": grouped,
    });

    let stats_path = report_dir.join("stats.json");
    std::fs::write(
        &stats_path,
        serde_json::to_string_pretty(&report).expect("stats report") + "\n",
    )?;
    std::fs::write(report_dir.join("pairs.csv"), render_pairs_csv(&top))?;
    std::fs::write(report_dir.join("top_pairs.svg"), render_top_pairs_svg(&top))?;

    if let Some(curate_out) = curate {
        let outcome = curate_unique(&dialogues, &parser);
        write_dialogues_jsonl(curate_out, &outcome.kept)?;
        eprintln!(
            "curated {} unique-key dialogues ({} duplicates, {} extraction failures)",
            outcome.kept.len(),
            outcome.duplicates_removed,
            outcome.extraction_failures
        );
    }

    RunManifest::new(
        "stats",
        &runtime.argv,
        &runtime.config,
        runtime.seed,
        runtime.mock_fixture.as_deref(),
        &[&stats_path],
    )
    .write_next_to(&stats_path)?;

    eprintln!(
        "stats over {} dialogues: user mean {:?}, assistant mean {:?}",
        dialogues.len(),
        stats.user.mean(),
        stats.assistant.mean()
    );
    Ok(())
}
