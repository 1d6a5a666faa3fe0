//! Top verb–noun pair reports: JSON-friendly structs, CSV, and a small SVG
//! bar chart.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::parser::VerbNounKey;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerbEntry {
    pub verb: String,
    pub count: usize,
    /// Top direct noun objects with their counts.
    pub nouns: Vec<(String, usize)>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TopPairsReport {
    pub verbs: Vec<VerbEntry>,
}

/// Top `k_verbs` verbs by frequency, each with its top `k_nouns` noun
/// objects. Ties break lexicographically, so the report is stable under
/// input permutation.
pub fn top_pairs_report(
    pairs: &BTreeMap<VerbNounKey, usize>,
    k_verbs: usize,
    k_nouns: usize,
) -> TopPairsReport {
    let mut verb_counts: BTreeMap<&str, usize> = BTreeMap::new();
    for (key, n) in pairs {
        *verb_counts.entry(key.verb.as_str()).or_insert(0) += n;
    }
    let mut verbs: Vec<(&str, usize)> = verb_counts.into_iter().collect();
    verbs.sort_by(|a, b| b.1.cmp(&a.1).then(a.0.cmp(b.0)));
    verbs.truncate(k_verbs);

    let entries = verbs
        .into_iter()
        .map(|(verb, count)| {
            let mut nouns: Vec<(String, usize)> = pairs
                .iter()
                .filter(|(k, _)| k.verb == verb)
                .filter_map(|(k, &n)| k.noun.clone().map(|noun| (noun, n)))
                .collect();
            nouns.sort_by(|a, b| b.1.cmp(&a.1).then(a.0.cmp(&b.0)));
            nouns.truncate(k_nouns);
            VerbEntry {
                verb: verb.to_string(),
                count,
                nouns,
            }
        })
        .collect();
    TopPairsReport { verbs: entries }
}

/// CSV rendering: one row per (verb, noun), plus a bare row for verbs with
/// no recorded noun objects.
pub fn render_pairs_csv(report: &TopPairsReport) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["verb", "verb_count", "noun", "noun_count"])
        .expect("csv header");
    for entry in &report.verbs {
        if entry.nouns.is_empty() {
            w.write_record([entry.verb.as_str(), &entry.count.to_string(), "", ""])
                .expect("csv row");
        }
        for (noun, count) in &entry.nouns {
            w.write_record([
                entry.verb.as_str(),
                &entry.count.to_string(),
                noun.as_str(),
                &count.to_string(),
            ])
            .expect("csv row");
        }
    }
    String::from_utf8(w.into_inner().expect("csv buffer")).expect("csv is utf-8")
}

/// Minimal deterministic SVG horizontal bar chart of the verb frequencies.
pub fn render_top_pairs_svg(report: &TopPairsReport) -> String {
    const BAR_HEIGHT: usize = 18;
    const GAP: usize = 6;
    const LABEL_WIDTH: usize = 120;
    const CHART_WIDTH: usize = 360;
    let max = report.verbs.iter().map(|v| v.count).max().unwrap_or(1);
    let height = report.verbs.len() * (BAR_HEIGHT + GAP) + GAP;
    let width = LABEL_WIDTH + CHART_WIDTH + 60;

    let mut svg = format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{width}\" height=\"{height}\" \
         font-family=\"sans-serif\" font-size=\"12\">\n"
    );
    for (i, entry) in report.verbs.iter().enumerate() {
        let y = GAP + i * (BAR_HEIGHT + GAP);
        let bar = entry.count * CHART_WIDTH / max.max(1);
        let text_y = y + BAR_HEIGHT - 4;
        svg.push_str(&format!(
            "  <text x=\"{x}\" y=\"{text_y}\" text-anchor=\"end\">{verb}</text>\n",
            x = LABEL_WIDTH - 6,
            verb = entry.verb,
        ));
        svg.push_str(&format!(
            "  <rect x=\"{LABEL_WIDTH}\" y=\"{y}\" width=\"{bar}\" height=\"{BAR_HEIGHT}\" fill=\"#4878a8\"/>\n"
        ));
        svg.push_str(&format!(
            "  <text x=\"{x}\" y=\"{text_y}\">{count}</text>\n",
            x = LABEL_WIDTH + bar + 6,
            count = entry.count,
        ));
    }
    svg.push_str("</svg>\n");
    svg
}

#[cfg(test)]
mod tests {
    use super::*;

    fn key(verb: &str, noun: &str) -> VerbNounKey {
        VerbNounKey::new(verb, Some(noun.to_string()))
    }

    fn table(entries: &[(&str, &str, usize)]) -> BTreeMap<VerbNounKey, usize> {
        entries
            .iter()
            .map(|(v, n, c)| (key(v, n), *c))
            .collect()
    }

    #[test]
    fn verbs_rank_by_total_frequency() {
        let pairs = table(&[("create", "story", 3), ("create", "song", 1), ("compare", "image", 2)]);
        let report = top_pairs_report(&pairs, 2, 4);
        let verbs: Vec<&str> = report.verbs.iter().map(|v| v.verb.as_str()).collect();
        assert_eq!(verbs, vec!["create", "compare"]);
        assert_eq!(report.verbs[0].count, 4);
        assert_eq!(
            report.verbs[0].nouns,
            vec![("story".to_string(), 3), ("song".to_string(), 1)]
        );
    }

    #[test]
    fn ties_break_lexicographically() {
        let pairs = table(&[("weave", "tale", 2), ("blend", "scene", 2), ("craft", "poem", 2)]);
        let report = top_pairs_report(&pairs, 2, 4);
        let verbs: Vec<&str> = report.verbs.iter().map(|v| v.verb.as_str()).collect();
        assert_eq!(verbs, vec!["blend", "craft"]);
    }

    #[test]
    fn fewer_verbs_than_k_returns_all() {
        let pairs = table(&[("create", "story", 1)]);
        assert_eq!(top_pairs_report(&pairs, 20, 4).verbs.len(), 1);
    }

    #[test]
    fn csv_lists_verb_noun_rows() {
        let pairs = table(&[("create", "story", 3), ("create", "song", 1)]);
        let csv = render_pairs_csv(&top_pairs_report(&pairs, 20, 4));
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines[0], "verb,verb_count,noun,noun_count");
        assert_eq!(lines[1], "create,4,story,3");
        assert_eq!(lines[2], "create,4,song,1");
    }

    #[test]
    fn svg_is_deterministic_and_well_formed() {
        let pairs = table(&[("create", "story", 3), ("compare", "image", 2)]);
        let report = top_pairs_report(&pairs, 20, 4);
        let a = render_top_pairs_svg(&report);
        let b = render_top_pairs_svg(&report);
        assert_eq!(a, b);
        assert!(a.starts_with("<svg"));
        assert!(a.ends_with("</svg>\n"));
        assert_eq!(a.matches("<rect").count(), 2);
    }
}
