//! Per-dataset turn specifications.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

/// Structural spec of one dataset: how many turns a dialogue has, which
/// image counts each turn's user message may carry, and how many dialogues a
/// single generation request produces.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DatasetSpec {
    pub name: String,
    /// Allowed image counts per turn, e.g. `[{2,3}, {1}]`.
    pub turns: Vec<BTreeSet<usize>>,
    pub dialogues_per_request: usize,
}

impl DatasetSpec {
    pub fn new(
        name: impl Into<String>,
        turns: Vec<BTreeSet<usize>>,
        dialogues_per_request: usize,
    ) -> Self {
        let spec = DatasetSpec {
            name: name.into(),
            turns,
            dialogues_per_request,
        };
        debug_assert!(spec.is_well_formed(), "malformed dataset spec");
        spec
    }

    /// Every turn has a non-empty allowed-count set and all counts are >= 1.
    pub fn is_well_formed(&self) -> bool {
        !self.turns.is_empty()
            && self
                .turns
                .iter()
                .all(|set| !set.is_empty() && set.iter().all(|&c| c >= 1))
    }

    pub fn turn_count(&self) -> usize {
        self.turns.len()
    }

    fn counts(name: &str, turns: &[&[usize]], per_request: usize) -> DatasetSpec {
        DatasetSpec::new(
            name,
            turns
                .iter()
                .map(|cs| cs.iter().copied().collect())
                .collect(),
            per_request,
        )
    }
}

/// The built-in dataset specs.
///
/// Nine rows cover the published dataset statistics: three CC rows (first
/// turn selects 1, 2, or 3 images), the two VG rows plus the combined VG
/// generation spec (first turn selects 2 or 3), and the three benchmark
/// classes. All have a single image in the second turn except the (2,2)
/// benchmark class.
pub struct SpecCatalog;

impl SpecCatalog {
    /// All nine dataset rows, in a fixed order.
    pub fn table_rows() -> Vec<DatasetSpec> {
        vec![
            DatasetSpec::counts("cc-1-1", &[&[1], &[1]], 3),
            DatasetSpec::counts("cc-2-1", &[&[2], &[1]], 3),
            DatasetSpec::counts("cc-3-1", &[&[3], &[1]], 3),
            DatasetSpec::counts("vg-2-1", &[&[2], &[1]], 1),
            DatasetSpec::counts("vg-3-1", &[&[3], &[1]], 1),
            DatasetSpec::counts("vg", &[&[2, 3], &[1]], 1),
            DatasetSpec::counts("eval-2-1", &[&[2], &[1]], 1),
            DatasetSpec::counts("eval-2-2", &[&[2], &[2]], 1),
            DatasetSpec::counts("eval-3-1", &[&[3], &[1]], 1),
        ]
    }

    /// Umbrella spec accepting any CC dialogue regardless of first-turn
    /// branch. Generation validates each dialogue against its positional
    /// branch; this one exists for `validate --spec cc` on mixed files.
    pub fn cc_umbrella() -> DatasetSpec {
        DatasetSpec::counts("cc", &[&[1, 2, 3], &[1]], 3)
    }

    /// Looks up a spec by name, including the `cc` umbrella.
    pub fn by_name(name: &str) -> Option<DatasetSpec> {
        if name == "cc" {
            return Some(Self::cc_umbrella());
        }
        Self::table_rows().into_iter().find(|s| s.name == name)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn catalog_has_nine_rows_all_well_formed() {
        let rows = SpecCatalog::table_rows();
        assert_eq!(rows.len(), 9);
        for spec in &rows {
            assert!(spec.is_well_formed(), "{} malformed", spec.name);
            assert_eq!(spec.turn_count(), 2);
        }
    }

    #[test]
    fn lookup_by_name() {
        let vg = SpecCatalog::by_name("vg").unwrap();
        assert_eq!(vg.turns[0], [2, 3].into_iter().collect());
        assert_eq!(vg.turns[1], [1].into_iter().collect());
        assert_eq!(vg.dialogues_per_request, 1);

        let cc = SpecCatalog::by_name("cc").unwrap();
        assert_eq!(cc.turns[0], [1, 2, 3].into_iter().collect());
        assert_eq!(cc.dialogues_per_request, 3);

        assert!(SpecCatalog::by_name("nope").is_none());
    }
}
