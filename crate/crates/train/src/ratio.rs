//! Turn-ratio sampling.
//!
//! A ratio like `2:1` duplicates every first-turn sample twice and every
//! second-turn sample once in the output manifest, then shuffles the
//! manifest with a seeded RNG. Duplication by manifest repetition (rather
//! than probabilistic sampling) keeps runs reproducible.

use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::expand::TrainingSample;
use crate::TrainError;

/// Ordered list of sample indices into the expanded sample list.
pub type Manifest = Vec<usize>;

/// Per-turn sampling multiplicities; index 0 is turn 1.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TurnRatio {
    pub weights: Vec<u32>,
}

impl TurnRatio {
    pub fn new(weights: Vec<u32>) -> Result<Self, String> {
        if weights.iter().all(|&w| w == 0) {
            return Err("at least one turn weight must be positive".into());
        }
        Ok(TurnRatio { weights })
    }
}

impl FromStr for TurnRatio {
    type Err = String;

    /// Parses `"2:1"`, `"1:0"`, `"1"`, ...
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let weights = s
            .split(':')
            .map(|part| {
                part.trim()
                    .parse::<u32>()
                    .map_err(|_| format!("bad turn weight {part:?} in ratio {s:?}"))
            })
            .collect::<Result<Vec<u32>, _>>()?;
        TurnRatio::new(weights)
    }
}

impl std::fmt::Display for TurnRatio {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let parts: Vec<String> = self.weights.iter().map(u32::to_string).collect();
        f.write_str(&parts.join(":"))
    }
}

/// Builds the sampling manifest: sample `i` of turn `t` appears
/// `ratio.weights[t-1]` times; order is shuffled deterministically by seed.
pub fn sample_with_turn_ratio(
    samples: &[TrainingSample],
    ratio: &TurnRatio,
    seed: u64,
) -> Result<Manifest, TrainError> {
    let mut manifest = Vec::new();
    for (i, sample) in samples.iter().enumerate() {
        let Some(&weight) = ratio.weights.get(sample.turn_index - 1) else {
            return Err(TrainError::MissingTurnWeight {
                turn: sample.turn_index,
                weights: ratio.weights.len(),
            });
        };
        for _ in 0..weight {
            manifest.push(i);
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    manifest.shuffle(&mut rng);
    Ok(manifest)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn sample(turn: usize, n: usize) -> TrainingSample {
        TrainingSample {
            dialogue_id: format!("d{n}"),
            turn_index: turn,
            prompt_text: "p".into(),
            response_text: "r".into(),
            image_order: vec![],
            loss_span: (1, 2),
        }
    }

    fn corpus(first: usize, second: usize) -> Vec<TrainingSample> {
        let mut v: Vec<TrainingSample> = (0..first).map(|n| sample(1, n)).collect();
        v.extend((0..second).map(|n| sample(2, first + n)));
        v
    }

    #[test]
    fn two_to_one_triples_the_corpus() {
        let samples = corpus(10, 10);
        let ratio: TurnRatio = "2:1".parse().unwrap();
        let manifest = sample_with_turn_ratio(&samples, &ratio, 7).unwrap();
        assert_eq!(manifest.len(), 30);
        let firsts = manifest
            .iter()
            .filter(|&&i| samples[i].turn_index == 1)
            .count();
        assert_eq!(firsts, 20);
    }

    #[test]
    fn one_to_zero_keeps_only_first_turns() {
        let samples = corpus(5, 5);
        let ratio: TurnRatio = "1:0".parse().unwrap();
        let manifest = sample_with_turn_ratio(&samples, &ratio, 7).unwrap();
        assert_eq!(manifest.len(), 5);
        assert!(manifest.iter().all(|&i| samples[i].turn_index == 1));
    }

    #[test]
    fn one_to_one_lists_each_sample_once() {
        let samples = corpus(4, 4);
        let ratio: TurnRatio = "1:1".parse().unwrap();
        let mut manifest = sample_with_turn_ratio(&samples, &ratio, 7).unwrap();
        manifest.sort_unstable();
        assert_eq!(manifest, (0..8).collect::<Vec<_>>());
    }

    #[test]
    fn same_seed_same_manifest_different_seed_differs() {
        let samples = corpus(20, 20);
        let ratio: TurnRatio = "2:1".parse().unwrap();
        let a = sample_with_turn_ratio(&samples, &ratio, 42).unwrap();
        let b = sample_with_turn_ratio(&samples, &ratio, 42).unwrap();
        let c = sample_with_turn_ratio(&samples, &ratio, 43).unwrap();
        assert_eq!(a, b);
        assert_ne!(a, c);
    }

    #[test]
    fn missing_weight_for_a_turn_is_an_error() {
        let samples = corpus(1, 1);
        let ratio = TurnRatio::new(vec![1]).unwrap();
        assert!(matches!(
            sample_with_turn_ratio(&samples, &ratio, 0),
            Err(TrainError::MissingTurnWeight { turn: 2, .. })
        ));
    }

    #[test]
    fn all_zero_ratio_is_rejected() {
        assert!(TurnRatio::new(vec![0, 0]).is_err());
        assert!("0:0".parse::<TurnRatio>().is_err());
    }

    proptest! {
        // Exact multiplicities: every index appears exactly weights[turn-1] times.
        #[test]
        fn multiplicities_are_exact(first in 0usize..12, second in 0usize..12,
                                    w1 in 0u32..4, w2 in 0u32..4) {
            prop_assume!(w1 + w2 > 0);
            let samples = corpus(first, second);
            let ratio = TurnRatio::new(vec![w1, w2]).unwrap();
            let manifest = sample_with_turn_ratio(&samples, &ratio, 5).unwrap();
            for (i, s) in samples.iter().enumerate() {
                let expected = if s.turn_index == 1 { w1 } else { w2 } as usize;
                let got = manifest.iter().filter(|&&m| m == i).count();
                prop_assert_eq!(got, expected);
            }
        }
    }
}
