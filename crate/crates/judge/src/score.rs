//! Score aggregation.
//!
//! Order is fixed and matters: first the mean of each criterion over items,
//! then the per-turn combined scores A1/A2 as means of their three
//! criterion means, then the overall score as the mean of A1 and A2. The
//! judge's own combined ratings are ignored. Full precision is kept
//! internally; reports round to two decimals, half-up.

use serde::{Deserialize, Serialize};

use crate::verdict::JudgeVerdict;
use crate::JudgeError;

/// Aggregated benchmark scores.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvalScorecard {
    /// Number of verdicts the means were taken over (0 when constructed
    /// from externally supplied criterion means).
    pub items_scored: usize,
    /// Turn-one criterion means (C1, C2, C3), full precision.
    pub turn1: [f64; 3],
    /// Turn-two criterion means (C1, C2, C3), full precision.
    pub turn2: [f64; 3],
    pub a1: f64,
    pub a2: f64,
    pub score: f64,
}

impl EvalScorecard {
    /// Aggregates verdicts with exact integer sums before the final
    /// divisions.
    pub fn aggregate(verdicts: &[JudgeVerdict]) -> Result<EvalScorecard, JudgeError> {
        if verdicts.is_empty() {
            return Err(JudgeError::NoVerdicts);
        }
        let n = verdicts.len() as u64;
        let mut sums = [[0u64; 3]; 2];
        for v in verdicts {
            for (c, s) in v.turn1.criteria().iter().zip(sums[0].iter_mut()) {
                *s += u64::from(*c);
            }
            for (c, s) in v.turn2.criteria().iter().zip(sums[1].iter_mut()) {
                *s += u64::from(*c);
            }
        }
        let mean = |s: u64| s as f64 / n as f64;
        let turn1 = [mean(sums[0][0]), mean(sums[0][1]), mean(sums[0][2])];
        let turn2 = [mean(sums[1][0]), mean(sums[1][1]), mean(sums[1][2])];
        let a1 = sums[0].iter().sum::<u64>() as f64 / (3 * n) as f64;
        let a2 = sums[1].iter().sum::<u64>() as f64 / (3 * n) as f64;
        let score = (sums[0].iter().sum::<u64>() + sums[1].iter().sum::<u64>()) as f64
            / (6 * n) as f64;
        Ok(EvalScorecard {
            items_scored: verdicts.len(),
            turn1,
            turn2,
            a1,
            a2,
            score,
        })
    }

    /// Combines externally computed criterion means (the oracle path for
    /// checking aggregation against reported score tables).
    pub fn from_criterion_means(turn1: [f64; 3], turn2: [f64; 3]) -> EvalScorecard {
        let a1 = turn1.iter().sum::<f64>() / 3.0;
        let a2 = turn2.iter().sum::<f64>() / 3.0;
        EvalScorecard {
            items_scored: 0,
            turn1,
            turn2,
            a1,
            a2,
            score: (a1 + a2) / 2.0,
        }
    }

    /// Two-decimal, half-up rounded view for reports.
    pub fn rounded(&self) -> RoundedScorecard {
        RoundedScorecard {
            items_scored: self.items_scored,
            turn1: self.turn1.map(round2),
            turn2: self.turn2.map(round2),
            a1: round2(self.a1),
            a2: round2(self.a2),
            score: round2(self.score),
        }
    }
}

/// Scorecard rounded for presentation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RoundedScorecard {
    pub items_scored: usize,
    pub turn1: [f64; 3],
    pub turn2: [f64; 3],
    pub a1: f64,
    pub a2: f64,
    pub score: f64,
}

/// Round half-up to two decimals (non-negative inputs).
pub fn round2(x: f64) -> f64 {
    (x * 100.0).round() / 100.0
}
