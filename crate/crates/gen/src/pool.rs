//! Demonstration and candidate pools.
//!
//! Demonstrations are full dialogues grouped by how many images their first
//! turn selects. Candidates are image descriptions; in exclusive mode every
//! drawn ID is marked consumed and persisted, so no candidate ever appears
//! in two generation requests.

use std::collections::BTreeSet;
use std::path::{Path, PathBuf};

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand::SeedableRng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use sparkles_core::{read_dialogues_jsonl, Dialogue, ImageDescription, ImageId};

use crate::seed::derive_seed;

#[derive(Debug, Error)]
pub enum PoolError {
    #[error("pool exhausted: requested {requested}, only {available} available")]
    Exhausted { requested: usize, available: usize },
    #[error("failed to load pool: {0}")]
    Load(String),
    #[error("failed to persist pool state to {path}: {source}")]
    Persist {
        path: String,
        source: std::io::Error,
    },
}

/// Draws `k` distinct indices from `0..n` uniformly without replacement.
fn draw_indices(rng: &mut ChaCha8Rng, n: usize, k: usize) -> Vec<usize> {
    let mut pool: Vec<usize> = (0..n).collect();
    let mut out = Vec::with_capacity(k);
    for _ in 0..k {
        let i = rng.random_range(0..pool.len());
        out.push(pool.swap_remove(i));
    }
    out
}

/// Pool of demonstration dialogues.
#[derive(Debug, Clone)]
pub struct DemonstrationPool {
    demos: Vec<Dialogue>,
}

impl DemonstrationPool {
    pub fn from_dialogues(demos: Vec<Dialogue>) -> Self {
        DemonstrationPool { demos }
    }

    pub fn load(path: &Path) -> Result<Self, PoolError> {
        let demos = read_dialogues_jsonl(path).map_err(|e| PoolError::Load(e.to_string()))?;
        Ok(DemonstrationPool { demos })
    }

    pub fn len(&self) -> usize {
        self.demos.len()
    }

    pub fn is_empty(&self) -> bool {
        self.demos.is_empty()
    }

    pub fn dialogues(&self) -> &[Dialogue] {
        &self.demos
    }

    /// Demos whose first turn selects exactly `n_images` images.
    pub fn branch(&self, n_images: usize) -> Vec<&Dialogue> {
        self.demos
            .iter()
            .filter(|d| d.images_of_turn(1).len() == n_images)
            .collect()
    }

    /// Uniform sample of `k` distinct demos, deterministic in `rng`.
    pub fn sample(&self, k: usize, rng: &mut ChaCha8Rng) -> Result<Vec<Dialogue>, PoolError> {
        if k > self.demos.len() {
            return Err(PoolError::Exhausted {
                requested: k,
                available: self.demos.len(),
            });
        }
        Ok(draw_indices(rng, self.demos.len(), k)
            .into_iter()
            .map(|i| self.demos[i].clone())
            .collect())
    }

    /// Uniform sample of `k` distinct demos from one first-turn branch.
    pub fn sample_branch(
        &self,
        n_images: usize,
        k: usize,
        rng: &mut ChaCha8Rng,
    ) -> Result<Vec<Dialogue>, PoolError> {
        let branch = self.branch(n_images);
        if k > branch.len() {
            return Err(PoolError::Exhausted {
                requested: k,
                available: branch.len(),
            });
        }
        Ok(draw_indices(rng, branch.len(), k)
            .into_iter()
            .map(|i| branch[i].clone())
            .collect())
    }
}

/// Draws `k` distinct demonstrations uniformly without replacement,
/// deterministic given `seed`.
pub fn sample_demonstrations(
    pool: &DemonstrationPool,
    k: usize,
    seed: u64,
) -> Result<Vec<Dialogue>, PoolError> {
    let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(seed, 0x6465_6d6f, 0));
    pool.sample(k, &mut rng)
}

#[derive(Debug, Default, Serialize, Deserialize)]
struct PoolState {
    consumed: BTreeSet<ImageId>,
}

/// Pool of candidate image descriptions with optional exclusion tracking.
#[derive(Debug)]
pub struct CandidatePool {
    items: Vec<ImageDescription>,
    consumed: BTreeSet<ImageId>,
    state_path: Option<PathBuf>,
}

impl CandidatePool {
    pub fn from_descriptions(items: Vec<ImageDescription>) -> Self {
        CandidatePool {
            items,
            consumed: BTreeSet::new(),
            state_path: None,
        }
    }

    /// Loads the pool and, when `state_path` exists, the persisted
    /// consumed-ID set. Subsequent exclusive draws rewrite the state file.
    pub fn load(pool_path: &Path, state_path: Option<&Path>) -> Result<Self, PoolError> {
        let items = sparkles_core::load_description_pool(pool_path)
            .map_err(|e| PoolError::Load(e.to_string()))?;
        let mut pool = CandidatePool::from_descriptions(items);
        if let Some(sp) = state_path {
            pool.state_path = Some(sp.to_path_buf());
            if sp.exists() {
                let text = std::fs::read_to_string(sp).map_err(|source| PoolError::Persist {
                    path: sp.display().to_string(),
                    source,
                })?;
                let state: PoolState =
                    serde_json::from_str(&text).map_err(|e| PoolError::Load(e.to_string()))?;
                pool.consumed = state.consumed;
            }
        }
        Ok(pool)
    }

    pub fn len(&self) -> usize {
        self.items.len()
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }

    pub fn consumed(&self) -> &BTreeSet<ImageId> {
        &self.consumed
    }

    pub fn remaining(&self) -> usize {
        self.items
            .iter()
            .filter(|d| !self.consumed.contains(&d.image_id))
            .count()
    }

    /// Draws `k` distinct descriptions. With `exclude_consumed`, previously
    /// drawn IDs are off the table, the new draws join the consumed set, and
    /// the set is persisted if a state path is configured.
    pub fn draw(
        &mut self,
        k: usize,
        exclude_consumed: bool,
        rng: &mut ChaCha8Rng,
    ) -> Result<Vec<ImageDescription>, PoolError> {
        let eligible: Vec<usize> = self
            .items
            .iter()
            .enumerate()
            .filter(|(_, d)| !exclude_consumed || !self.consumed.contains(&d.image_id))
            .map(|(i, _)| i)
            .collect();
        if k > eligible.len() {
            return Err(PoolError::Exhausted {
                requested: k,
                available: eligible.len(),
            });
        }
        let drawn: Vec<ImageDescription> = draw_indices(rng, eligible.len(), k)
            .into_iter()
            .map(|i| self.items[eligible[i]].clone())
            .collect();
        if exclude_consumed {
            self.consumed.extend(drawn.iter().map(|d| d.image_id.clone()));
            self.persist()?;
        }
        Ok(drawn)
    }

    fn persist(&self) -> Result<(), PoolError> {
        let Some(path) = &self.state_path else {
            return Ok(());
        };
        let state = PoolState {
            consumed: self.consumed.clone(),
        };
        let text = serde_json::to_string_pretty(&state).expect("state serializes");
        std::fs::write(path, text + "\n").map_err(|source| PoolError::Persist {
            path: path.display().to_string(),
            source,
        })
    }
}
