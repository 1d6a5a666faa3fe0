//! Pipeline configuration.
//!
//! Precedence is flags > environment > config file > built-in defaults.
//! Secrets never appear here — endpoints name the environment variable
//! that holds their API key.

use std::path::Path;

use serde::{Deserialize, Serialize};
use sparkles_client::Endpoint;
use sparkles_train::FramingConfig;

use crate::CliError;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PipelineConfig {
    pub seed: u64,
    pub parallelism: usize,
    pub endpoints: Endpoints,
    pub generation: GenerationSettings,
    pub eval: EvalSettings,
    pub framing: FramingConfig,
    pub rate_limit: RateLimit,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        PipelineConfig {
            seed: 0,
            parallelism: 4,
            endpoints: Endpoints::default(),
            generation: GenerationSettings::default(),
            eval: EvalSettings::default(),
            framing: FramingConfig::default(),
            rate_limit: RateLimit::default(),
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Endpoints {
    pub data_llm: EndpointConfig,
    pub judge: EndpointConfig,
    pub model_under_test: EndpointConfig,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct EndpointConfig {
    pub base_url: String,
    pub model: String,
    pub api_key_env: Option<String>,
}

impl Default for EndpointConfig {
    fn default() -> Self {
        EndpointConfig {
            base_url: "http://localhost:8000/v1/chat/completions".into(),
            model: "default-model".into(),
            api_key_env: None,
        }
    }
}

impl EndpointConfig {
    pub fn to_endpoint(&self) -> Endpoint {
        let mut endpoint = Endpoint::new(self.base_url.clone(), self.model.clone());
        if let Some(env) = &self.api_key_env {
            endpoint = endpoint.with_api_key_env(env.clone());
        }
        endpoint
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct GenerationSettings {
    /// Generation retries per request before giving up.
    pub max_attempts: u32,
    /// Probability that a single-dialogue request asks for three first-turn
    /// images instead of two.
    pub three_image_weight: f64,
}

impl Default for GenerationSettings {
    fn default() -> Self {
        GenerationSettings {
            max_attempts: 3,
            three_image_weight: 0.5,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct EvalSettings {
    /// Extra judge calls after a malformed verdict.
    pub max_judge_retries: u32,
    /// Extra model calls after a non-conforming task reply.
    pub max_regen: u32,
    /// Fraction of benchmark items allowed to stay unrecoverable before the
    /// run aborts.
    pub max_unrecoverable_fraction: f64,
}

impl Default for EvalSettings {
    fn default() -> Self {
        EvalSettings {
            max_judge_retries: 2,
            max_regen: 3,
            max_unrecoverable_fraction: 0.1,
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RateLimit {
    /// 0 disables rate limiting.
    pub requests_per_minute: u32,
}

impl PipelineConfig {
    /// Loads the file (if given), then applies environment overrides
    /// (`SPARKLES_SEED`, `SPARKLES_PARALLELISM`).
    pub fn load(path: Option<&Path>) -> Result<PipelineConfig, CliError> {
        let mut config = match path {
            Some(p) => {
                let text = std::fs::read_to_string(p).map_err(|e| {
                    CliError::config(format!("cannot read config {}: {e}", p.display()))
                })?;
                toml::from_str(&text).map_err(|e| {
                    CliError::config(format!("invalid config {}: {e}", p.display()))
                })?
            }
            None => PipelineConfig::default(),
        };
        if let Ok(seed) = std::env::var("SPARKLES_SEED") {
            config.seed = seed
                .parse()
                .map_err(|_| CliError::config(format!("SPARKLES_SEED {seed:?} is not an integer")))?;
        }
        if let Ok(par) = std::env::var("SPARKLES_PARALLELISM") {
            config.parallelism = par.parse().map_err(|_| {
                CliError::config(format!("SPARKLES_PARALLELISM {par:?} is not an integer"))
            })?;
        }
        config.framing.validate().map_err(CliError::config)?;
        Ok(config)
    }

    /// Stable hash of the effective configuration, recorded in manifests.
    pub fn content_hash(&self) -> String {
        use sha2::{Digest, Sha256};
        let canonical = serde_json::to_string(self).expect("config serializes");
        let mut hasher = Sha256::new();
        hasher.update(canonical.as_bytes());
        hex::encode(hasher.finalize())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_are_sane() {
        let config = PipelineConfig::default();
        assert_eq!(config.generation.max_attempts, 3);
        assert_eq!(config.eval.max_judge_retries, 2);
        assert_eq!(config.eval.max_regen, 3);
        assert_eq!(config.framing.separator, "###");
        assert_eq!(config.parallelism, 4);
    }

    #[test]
    fn file_values_override_defaults() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("config.toml");
        std::fs::write(
            &path,
            r#"
seed = 7
[endpoints.judge]
base_url = "https://judge.example/v1/chat"
model = "judge-4"
api_key_env = "JUDGE_KEY"
[generation]
max_attempts = 5
"#,
        )
        .unwrap();
        let config = PipelineConfig::load(Some(&path)).unwrap();
        assert_eq!(config.seed, 7);
        assert_eq!(config.endpoints.judge.model, "judge-4");
        assert_eq!(config.generation.max_attempts, 5);
        // Untouched sections keep defaults.
        assert_eq!(config.eval.max_regen, 3);
    }

    #[test]
    fn unknown_keys_are_config_errors() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("config.toml");
        std::fs::write(&path, "sneaky_typo = 1\n").unwrap();
        assert!(PipelineConfig::load(Some(&path)).is_err());
    }

    #[test]
    fn hash_tracks_content() {
        let a = PipelineConfig::default();
        let mut b = PipelineConfig::default();
        assert_eq!(a.content_hash(), b.content_hash());
        b.seed = 9;
        assert_ne!(a.content_hash(), b.content_hash());
    }
}
