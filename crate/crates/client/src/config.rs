use serde::{Deserialize, Serialize};

/// Which role a client plays in the pipeline. Each role carries its own
/// default sampling parameters.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ClientRole {
    /// The LLM that writes dialogue data.
    DataLlm,
    /// The LLM that scores benchmark transcripts.
    Judge,
    /// The multimodal chat model being evaluated.
    ModelUnderTest,
}

/// Sampling parameters attached to every request.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GenerationConfig {
    pub temperature: f64,
    pub top_p: f64,
    pub max_tokens: u32,
    pub frequency_penalty: f64,
    pub presence_penalty: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub beam_size: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub repetition_penalty: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub length_penalty: Option<f64>,
}

impl GenerationConfig {
    /// `0 <= temperature`, `0 < top_p <= 1`, `max_tokens >= 1`.
    pub fn validate(&self) -> Result<(), String> {
        if self.temperature < 0.0 {
            return Err(format!("temperature {} is negative", self.temperature));
        }
        if !(self.top_p > 0.0 && self.top_p <= 1.0) {
            return Err(format!("top_p {} outside (0, 1]", self.top_p));
        }
        if self.max_tokens < 1 {
            return Err("max_tokens must be at least 1".into());
        }
        Ok(())
    }
}

/// Default sampling parameters per role.
///
/// The data LLM and judge sample broadly with a large completion budget;
/// the model under test decodes 300 new tokens with nucleus sampling and
/// neutral repetition/length penalties on a single beam.
pub fn default_generation_config(role: ClientRole) -> GenerationConfig {
    match role {
        ClientRole::DataLlm | ClientRole::Judge => GenerationConfig {
            temperature: 1.0,
            top_p: 1.0,
            max_tokens: 2048,
            frequency_penalty: 0.0,
            presence_penalty: 0.0,
            beam_size: None,
            repetition_penalty: None,
            length_penalty: None,
        },
        ClientRole::ModelUnderTest => GenerationConfig {
            temperature: 1.0,
            top_p: 0.9,
            max_tokens: 300,
            frequency_penalty: 0.0,
            presence_penalty: 0.0,
            beam_size: Some(1),
            repetition_penalty: Some(1.0),
            length_penalty: Some(1.0),
        },
    }
}

/// Model-under-test profile for interactive demos: beam search width 2,
/// otherwise identical to the evaluation profile.
pub fn demo_generation_config() -> GenerationConfig {
    GenerationConfig {
        beam_size: Some(2),
        ..default_generation_config(ClientRole::ModelUnderTest)
    }
}
