//! Run manifests: enough to reproduce a run byte-identically against the
//! same fixtures. No wall-clock values — outputs stay byte-stable.

use std::path::Path;

use serde::Serialize;

use crate::config::PipelineConfig;

#[derive(Debug, Serialize)]
pub struct RunManifest<'a> {
    pub tool_version: &'static str,
    pub subcommand: &'a str,
    pub argv: Vec<String>,
    pub config_hash: String,
    pub seed: u64,
    pub parallelism: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mock_fixture: Option<String>,
    pub outputs: Vec<String>,
}

impl<'a> RunManifest<'a> {
    pub fn new(
        subcommand: &'a str,
        argv: &[String],
        config: &PipelineConfig,
        seed: u64,
        mock_fixture: Option<&Path>,
        outputs: &[&Path],
    ) -> Self {
        RunManifest {
            tool_version: env!("CARGO_PKG_VERSION"),
            subcommand,
            argv: argv.to_vec(),
            config_hash: config.content_hash(),
            seed,
            parallelism: config.parallelism,
            mock_fixture: mock_fixture.map(|p| p.display().to_string()),
            outputs: outputs.iter().map(|p| p.display().to_string()).collect(),
        }
    }

    /// Writes `<out>.manifest.json` next to the primary output.
    pub fn write_next_to(&self, primary_output: &Path) -> std::io::Result<()> {
        let mut name = primary_output.file_name().unwrap_or_default().to_owned();
        name.push(".manifest.json");
        let path = primary_output.with_file_name(name);
        let text = serde_json::to_string_pretty(self).expect("manifest serializes");
        std::fs::write(path, text + "\n")
    }
}
