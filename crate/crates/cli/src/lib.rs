//! Single entry point for the pipeline stages.
//!
//! Exit codes: 0 success, 1 validation/evaluation failure, 2 configuration
//! error, 3 transport exhaustion. Failures additionally emit one
//! machine-readable JSON object on stderr.

mod commands;
mod config;
mod manifest;

pub use config::{EndpointConfig, Endpoints, EvalSettings, GenerationSettings, PipelineConfig};

use std::ffi::OsString;
use std::path::PathBuf;
use std::sync::Arc;

use clap::{Parser, Subcommand, ValueEnum};
use sparkles_client::{ChatClient, ClientError, HttpTransport, ReplayTransport, RetryPolicy};

/// A failure carrying its exit code, serialized to stderr as JSON.
#[derive(Debug)]
pub struct CliError {
    pub kind: &'static str,
    pub message: String,
    pub exit_code: i32,
}

impl CliError {
    pub fn config(message: impl Into<String>) -> Self {
        CliError {
            kind: "config",
            message: message.into(),
            exit_code: 2,
        }
    }

    pub fn validation(message: impl Into<String>) -> Self {
        CliError {
            kind: "validation",
            message: message.into(),
            exit_code: 1,
        }
    }

    pub fn transport(message: impl Into<String>) -> Self {
        CliError {
            kind: "transport",
            message: message.into(),
            exit_code: 3,
        }
    }

    pub fn io(message: impl Into<String>) -> Self {
        CliError {
            kind: "io",
            message: message.into(),
            exit_code: 2,
        }
    }
}

impl From<ClientError> for CliError {
    fn from(e: ClientError) -> Self {
        match e {
            ClientError::Auth(_) => CliError::config(e.to_string()),
            ClientError::Transport { .. }
            | ClientError::Protocol(_)
            | ClientError::FixtureMiss(_) => CliError::transport(e.to_string()),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::io(e.to_string())
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "sparkles",
    about = "Generate multi-image dialogue data, build training samples, and evaluate chat models",
    version
)]
struct Cli {
    /// Pipeline config file (TOML).
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Run seed (overrides config and SPARKLES_SEED).
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Bounded parallelism for evaluation stages.
    #[arg(long, global = true)]
    parallelism: Option<usize>,
    /// Replay recorded responses from this fixture instead of calling any
    /// endpoint.
    #[arg(long, global = true)]
    mock_fixture: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ModeArg {
    Vg,
    Cc,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum TaskArg {
    Bison,
    Nlvr2,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum NumImagesArg {
    Two,
    Three,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Generate dialogues with the data LLM.
    Generate {
        #[arg(long, value_enum)]
        mode: ModeArg,
        /// Target number of dialogues.
        #[arg(long)]
        count: usize,
        /// Candidate image-description pool (JSON array).
        #[arg(long)]
        pool: PathBuf,
        /// Demonstration dialogues (JSON Lines).
        #[arg(long)]
        demos: PathBuf,
        /// Output dialogue file (JSON Lines).
        #[arg(long)]
        out: PathBuf,
        /// Consumed-candidate state file (single-dialogue mode only;
        /// defaults to `<pool>.state.json`).
        #[arg(long)]
        state: Option<PathBuf>,
        /// Force the first-turn image count instead of sampling it.
        #[arg(long, value_enum)]
        num_images: Option<NumImagesArg>,
        #[arg(long)]
        max_attempts: Option<u32>,
    },
    /// Compile dialogues into training samples with loss spans.
    BuildTrain {
        #[arg(long = "in")]
        input: PathBuf,
        /// Turn sampling ratio, e.g. `2:1`.
        #[arg(long)]
        ratio: String,
        #[arg(long)]
        out: PathBuf,
        /// Image-description pool supplying media locators.
        #[arg(long)]
        media_map: Option<PathBuf>,
        /// Fail on media that cannot be resolved.
        #[arg(long)]
        strict_media: bool,
    },
    /// Run the judge-scored conversational benchmark.
    EvalSparkles {
        #[arg(long)]
        bench: PathBuf,
        #[arg(long)]
        model_endpoint: Option<String>,
        #[arg(long)]
        model: Option<String>,
        #[arg(long)]
        judge_endpoint: Option<String>,
        #[arg(long)]
        judge_model: Option<String>,
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        max_judge_retries: Option<u32>,
        /// Unrecoverable items tolerated before aborting (default: 10% of
        /// the benchmark).
        #[arg(long)]
        max_unrecoverable: Option<usize>,
    },
    /// Run a zero-shot two-image task.
    EvalTask {
        #[arg(long, value_enum)]
        task: TaskArg,
        /// Task annotation file (native format).
        #[arg(long)]
        annotations: PathBuf,
        /// Evaluate on a seed-deterministic sample of this many examples.
        #[arg(long, default_value_t = 150)]
        n: usize,
        #[arg(long)]
        model_endpoint: Option<String>,
        #[arg(long)]
        model: Option<String>,
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        max_regen: Option<u32>,
        /// JSON array of training image keys; overlapping examples are
        /// removed before sampling.
        #[arg(long)]
        dedup_registry: Option<PathBuf>,
    },
    /// Corpus statistics and demonstration-pool curation.
    Stats {
        #[arg(long = "in")]
        input: PathBuf,
        /// Report directory (stats.json, pairs.csv, top_pairs.svg).
        #[arg(long)]
        report: PathBuf,
        /// Also write dialogues with corpus-unique verb-noun keys here
        /// (JSON Lines), for demonstration pools.
        #[arg(long)]
        curate: Option<PathBuf>,
    },
    /// Validate dialogues against a dataset spec.
    Validate {
        #[arg(long = "in")]
        input: PathBuf,
        /// Spec name, e.g. `vg`, `cc`, `cc-2-1`, `eval-2-2`.
        #[arg(long)]
        spec: String,
    },
}

/// Everything a command needs beyond its own flags.
pub(crate) struct Runtime {
    pub config: PipelineConfig,
    pub seed: u64,
    pub client: ChatClient,
    pub mock_fixture: Option<PathBuf>,
    pub argv: Vec<String>,
}

/// Parses argv, runs the stage, and returns the process exit code.
pub fn dispatch<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let argv: Vec<OsString> = argv.into_iter().map(Into::into).collect();
    let printable: Vec<String> = argv
        .iter()
        .map(|a| a.to_string_lossy().into_owned())
        .collect();
    let cli = match Cli::try_parse_from(argv.clone()) {
        Ok(cli) => cli,
        Err(e) => {
            // Help/version requests are success; anything else is a usage
            // error (exit 2) with the usage text on stderr.
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                print!("{e}");
                return 0;
            }
            eprintln!("{e}");
            emit_error(&CliError::config(e.to_string()));
            return 2;
        }
    };
    match run(cli, printable) {
        Ok(()) => 0,
        Err(e) => {
            emit_error(&e);
            e.exit_code
        }
    }
}

fn emit_error(e: &CliError) {
    let payload = serde_json::json!({
        "error": {"kind": e.kind, "message": e.message, "exit_code": e.exit_code}
    });
    eprintln!("{payload}");
}

fn run(cli: Cli, argv: Vec<String>) -> Result<(), CliError> {
    let mut config = PipelineConfig::load(cli.config.as_deref())?;
    if let Some(seed) = cli.seed {
        config.seed = seed;
    }
    if let Some(parallelism) = cli.parallelism {
        config.parallelism = parallelism;
    }
    let mock_fixture = cli.mock_fixture.clone().or_else(|| {
        std::env::var("SPARKLES_MOCK_FIXTURE")
            .ok()
            .map(PathBuf::from)
    });

    let client = match &mock_fixture {
        Some(path) => {
            let replay = ReplayTransport::from_file(path).map_err(|e| {
                CliError::config(format!("cannot load fixture {}: {e}", path.display()))
            })?;
            if replay.has_wildcards() && config.parallelism > 1 {
                // Wildcard fixtures pair responses with requests by order;
                // concurrency would scramble the pairing.
                config.parallelism = 1;
            }
            ChatClient::new(Arc::new(replay)).with_retry(RetryPolicy::immediate(3))
        }
        None => {
            let mut client = ChatClient::new(Arc::new(HttpTransport::new()));
            if config.rate_limit.requests_per_minute > 0 {
                client = client.with_rate_limit(config.rate_limit.requests_per_minute);
            }
            client
        }
    };

    let runtime = Runtime {
        seed: config.seed,
        config,
        client,
        mock_fixture,
        argv,
    };

    match cli.command {
        Command::Generate {
            mode,
            count,
            pool,
            demos,
            out,
            state,
            num_images,
            max_attempts,
        } => commands::generate::run(
            &runtime,
            match mode {
                ModeArg::Vg => sparkles_gen::GenMode::SingleVg,
                ModeArg::Cc => sparkles_gen::GenMode::MultiCc,
            },
            count,
            &pool,
            &demos,
            &out,
            state.as_deref(),
            num_images.map(|n| match n {
                NumImagesArg::Two => sparkles_gen::NumImages::Two,
                NumImagesArg::Three => sparkles_gen::NumImages::Three,
            }),
            max_attempts,
        ),
        Command::BuildTrain {
            input,
            ratio,
            out,
            media_map,
            strict_media,
        } => commands::build_train::run(
            &runtime,
            &input,
            &ratio,
            &out,
            media_map.as_deref(),
            strict_media,
        ),
        Command::EvalSparkles {
            bench,
            model_endpoint,
            model,
            judge_endpoint,
            judge_model,
            out,
            max_judge_retries,
            max_unrecoverable,
        } => commands::eval_sparkles::run(
            &runtime,
            &bench,
            model_endpoint.as_deref(),
            model.as_deref(),
            judge_endpoint.as_deref(),
            judge_model.as_deref(),
            &out,
            max_judge_retries,
            max_unrecoverable,
        ),
        Command::EvalTask {
            task,
            annotations,
            n,
            model_endpoint,
            model,
            out,
            max_regen,
            dedup_registry,
        } => commands::eval_task::run(
            &runtime,
            match task {
                TaskArg::Bison => sparkles_tasks::Task::Bison,
                TaskArg::Nlvr2 => sparkles_tasks::Task::Nlvr2,
            },
            &annotations,
            n,
            model_endpoint.as_deref(),
            model.as_deref(),
            &out,
            max_regen,
            dedup_registry.as_deref(),
        ),
        Command::Stats {
            input,
            report,
            curate,
        } => commands::stats::run(&runtime, &input, &report, curate.as_deref()),
        Command::Validate { input, spec } => commands::validate::run(&runtime, &input, &spec),
    }
}
