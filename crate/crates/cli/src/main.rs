//! Command-line front end: align a transcript to a paper, extract summaries,
//! score them, or run a whole corpus in one batch.

mod commands;
mod config;

use std::fmt;
use std::path::PathBuf;

use clap::error::ErrorKind;
use clap::{Parser, Subcommand};

use talkalign::rouge::Metric;
use talkalign::summarizer::BudgetMode;

use config::{validate_mode, PipelineConfig};

#[derive(Debug)]
pub enum CliError {
    Core(talkalign::Error),
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    Usage(String),
    EmptyCorpus,
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Core(e) => write!(f, "{e}"),
            CliError::Io { path, source } => write!(f, "{}: {source}", path.display()),
            CliError::Usage(msg) => write!(f, "{msg}"),
            CliError::EmptyCorpus => write!(f, "no paper/transcript pairs found"),
        }
    }
}

impl CliError {
    pub fn class(&self) -> &'static str {
        match self {
            CliError::Core(e) => e.class(),
            CliError::Io { .. } => "Io",
            CliError::Usage(_) => "Usage",
            CliError::EmptyCorpus => "EmptyCorpus",
        }
    }

    /// Exit-code mapping: 2 input (I/O, parse, format), 3 empty domain,
    /// 4 empty text, 5 empty corpus, 6 budget too small, 7 missing abstract,
    /// 64 usage.
    pub fn exit_code(&self) -> i32 {
        use talkalign::Error as E;
        match self {
            CliError::Io { .. } => 2,
            CliError::Usage(_) => 64,
            CliError::EmptyCorpus => 5,
            CliError::Core(e) => match e {
                E::Parse { .. } | E::Format { .. } | E::Io(_) => 2,
                E::EmptyDocument | E::EmptyStateSpace | E::EmptyTranscript | E::EmptyTable => 3,
                E::EmptyText => 4,
                E::BudgetTooSmall => 6,
                E::MissingAbstract => 7,
            },
        }
    }
}

#[derive(Parser)]
#[command(
    name = "talkalign",
    version,
    about = "Align talk transcripts to paper sentences and extract budgeted summaries"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Align a transcript to a paper and write the alignment record plus the
    /// interval report.
    Align {
        /// Paper JSON file.
        paper: PathBuf,
        /// Transcript file (plain text or word-list JSON).
        transcript: PathBuf,
        #[arg(long)]
        config: Option<PathBuf>,
        /// Word-embedding file (overrides the config's embeddings_path).
        #[arg(long)]
        embeddings: Option<PathBuf>,
        #[arg(long, default_value = ".")]
        out: PathBuf,
    },
    /// Produce summaries from a stored alignment, one file pair per budget
    /// mode.
    Summarize {
        /// Alignment JSON produced by `align`.
        alignment: PathBuf,
        /// The paper the alignment refers to.
        paper: PathBuf,
        #[arg(long)]
        config: Option<PathBuf>,
        /// Fixed word budget; repeatable.
        #[arg(long = "words", value_name = "N")]
        words: Vec<usize>,
        /// Summary/paper length ratio in (0,1); repeatable.
        #[arg(long = "ratio", value_name = "R")]
        ratios: Vec<f64>,
        /// Take the top N ranked sentences.
        #[arg(long = "top-n", value_name = "N")]
        top_n: Option<usize>,
        /// Augment the abstract with non-redundant extracted sentences
        /// (word-budget modes only).
        #[arg(long)]
        hybrid: bool,
        #[arg(long, default_value = ".")]
        out: PathBuf,
    },
    /// Score a candidate summary against a reference; TSV rows on stdout.
    Eval {
        candidate: PathBuf,
        reference: PathBuf,
        /// rouge2, rouge3 or su4; repeatable, default all three.
        #[arg(long = "metric", value_name = "METRIC")]
        metrics: Vec<String>,
    },
    /// Process every `<id>.paper.json` / `<id>.transcript.*` pair in a
    /// directory and write a manifest.
    Batch {
        /// Corpus directory.
        corpus: PathBuf,
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long)]
        embeddings: Option<PathBuf>,
        #[arg(long, default_value = ".")]
        out: PathBuf,
        /// Worker count (overrides the config's parallelism).
        #[arg(long)]
        jobs: Option<usize>,
    },
}

fn load_config(path: &Option<PathBuf>) -> Result<PipelineConfig, CliError> {
    let config = match path {
        Some(p) => PipelineConfig::from_file(p)?,
        None => PipelineConfig::default(),
    };
    config.validate()?;
    Ok(config)
}

fn resolve_embeddings(
    flag: &Option<PathBuf>,
    config: &PipelineConfig,
) -> Result<PathBuf, CliError> {
    flag.clone()
        .or_else(|| config.embeddings_path.clone())
        .ok_or_else(|| {
            CliError::Usage("an embeddings file is required (--embeddings or config)".into())
        })
}

fn summarize_modes(
    words: &[usize],
    ratios: &[f64],
    top_n: Option<usize>,
    config: &PipelineConfig,
) -> Result<Vec<BudgetMode>, CliError> {
    let mut modes: Vec<BudgetMode> = words
        .iter()
        .map(|&budget| BudgetMode::FixedWords { budget })
        .chain(ratios.iter().map(|&ratio| BudgetMode::Ratio { ratio }))
        .chain(top_n.map(|n| BudgetMode::TopN { n }))
        .collect();
    if modes.is_empty() {
        modes = config.budget_modes.clone();
    }
    for mode in &modes {
        validate_mode(mode)?;
    }
    Ok(modes)
}

fn parse_metrics(raw: &[String]) -> Result<Vec<Metric>, CliError> {
    if raw.is_empty() {
        return Ok(Metric::ALL.to_vec());
    }
    raw.iter()
        .map(|m| m.parse::<Metric>().map_err(CliError::Usage))
        .collect()
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Align {
            paper,
            transcript,
            config,
            embeddings,
            out,
        } => {
            let config = load_config(&config)?;
            let embeddings = resolve_embeddings(&embeddings, &config)?;
            commands::run_align(&paper, &transcript, &embeddings, &config, &out)
        }
        Command::Summarize {
            alignment,
            paper,
            config,
            words,
            ratios,
            top_n,
            hybrid,
            out,
        } => {
            let config = load_config(&config)?;
            let modes = summarize_modes(&words, &ratios, top_n, &config)?;
            let hybrid = hybrid || config.hybrid;
            commands::run_summarize(&alignment, &paper, &modes, hybrid, &config, &out)
        }
        Command::Eval {
            candidate,
            reference,
            metrics,
        } => {
            let metrics = parse_metrics(&metrics)?;
            commands::run_eval(&candidate, &reference, &metrics)
        }
        Command::Batch {
            corpus,
            config,
            embeddings,
            out,
            jobs,
        } => {
            let config = load_config(&config)?;
            let embeddings = resolve_embeddings(&embeddings, &config)?;
            let jobs = jobs.unwrap_or(config.parallelism).max(1);
            commands::run_batch(&corpus, &embeddings, &config, jobs, &out)
        }
    }
}

fn main() {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            let code = match err.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 64,
            };
            let _ = err.print();
            std::process::exit(code);
        }
    };
    if let Err(err) = run(cli) {
        eprintln!("error[{}]: {err}", err.class());
        std::process::exit(err.exit_code());
    }
}
