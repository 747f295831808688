mod commands;
mod config;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use cuestrap::bootstrap::PatternSource;
use cuestrap::corpus::{SplitName, SplitSpec, Task};
use cuestrap::hp::Regime;
use cuestrap::Error;

#[derive(Parser, Debug)]
#[command(
    name = "cuestrap",
    version,
    about = "Cue mining, high-precision classifiers and pattern bootstrapping"
)]
pub struct Cli {
    /// sarcasm or nasty
    #[arg(long, global = true)]
    pub task: Option<Task>,
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// TOML (or .json) run configuration.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    #[arg(long, global = true, default_value = "out")]
    pub out: PathBuf,
    /// Pre-tagged sentences used in place of the bundled tagger.
    #[arg(long, global = true)]
    pub pretagged: Option<PathBuf>,
    /// Corpus JSONL file; overrides the config.
    #[arg(long, global = true)]
    pub corpus: Option<PathBuf>,
    /// Split size as NAME:CLASS:COUNTER; repeat for each split.
    #[arg(long = "split-size", global = true)]
    pub splits: Vec<SplitSpec>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum SourceArg {
    Mt,
    Chi2,
    Both,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Stage {
    Hp,
    Pattern,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Load the corpus, derive gold labels and write splits.
    Ingest,
    /// Mine MT and/or chi-square indicators.
    Indicators {
        #[arg(long, value_enum, default_value = "both")]
        source: SourceArg,
    },
    /// Sweep a threshold grid and select the best configuration.
    Sweep {
        #[arg(long, value_enum, default_value = "hp")]
        stage: Stage,
        #[arg(long)]
        regime: Option<Regime>,
    },
    /// Label a split with the selected high-precision classifier.
    HpClassify {
        #[arg(long, default_value = "HP_DEV_TEST")]
        split: SplitName,
    },
    /// Learn extraction patterns.
    LearnPatterns {
        /// validated, pool or eval
        #[arg(long)]
        source: Option<PatternSource>,
    },
    /// Label a split with the learned patterns.
    PatternClassify {
        #[arg(long, default_value = "HP_DEV_TEST")]
        split: SplitName,
    },
    /// Run every stage end to end and write a run manifest.
    Bootstrap {
        #[arg(long)]
        rounds: Option<usize>,
    },
    /// Render TSV reports as aligned text.
    Report {
        /// TSV files; defaults to the known reports in the output directory.
        files: Vec<PathBuf>,
    },
    /// Write the planted-cue synthetic corpus.
    Synth {
        #[arg(long, default_value_t = 1)]
        corpus_seed: u64,
        #[arg(long)]
        output: PathBuf,
    },
}

pub fn exit_code(err: &anyhow::Error) -> u8 {
    match err.downcast_ref::<Error>() {
        Some(
            Error::EmptyCorpus
            | Error::InsufficientData { .. }
            | Error::NoAnnotations(_)
            | Error::InsufficientAnnotators { .. }
            | Error::EmptyInput,
        ) => 3,
        Some(Error::NoFeasibleConfig { .. }) => 4,
        Some(Error::EmptyPool | Error::MissingIa(_) | Error::MissingGold(_)) => 5,
        _ => 2,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match commands::run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(exit_code(&err))
        }
    }
}
