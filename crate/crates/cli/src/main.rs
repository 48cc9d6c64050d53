use std::fs;
use std::io::{self, BufRead, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use docrank::vsm::TfMode;
use docrank_cli::{cmd_cluster, cmd_compare, cmd_eval, cmd_rank, cmd_stem, Format, RunConfig};

#[derive(Parser)]
#[command(name = "docrank", version, about = "Tf-idf Apriori document clustering and ranking")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Cluster a corpus and write the cluster set.
    Cluster(CommonArgs),
    /// Cluster, then rank each cluster's documents for a query.
    Rank(CommonArgs),
    /// Cluster counts of tf-idf Apriori vs classic Apriori over several supports.
    Compare(CommonArgs),
    /// Precision, recall and F-measure of the clusters against labels.
    Eval(CommonArgs),
    /// Print the Porter stem of each word (stdin lines when none given).
    Stem { words: Vec<String> },
}

#[derive(Args)]
struct CommonArgs {
    #[arg(long)]
    corpus: PathBuf,
    /// Minimum support; repeat for `compare`.
    #[arg(long = "min-sup")]
    min_sup: Vec<usize>,
    #[arg(long)]
    query: Option<String>,
    /// Keep only the first N documents by id.
    #[arg(long = "top-n")]
    top_n: Option<usize>,
    #[arg(long)]
    stopwords: Option<PathBuf>,
    /// CSV of `filename,label` rows.
    #[arg(long)]
    labels: Option<PathBuf>,
    /// Output file; stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum)]
    format: Option<OutputFormat>,
    /// Term-frequency definition used for ranking.
    #[arg(long = "rank-tf", value_enum, default_value = "standard")]
    rank_tf: RankTf,
}

#[derive(Clone, Copy, ValueEnum)]
enum OutputFormat {
    Json,
    Csv,
}

#[derive(Clone, Copy, ValueEnum)]
enum RankTf {
    Standard,
    Uniform,
}

impl CommonArgs {
    fn into_config(self, default_format: Format) -> RunConfig {
        RunConfig {
            corpus_path: self.corpus,
            min_sups: self.min_sup,
            query: self.query,
            top_n: self.top_n,
            stopword_path: self.stopwords,
            labels_path: self.labels,
            tf_mode_rank: match self.rank_tf {
                RankTf::Standard => TfMode::Standard,
                RankTf::Uniform => TfMode::Uniform,
            },
            output_path: self.out,
            format: match self.format {
                Some(OutputFormat::Json) => Format::Json,
                Some(OutputFormat::Csv) => Format::Csv,
                None => default_format,
            },
        }
    }
}

fn emit(config: &RunConfig, text: &str) -> Result<()> {
    match &config.output_path {
        Some(path) => fs::write(path, text).with_context(|| format!("cannot write {}", path.display())),
        None => io::stdout()
            .write_all(text.as_bytes())
            .context("cannot write to stdout"),
    }
}

fn run(cli: Cli) -> Result<()> {
    let (config, command): (RunConfig, fn(&RunConfig) -> Result<String>) = match cli.command {
        Command::Cluster(args) => (args.into_config(Format::Json), cmd_cluster),
        Command::Rank(args) => (args.into_config(Format::Json), cmd_rank),
        Command::Compare(args) => (args.into_config(Format::Csv), cmd_compare),
        Command::Eval(args) => (args.into_config(Format::Json), cmd_eval),
        Command::Stem { words } => {
            let out = if words.is_empty() {
                let lines: Vec<String> = io::stdin().lock().lines().collect::<Result<_, _>>()?;
                cmd_stem(lines.iter().map(String::as_str))
            } else {
                cmd_stem(words.iter().map(String::as_str))
            };
            io::stdout().write_all(out.as_bytes())?;
            return Ok(());
        }
    };
    let text = command(&config)?;
    emit(&config, &text)
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
