//! Command implementations behind the `docrank` binary.
//!
//! Every command returns the rendered report as a string; the binary only
//! parses arguments and writes the result out.

use std::fmt::Write as _;
use std::path::PathBuf;

use anyhow::{bail, ensure, Context, Result};
use docrank::corpus::{self, load_corpus, load_stopwords, porter_stem, Document, PipelineConfig};
use docrank::eval::{self, EvalReport};
use docrank::ranking::{ClusterRanking, Ranker};
use docrank::tfidf_apriori::{self, ClusterSet, ThresholdConfig};
use docrank::vsm::{Query, TfMode, Vocabulary};
use serde::{Deserialize, Serialize};

pub const COMPARE_HEADER: &str = "min_sup,threshold,tfidf_clusters,apriori_clusters";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Format {
    #[default]
    Json,
    Csv,
}

#[derive(Debug, Clone)]
pub struct RunConfig {
    pub corpus_path: PathBuf,
    pub min_sups: Vec<usize>,
    pub query: Option<String>,
    pub top_n: Option<usize>,
    pub stopword_path: Option<PathBuf>,
    pub labels_path: Option<PathBuf>,
    pub tf_mode_rank: TfMode,
    pub output_path: Option<PathBuf>,
    pub format: Format,
}

impl RunConfig {
    pub fn new(corpus_path: impl Into<PathBuf>, min_sups: Vec<usize>) -> Self {
        RunConfig {
            corpus_path: corpus_path.into(),
            min_sups,
            query: None,
            top_n: None,
            stopword_path: None,
            labels_path: None,
            tf_mode_rank: TfMode::Standard,
            output_path: None,
            format: Format::Json,
        }
    }

    fn single_min_sup(&self) -> Result<usize> {
        match self.min_sups.as_slice() {
            [m] => {
                ensure!(*m >= 1, "--min-sup must be at least 1");
                Ok(*m)
            }
            [] => bail!("--min-sup is required"),
            _ => bail!("this command takes a single --min-sup"),
        }
    }
}

/// A corpus loaded and preprocessed according to a [`RunConfig`].
pub struct Prepared {
    pub pipeline: PipelineConfig,
    pub docs: Vec<Document>,
    pub vocab: Vocabulary,
}

pub fn prepare(config: &RunConfig) -> Result<Prepared> {
    let mut pipeline = PipelineConfig::default();
    if let Some(path) = &config.stopword_path {
        pipeline.stopwords = load_stopwords(path)?;
    }
    let mut raws = load_corpus(&config.corpus_path, config.labels_path.as_deref())?;
    if let Some(n) = config.top_n {
        ensure!(n >= 1, "--top-n must be at least 1");
        raws.truncate(n);
    }
    ensure!(
        !raws.is_empty(),
        "corpus {} has no documents",
        config.corpus_path.display()
    );
    let docs = corpus::preprocess_all(&raws, &pipeline);
    let vocab = Vocabulary::build(&docs)?;
    Ok(Prepared { pipeline, docs, vocab })
}

fn cluster_prepared(prepared: &Prepared, min_sup: usize) -> Result<ClusterSet> {
    let config = ThresholdConfig::new(min_sup, prepared.docs.len())?;
    Ok(tfidf_apriori::cluster(&prepared.docs, &prepared.vocab, &config)?)
}

fn to_json<T: Serialize>(value: &T) -> Result<String> {
    let mut s = serde_json::to_string_pretty(value)?;
    s.push('\n');
    Ok(s)
}

pub fn cmd_cluster(config: &RunConfig) -> Result<String> {
    let prepared = prepare(config)?;
    let set = cluster_prepared(&prepared, config.single_min_sup()?)?;
    match config.format {
        Format::Json => to_json(&set),
        Format::Csv => cluster_csv(&set),
    }
}

pub fn parse_cluster_json(text: &str) -> Result<ClusterSet> {
    serde_json::from_str(text).context("malformed cluster JSON")
}

/// CSV output is written unquoted, so ids must stay within `[A-Za-z0-9._-]`.
fn csv_safe(id: &str) -> Result<&str> {
    ensure!(
        !id.is_empty() && id.bytes().all(|b| b.is_ascii_alphanumeric() || b"._-".contains(&b)),
        "document id {id:?} cannot be written to CSV unquoted"
    );
    Ok(id)
}

fn cluster_csv(set: &ClusterSet) -> Result<String> {
    let mut out = String::from("cluster,itemset,documents\n");
    for c in &set.clusters {
        let docs = c.documents.iter().map(|d| csv_safe(d)).collect::<Result<Vec<_>>>()?;
        let _ = writeln!(out, "{},{},{}", c.id, c.itemset.join(";"), docs.join(";"));
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RankReport {
    pub query: Vec<String>,
    pub min_sup: usize,
    pub threshold: f64,
    pub clusters: Vec<ClusterRanking>,
}

pub fn cmd_rank(config: &RunConfig) -> Result<String> {
    let text = config.query.as_deref().context("--query is required")?;
    let prepared = prepare(config)?;
    let query = Query::parse(text, &prepared.pipeline);
    ensure!(!query.is_empty(), "query reduced to nothing after preprocessing");
    let set = cluster_prepared(&prepared, config.single_min_sup()?)?;
    let ranker = Ranker::new(&prepared.docs, &prepared.vocab, config.tf_mode_rank);
    let report = RankReport {
        query: query.terms.clone(),
        min_sup: set.min_sup,
        threshold: set.threshold,
        clusters: ranker.rank_all(&set, &query)?,
    };
    match config.format {
        Format::Json => to_json(&report),
        Format::Csv => {
            let mut out = String::from("cluster,position,document,simfact,query_score,rank_value\n");
            for c in &report.clusters {
                for m in &c.members {
                    let _ = writeln!(
                        out,
                        "{},{},{},{},{},{}",
                        c.cluster_id,
                        m.position,
                        csv_safe(&m.doc_id)?,
                        m.simfact,
                        m.query_score,
                        m.rank_value
                    );
                }
            }
            Ok(out)
        }
    }
}

pub fn cmd_compare(config: &RunConfig) -> Result<String> {
    ensure!(!config.min_sups.is_empty(), "compare needs at least one --min-sup");
    let prepared = prepare(config)?;
    let rows = eval::sweep(&prepared.docs, &prepared.vocab, &config.min_sups)?;
    match config.format {
        Format::Json => to_json(&rows),
        Format::Csv => {
            let mut out = format!("{COMPARE_HEADER}\n");
            for r in &rows {
                let _ = writeln!(
                    out,
                    "{},{:.6},{},{}",
                    r.min_sup, r.threshold, r.tfidf_cluster_count, r.apriori_cluster_count
                );
            }
            Ok(out)
        }
    }
}

pub fn cmd_eval(config: &RunConfig) -> Result<String> {
    let prepared = prepare(config)?;
    let set = cluster_prepared(&prepared, config.single_min_sup()?)?;
    let report: EvalReport = eval::evaluate(&set, &eval::labels_of(&prepared.docs))?;
    match config.format {
        Format::Json => to_json(&report),
        Format::Csv => {
            let mut out = String::from("cluster,label,precision,recall,f_measure\n");
            for s in &report.per_cluster {
                let _ = writeln!(
                    out,
                    "{},{},{},{},{}",
                    s.cluster_id, s.majority_label, s.precision, s.recall, s.f_measure
                );
            }
            Ok(out)
        }
    }
}

/// One stem per line for each input token.
pub fn cmd_stem<'a>(words: impl IntoIterator<Item = &'a str>) -> String {
    words
        .into_iter()
        .map(|w| porter_stem(&w.trim().to_lowercase()) + "\n")
        .collect()
}
