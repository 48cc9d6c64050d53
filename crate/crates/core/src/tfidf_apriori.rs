//! Tf-idf based Apriori clustering.
//!
//! A single threshold derived from the minimum support,
//! `(1 / min_sup) * log10(N / min_sup)`, drives everything:
//!
//! * Level 1 seeds with keywords whose uniform-tf keyword-table row has a
//!   positive entry at or below the threshold.
//! * Level `n >= 2` joins the previous survivors Apriori-style. Each
//!   candidate itemset gets a row `tf * idf` over the live documents, with
//!   `tf = 1 / occurrences` (the smallest count of any member keyword) and
//!   `idf = log10(live / df)`. A row survives if its smallest stored entry
//!   is at or below the threshold.
//! * After row elimination, any live document whose column holds no entry
//!   at or below the threshold among the survivors is eliminated for good.
//!
//! The loop stops at the first level without survivors. Clusters are the
//! survivors of the last non-empty level (size two or more), each mapped to
//! the live documents containing all of its keywords.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::apriori::{generate_candidates, Itemset};
use crate::corpus::Document;
use crate::par;
use crate::vsm::{build_keyword_table, idf_value, SparseRow, TfIdfTable, TfMode, Vocabulary};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ClusterError {
    #[error("corpus has no documents")]
    EmptyCorpus,
    #[error("minimum support {min_sup} must lie in 1..={n_docs}")]
    InvalidSupport { min_sup: usize, n_docs: usize },
    #[error("threshold configured for {configured} documents but corpus has {actual}")]
    CorpusSizeMismatch { configured: usize, actual: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ThresholdConfig {
    min_sup: usize,
    n_docs: usize,
}

impl ThresholdConfig {
    pub fn new(min_sup: usize, n_docs: usize) -> Result<Self, ClusterError> {
        if min_sup == 0 || min_sup > n_docs {
            return Err(ClusterError::InvalidSupport { min_sup, n_docs });
        }
        Ok(ThresholdConfig { min_sup, n_docs })
    }

    pub fn min_sup(&self) -> usize {
        self.min_sup
    }

    pub fn n_docs(&self) -> usize {
        self.n_docs
    }

    pub fn threshold(&self) -> f64 {
        threshold(self)
    }
}

/// `(1 / min_sup) * log10(n_docs / min_sup)`.
pub fn threshold(config: &ThresholdConfig) -> f64 {
    let min_sup = config.min_sup as f64;
    (1.0 / min_sup) * (config.n_docs as f64 / min_sup).log10()
}

/// Keyword ordinals and counts of one document, sorted by ordinal.
struct KeywordCounts(Vec<(usize, u32)>);

impl KeywordCounts {
    fn new(doc: &Document, vocab: &Vocabulary) -> Self {
        // Document keys are sorted and vocabulary ordinals follow key order.
        KeywordCounts(
            doc.counts
                .iter()
                .filter_map(|(k, &c)| vocab.ordinal(k).map(|i| (i, c)))
                .collect(),
        )
    }

    /// Occurrences of the whole itemset: the smallest member count, or
    /// `None` if some member is missing.
    fn occurrences(&self, itemset: &Itemset) -> Option<u32> {
        let mut rest = self.0.iter();
        itemset
            .items()
            .iter()
            .map(|item| rest.find(|(i, _)| i == item).map(|&(_, c)| c))
            .try_fold(u32::MAX, |acc, c| c.map(|c| acc.min(c)))
    }
}

/// Itemset row over the documents at positions `live` of `counts`; row keys
/// are positions within `live`.
fn itemset_row_over(itemset: &Itemset, counts: &[KeywordCounts], live: &[usize]) -> SparseRow {
    let hits: Vec<(usize, u32)> = live
        .iter()
        .enumerate()
        .filter_map(|(pos, &d)| counts[d].occurrences(itemset).map(|o| (pos, o)))
        .collect();
    if hits.is_empty() {
        return SparseRow::new();
    }
    let idf = idf_value(live.len(), hits.len());
    if idf <= 0.0 {
        return SparseRow::new();
    }
    hits.into_iter()
        .map(|(pos, occ)| (pos, (1.0 / occ as f64) * idf))
        .collect()
}

/// Itemset-mode tf-idf row of `itemset` over the whole corpus, keyed by
/// document position.
pub fn itemset_weight_row(itemset: &Itemset, docs: &[Document], vocab: &Vocabulary) -> SparseRow {
    let counts: Vec<KeywordCounts> = docs.iter().map(|d| KeywordCounts::new(d, vocab)).collect();
    let live: Vec<usize> = (0..docs.len()).collect();
    itemset_row_over(itemset, &counts, &live)
}

/// A row survives when it has a stored entry and its smallest one is at
/// most `threshold`.
pub fn row_survives(row: &SparseRow, threshold: f64) -> bool {
    row.values()
        .copied()
        .reduce(f64::min)
        .is_some_and(|min| min > 0.0 && min <= threshold)
}

/// One level of the generation loop.
#[derive(Debug, Clone, PartialEq)]
pub struct LevelState {
    pub n: usize,
    pub survivors: Vec<Itemset>,
    /// Live document ids after this level's column elimination.
    pub alive_docs: BTreeSet<String>,
    /// Itemset-by-document table of every candidate of the level, over the
    /// documents live when the level started.
    pub table: TfIdfTable<Itemset>,
}

/// Columns of `level.table` with no entry in `(0, threshold]` among the
/// surviving rows.
pub fn eliminate_columns(level: &LevelState, threshold: f64) -> BTreeSet<String> {
    let mut covered = vec![false; level.table.col_keys().len()];
    for survivor in &level.survivors {
        if let Some(row) = level.table.row(survivor) {
            for (&c, &w) in row {
                if w > 0.0 && w <= threshold {
                    covered[c] = true;
                }
            }
        }
    }
    level
        .table
        .col_keys()
        .iter()
        .zip(covered)
        .filter(|(_, keep)| !keep)
        .map(|(id, _)| id.clone())
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Cluster {
    pub id: usize,
    /// Defining keywords, sorted.
    pub itemset: Vec<String>,
    /// Member document ids, sorted.
    pub documents: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClusterSet {
    pub threshold: f64,
    pub min_sup: usize,
    pub n_docs: usize,
    /// Levels that produced survivors.
    pub levels_run: usize,
    pub clusters: Vec<Cluster>,
    pub unclustered: Vec<String>,
}

/// Runs the level loop and returns every level that produced survivors.
pub fn run_levels(
    docs: &[Document],
    vocab: &Vocabulary,
    config: &ThresholdConfig,
) -> Result<Vec<LevelState>, ClusterError> {
    if docs.is_empty() {
        return Err(ClusterError::EmptyCorpus);
    }
    if config.n_docs() != docs.len() {
        return Err(ClusterError::CorpusSizeMismatch {
            configured: config.n_docs(),
            actual: docs.len(),
        });
    }
    let thr = config.threshold();
    let ids: Vec<String> = docs.iter().map(|d| d.id.clone()).collect();
    let counts: Vec<KeywordCounts> = docs.iter().map(|d| KeywordCounts::new(d, vocab)).collect();

    let keyword_table = build_keyword_table(docs, vocab, TfMode::Uniform);
    let singletons: Vec<Itemset> = (0..vocab.len()).map(Itemset::singleton).collect();
    let first = LevelState {
        n: 1,
        survivors: singletons
            .iter()
            .zip(keyword_table.rows())
            .filter(|(_, row)| row_survives(row, thr))
            .map(|(s, _)| s.clone())
            .collect(),
        alive_docs: ids.iter().cloned().collect(),
        table: TfIdfTable::new(singletons, ids.clone(), keyword_table.rows().to_vec(), TfMode::Uniform),
    };
    if first.survivors.is_empty() {
        return Ok(Vec::new());
    }

    let mut live: Vec<usize> = (0..docs.len()).collect();
    let mut levels = vec![first];
    loop {
        let prev = levels.last().expect("at least one level");
        let candidates = generate_candidates(&prev.survivors);
        if candidates.is_empty() {
            break;
        }
        let rows = par::map(&candidates, |c| itemset_row_over(c, &counts, &live));
        let survivors: Vec<Itemset> = candidates
            .iter()
            .zip(&rows)
            .filter(|(_, row)| row_survives(row, thr))
            .map(|(c, _)| c.clone())
            .collect();
        if survivors.is_empty() {
            break;
        }
        let live_ids: Vec<String> = live.iter().map(|&d| ids[d].clone()).collect();
        let mut state = LevelState {
            n: prev.n + 1,
            survivors,
            alive_docs: BTreeSet::new(),
            table: TfIdfTable::new(candidates, live_ids, rows, TfMode::Itemset),
        };
        let dropped = eliminate_columns(&state, thr);
        live.retain(|&d| !dropped.contains(&ids[d]));
        state.alive_docs = live.iter().map(|&d| ids[d].clone()).collect();
        levels.push(state);
    }
    Ok(levels)
}

/// Clusters `docs` (which `vocab` must have been built from).
pub fn cluster(docs: &[Document], vocab: &Vocabulary, config: &ThresholdConfig) -> Result<ClusterSet, ClusterError> {
    let levels = run_levels(docs, vocab, config)?;
    let mut groups: BTreeMap<Vec<String>, &Itemset> = BTreeMap::new();
    if let Some(last) = levels.last().filter(|l| l.n >= 2) {
        let counts: Vec<KeywordCounts> = docs.iter().map(|d| KeywordCounts::new(d, vocab)).collect();
        // Survivors are visited in ascending order, so the first itemset
        // seen for a document set is the smallest.
        let mut survivors: Vec<&Itemset> = last.survivors.iter().collect();
        survivors.sort();
        for itemset in survivors {
            let mut members: Vec<String> = docs
                .iter()
                .zip(&counts)
                .filter(|(d, c)| last.alive_docs.contains(&d.id) && c.occurrences(itemset).is_some())
                .map(|(d, _)| d.id.clone())
                .collect();
            if members.is_empty() {
                continue;
            }
            members.sort();
            groups.entry(members).or_insert(itemset);
        }
    }

    let mut by_itemset: Vec<(&Itemset, Vec<String>)> = groups.into_iter().map(|(m, s)| (s, m)).collect();
    by_itemset.sort();
    let clusters: Vec<Cluster> = by_itemset
        .into_iter()
        .enumerate()
        .map(|(i, (itemset, documents))| Cluster {
            id: i + 1,
            itemset: itemset.items().iter().map(|&k| vocab.keyword(k).to_string()).collect(),
            documents,
        })
        .collect();

    let clustered: BTreeSet<&str> = clusters
        .iter()
        .flat_map(|c| c.documents.iter().map(String::as_str))
        .collect();
    let mut unclustered: Vec<String> = docs
        .iter()
        .map(|d| d.id.clone())
        .filter(|id| !clustered.contains(id.as_str()))
        .collect();
    unclustered.sort();

    Ok(ClusterSet {
        threshold: config.threshold(),
        min_sup: config.min_sup(),
        n_docs: config.n_docs(),
        levels_run: levels.len(),
        clusters,
        unclustered,
    })
}
