//! Cluster quality against class labels, and the cluster-count sweep
//! comparing tf-idf Apriori with the classic Apriori baseline.

use std::collections::{BTreeMap, HashMap};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::apriori::{self, AprioriError, TransactionDb};
use crate::corpus::Document;
use crate::par;
use crate::tfidf_apriori::{self, ClusterError, ClusterSet, ThresholdConfig};
use crate::vsm::Vocabulary;

#[derive(Debug, Error, PartialEq)]
pub enum EvalError {
    #[error("{name} = {value} lies outside [0, 1]")]
    OutOfRange { name: &'static str, value: f64 },
    #[error("document {0} has no label")]
    Unlabeled(String),
    #[error("cluster has no members")]
    EmptyCluster,
    #[error("no minimum support values given")]
    EmptySweep,
    #[error(transparent)]
    Cluster(#[from] ClusterError),
    #[error(transparent)]
    Apriori(#[from] AprioriError),
}

/// Harmonic mean of precision and recall; 0 when both are 0.
pub fn f_measure(precision: f64, recall: f64) -> Result<f64, EvalError> {
    for (name, value) in [("precision", precision), ("recall", recall)] {
        if !(0.0..=1.0).contains(&value) {
            return Err(EvalError::OutOfRange { name, value });
        }
    }
    if precision + recall == 0.0 {
        return Ok(0.0);
    }
    Ok(2.0 * precision * recall / (precision + recall))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClusterScore {
    pub cluster_id: usize,
    pub majority_label: String,
    pub precision: f64,
    pub recall: f64,
    pub f_measure: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvalReport {
    pub per_cluster: Vec<ClusterScore>,
    pub macro_average_f: f64,
}

/// Scores one cluster against the majority label of its members (ties go to
/// the lexicographically smallest label). Recall is relative to every
/// document in `labels` carrying that label.
pub fn score_cluster(
    members: &[String],
    labels: &HashMap<String, String>,
) -> Result<(String, f64, f64, f64), EvalError> {
    if members.is_empty() {
        return Err(EvalError::EmptyCluster);
    }
    let mut tally: BTreeMap<&str, usize> = BTreeMap::new();
    for id in members {
        let label = labels.get(id).ok_or_else(|| EvalError::Unlabeled(id.clone()))?;
        *tally.entry(label).or_insert(0) += 1;
    }
    // BTreeMap iterates labels ascending; keep the first maximum.
    let (label, hits) = tally
        .iter()
        .fold(None, |best: Option<(&str, usize)>, (&l, &c)| match best {
            Some((_, bc)) if bc >= c => best,
            _ => Some((l, c)),
        })
        .expect("non-empty cluster");
    let class_size = labels.values().filter(|l| l.as_str() == label).count();
    let precision = hits as f64 / members.len() as f64;
    let recall = hits as f64 / class_size as f64;
    Ok((label.to_string(), precision, recall, f_measure(precision, recall)?))
}

pub fn evaluate(clusters: &ClusterSet, labels: &HashMap<String, String>) -> Result<EvalReport, EvalError> {
    let per_cluster = clusters
        .clusters
        .iter()
        .map(|c| {
            let (majority_label, precision, recall, f) = score_cluster(&c.documents, labels)?;
            Ok(ClusterScore {
                cluster_id: c.id,
                majority_label,
                precision,
                recall,
                f_measure: f,
            })
        })
        .collect::<Result<Vec<_>, EvalError>>()?;
    let macro_average_f = if per_cluster.is_empty() {
        0.0
    } else {
        per_cluster.iter().map(|s| s.f_measure).sum::<f64>() / per_cluster.len() as f64
    };
    Ok(EvalReport {
        per_cluster,
        macro_average_f,
    })
}

/// Labels of `docs` keyed by id; unlabeled documents are left out.
pub fn labels_of(docs: &[Document]) -> HashMap<String, String> {
    docs.iter()
        .filter_map(|d| d.label.clone().map(|l| (d.id.clone(), l)))
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub min_sup: usize,
    pub threshold: f64,
    pub tfidf_cluster_count: usize,
    pub apriori_cluster_count: usize,
}

/// Cluster counts of both methods for every `min_sups` value, in input order.
pub fn sweep(docs: &[Document], vocab: &Vocabulary, min_sups: &[usize]) -> Result<Vec<SweepRow>, EvalError> {
    if min_sups.is_empty() {
        return Err(EvalError::EmptySweep);
    }
    let configs = min_sups
        .iter()
        .map(|&m| ThresholdConfig::new(m, docs.len()))
        .collect::<Result<Vec<_>, _>>()?;
    let db = TransactionDb::from_documents(docs, vocab);
    par::map(&configs, |config| {
        let clusters = tfidf_apriori::cluster(docs, vocab, config)?;
        let levels = apriori::mine(&db, config.min_sup())?;
        Ok(SweepRow {
            min_sup: config.min_sup(),
            threshold: config.threshold(),
            tfidf_cluster_count: clusters.clusters.len(),
            apriori_cluster_count: apriori::deepest_level_clusters(&levels, &db).len(),
        })
    })
    .into_iter()
    .collect()
}
