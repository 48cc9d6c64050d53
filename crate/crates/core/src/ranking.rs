//! Per-cluster ranking.
//!
//! Each member gets a similarity factor, the sum over the other members of
//! keyword-set Jaccard overlap times cosine similarity, and is ranked by
//! `query tf-idf sum * similarity factor`.

use std::collections::{BTreeSet, HashMap};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::corpus::Document;
use crate::par;
use crate::tfidf_apriori::ClusterSet;
use crate::vsm::{
    build_keyword_table, cosine_similarity, query_score, DocumentVector, Query, TfIdfTable, TfMode, Vocabulary,
};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum RankingError {
    #[error("document {0} is not part of the ranked corpus")]
    UnknownDocument(String),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RankedDocument {
    pub doc_id: String,
    pub simfact: f64,
    pub query_score: f64,
    pub rank_value: f64,
    /// 1 is best.
    pub position: usize,
}

/// Symmetric matrix of cosine similarities; the diagonal is 1 for non-zero
/// vectors and 0 for zero vectors.
pub fn pairwise_cosines(vectors: &[&DocumentVector]) -> Vec<Vec<f64>> {
    let n = vectors.len();
    let upper: Vec<Vec<f64>> = par::map_range(n, |i| {
        (i + 1..n).map(|j| cosine_similarity(vectors[i], vectors[j])).collect()
    });
    let mut m = vec![vec![0.0; n]; n];
    for (i, row) in upper.into_iter().enumerate() {
        m[i][i] = if vectors[i].weights.is_empty() { 0.0 } else { 1.0 };
        for (offset, c) in row.into_iter().enumerate() {
            let j = i + 1 + offset;
            m[i][j] = c;
            m[j][i] = c;
        }
    }
    m
}

/// Shared over union of the two keyword sets; 0 when both are empty.
pub fn keyword_jaccard(a: &Document, b: &Document) -> f64 {
    let a: BTreeSet<&str> = a.keywords().collect();
    let b: BTreeSet<&str> = b.keywords().collect();
    let union = a.union(&b).count();
    if union == 0 {
        return 0.0;
    }
    a.intersection(&b).count() as f64 / union as f64
}

/// Similarity factor of `members[k]`. A lone member scores 1.
pub fn simfact(k: usize, members: &[&Document], cosines: &[Vec<f64>]) -> f64 {
    if members.len() == 1 {
        return 1.0;
    }
    // Peers are summed in id order so the value does not depend on how the
    // members were listed.
    let mut peers: Vec<usize> = (0..members.len()).filter(|&m| m != k).collect();
    peers.sort_by(|&a, &b| members[a].id.cmp(&members[b].id));
    peers
        .into_iter()
        .map(|m| keyword_jaccard(members[k], members[m]) * cosines[k][m])
        .sum()
}

/// Ranks one cluster. `vectors[i]` must be the vector of `members[i]`, and
/// `table` the keyword table the query is scored against.
pub fn rank_cluster(
    members: &[&Document],
    vectors: &[&DocumentVector],
    query: &Query,
    table: &TfIdfTable<String>,
) -> Vec<RankedDocument> {
    let cosines = pairwise_cosines(vectors);
    let mut ranked: Vec<RankedDocument> = members
        .iter()
        .enumerate()
        .map(|(k, doc)| {
            let simfact = simfact(k, members, &cosines);
            let query_score = query_score(query, &doc.id, table);
            RankedDocument {
                doc_id: doc.id.clone(),
                simfact,
                query_score,
                rank_value: query_score * simfact,
                position: 0,
            }
        })
        .collect();
    ranked.sort_by(|a, b| {
        b.rank_value
            .total_cmp(&a.rank_value)
            .then_with(|| a.doc_id.cmp(&b.doc_id))
    });
    for (i, r) in ranked.iter_mut().enumerate() {
        r.position = i + 1;
    }
    ranked
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClusterRanking {
    pub cluster_id: usize,
    pub itemset: Vec<String>,
    pub members: Vec<RankedDocument>,
}

/// Corpus-wide tf-idf table and document vectors used to rank clusters.
pub struct Ranker<'a> {
    docs: &'a [Document],
    by_id: HashMap<&'a str, usize>,
    table: TfIdfTable<String>,
    vectors: Vec<DocumentVector>,
}

impl<'a> Ranker<'a> {
    pub fn new(docs: &'a [Document], vocab: &Vocabulary, mode: TfMode) -> Self {
        let table = build_keyword_table(docs, vocab, mode);
        let vectors = table.document_vectors();
        Ranker {
            docs,
            by_id: docs.iter().enumerate().map(|(i, d)| (d.id.as_str(), i)).collect(),
            table,
            vectors,
        }
    }

    pub fn table(&self) -> &TfIdfTable<String> {
        &self.table
    }

    pub fn rank(&self, member_ids: &[String], query: &Query) -> Result<Vec<RankedDocument>, RankingError> {
        let idx = member_ids
            .iter()
            .map(|id| {
                self.by_id
                    .get(id.as_str())
                    .copied()
                    .ok_or_else(|| RankingError::UnknownDocument(id.clone()))
            })
            .collect::<Result<Vec<usize>, _>>()?;
        let members: Vec<&Document> = idx.iter().map(|&i| &self.docs[i]).collect();
        let vectors: Vec<&DocumentVector> = idx.iter().map(|&i| &self.vectors[i]).collect();
        Ok(rank_cluster(&members, &vectors, query, &self.table))
    }

    pub fn rank_all(&self, clusters: &ClusterSet, query: &Query) -> Result<Vec<ClusterRanking>, RankingError> {
        par::map(&clusters.clusters, |c| {
            Ok(ClusterRanking {
                cluster_id: c.id,
                itemset: c.itemset.clone(),
                members: self.rank(&c.documents, query)?,
            })
        })
        .into_iter()
        .collect()
    }
}
