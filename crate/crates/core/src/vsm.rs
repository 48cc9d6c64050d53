//! Vector space model: vocabulary, tf-idf tables and cosine similarity.
//!
//! All logarithms are base 10. Keywords that occur in every document have
//! idf 0 and never produce a stored table entry, so a stored entry is always
//! strictly positive.

use std::collections::{BTreeMap, HashMap};
use std::hash::Hash;

use thiserror::Error;

use crate::corpus::{self, Document, PipelineConfig};

#[derive(Debug, Error, PartialEq)]
pub enum VsmError {
    #[error("corpus has no documents")]
    EmptyCorpus,
    #[error("keyword {0:?} is not in the vocabulary")]
    UnknownKeyword(String),
    #[error("keyword {keyword:?} does not occur in document {doc}")]
    KeywordNotInDocument { keyword: String, doc: String },
}

/// Sparse row of a [`TfIdfTable`]: column index to weight.
pub type SparseRow = BTreeMap<usize, f64>;

/// Keyword dimension of a corpus with document frequencies.
#[derive(Debug, Clone, PartialEq)]
pub struct Vocabulary {
    keywords: Vec<String>,
    index: HashMap<String, usize>,
    df: Vec<usize>,
    n_docs: usize,
}

impl Vocabulary {
    pub fn build(docs: &[Document]) -> Result<Self, VsmError> {
        if docs.is_empty() {
            return Err(VsmError::EmptyCorpus);
        }
        let mut df: BTreeMap<&str, usize> = BTreeMap::new();
        for doc in docs {
            for k in doc.keywords() {
                *df.entry(k).or_insert(0) += 1;
            }
        }
        let keywords: Vec<String> = df.keys().map(|k| k.to_string()).collect();
        let index = keywords.iter().enumerate().map(|(i, k)| (k.clone(), i)).collect();
        Ok(Vocabulary {
            keywords,
            index,
            df: df.into_values().collect(),
            n_docs: docs.len(),
        })
    }

    pub fn len(&self) -> usize {
        self.keywords.len()
    }

    pub fn is_empty(&self) -> bool {
        self.keywords.is_empty()
    }

    pub fn n_docs(&self) -> usize {
        self.n_docs
    }

    pub fn keywords(&self) -> &[String] {
        &self.keywords
    }

    pub fn keyword(&self, ordinal: usize) -> &str {
        &self.keywords[ordinal]
    }

    pub fn ordinal(&self, keyword: &str) -> Option<usize> {
        self.index.get(keyword).copied()
    }

    pub fn df(&self, keyword: &str) -> Option<usize> {
        self.ordinal(keyword).map(|i| self.df[i])
    }

    pub fn df_of(&self, ordinal: usize) -> usize {
        self.df[ordinal]
    }
}

pub fn idf_value(n_docs: usize, df: usize) -> f64 {
    (n_docs as f64 / df as f64).log10()
}

/// `log10(n_docs / df(keyword))`.
pub fn idf(keyword: &str, vocab: &Vocabulary, n_docs: usize) -> Result<f64, VsmError> {
    let df = vocab
        .df(keyword)
        .ok_or_else(|| VsmError::UnknownKeyword(keyword.to_string()))?;
    Ok(idf_value(n_docs, df))
}

/// Term-frequency definition used when filling a table.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TfMode {
    /// occurrences / total keyword tokens of the document.
    Standard,
    /// 1 / distinct keywords of the document, identical for all its keywords.
    Uniform,
    /// 1 / occurrences, used for itemset rows.
    Itemset,
}

pub fn tf(keyword: &str, doc: &Document, mode: TfMode) -> Result<f64, VsmError> {
    let count = doc.count(keyword);
    if count == 0 {
        return Err(VsmError::KeywordNotInDocument {
            keyword: keyword.to_string(),
            doc: doc.id.clone(),
        });
    }
    Ok(match mode {
        TfMode::Standard => count as f64 / doc.total_tokens as f64,
        TfMode::Uniform => 1.0 / doc.distinct_keywords() as f64,
        TfMode::Itemset => 1.0 / count as f64,
    })
}

/// Sparse rows-by-documents weight table.
#[derive(Debug, Clone)]
pub struct TfIdfTable<R> {
    row_keys: Vec<R>,
    row_index: HashMap<R, usize>,
    col_keys: Vec<String>,
    col_index: HashMap<String, usize>,
    rows: Vec<SparseRow>,
    tf_mode: TfMode,
}

impl<R: PartialEq> PartialEq for TfIdfTable<R> {
    fn eq(&self, other: &Self) -> bool {
        self.row_keys == other.row_keys
            && self.col_keys == other.col_keys
            && self.rows == other.rows
            && self.tf_mode == other.tf_mode
    }
}

impl<R: Clone + Eq + Hash> TfIdfTable<R> {
    /// Assembles a table; non-positive weights are not stored.
    ///
    /// # Panics
    /// If row or column keys repeat, or `rows` and `row_keys` differ in length.
    pub fn new(row_keys: Vec<R>, col_keys: Vec<String>, rows: Vec<SparseRow>, tf_mode: TfMode) -> Self {
        assert_eq!(row_keys.len(), rows.len(), "one sparse row per row key");
        let row_index: HashMap<R, usize> = row_keys.iter().enumerate().map(|(i, k)| (k.clone(), i)).collect();
        assert_eq!(row_index.len(), row_keys.len(), "row keys must be distinct");
        let col_index: HashMap<String, usize> = col_keys.iter().enumerate().map(|(i, k)| (k.clone(), i)).collect();
        assert_eq!(col_index.len(), col_keys.len(), "column keys must be distinct");
        let rows = rows
            .into_iter()
            .map(|mut r| {
                r.retain(|&c, w| c < col_keys.len() && *w > 0.0);
                r
            })
            .collect();
        TfIdfTable {
            row_keys,
            row_index,
            col_keys,
            col_index,
            rows,
            tf_mode,
        }
    }

    pub fn tf_mode(&self) -> TfMode {
        self.tf_mode
    }

    pub fn row_keys(&self) -> &[R] {
        &self.row_keys
    }

    pub fn col_keys(&self) -> &[String] {
        &self.col_keys
    }

    pub fn rows(&self) -> &[SparseRow] {
        &self.rows
    }

    pub fn row(&self, key: &R) -> Option<&SparseRow> {
        self.row_index.get(key).map(|&i| &self.rows[i])
    }

    pub fn column_index(&self, doc_id: &str) -> Option<usize> {
        self.col_index.get(doc_id).copied()
    }

    /// Weight at (row, column); absent entries are 0.
    pub fn get(&self, row: &R, doc_id: &str) -> f64 {
        match (self.row_index.get(row), self.col_index.get(doc_id)) {
            (Some(&r), Some(c)) => self.rows[r].get(c).copied().unwrap_or(0.0),
            _ => 0.0,
        }
    }

    pub fn entry_count(&self) -> usize {
        self.rows.iter().map(BTreeMap::len).sum()
    }

    /// Column vectors, one per document, indexed by row ordinal.
    pub fn document_vectors(&self) -> Vec<DocumentVector> {
        let mut columns: Vec<Vec<(usize, f64)>> = vec![Vec::new(); self.col_keys.len()];
        for (r, row) in self.rows.iter().enumerate() {
            for (&c, &w) in row {
                columns[c].push((r, w));
            }
        }
        self.col_keys
            .iter()
            .zip(columns)
            .map(|(id, weights)| DocumentVector {
                doc_id: id.clone(),
                weights,
            })
            .collect()
    }
}

/// Keyword-by-document tf-idf table over the whole corpus.
pub fn build_keyword_table(docs: &[Document], vocab: &Vocabulary, mode: TfMode) -> TfIdfTable<String> {
    let n = docs.len();
    let mut rows = vec![SparseRow::new(); vocab.len()];
    for (c, doc) in docs.iter().enumerate() {
        for keyword in doc.keywords() {
            let Some(r) = vocab.ordinal(keyword) else {
                continue;
            };
            let idf = idf_value(n, vocab.df_of(r));
            if idf > 0.0 {
                let tf = tf(keyword, doc, mode).expect("keyword taken from the document");
                rows[r].insert(c, tf * idf);
            }
        }
    }
    TfIdfTable::new(
        vocab.keywords().to_vec(),
        docs.iter().map(|d| d.id.clone()).collect(),
        rows,
        mode,
    )
}

/// Sparse document vector; `weights` are sorted by keyword ordinal.
#[derive(Debug, Clone, PartialEq)]
pub struct DocumentVector {
    pub doc_id: String,
    pub weights: Vec<(usize, f64)>,
}

impl DocumentVector {
    /// Builds a vector from unsorted (ordinal, weight) pairs; zero weights are dropped
    /// and repeated ordinals summed.
    pub fn new(doc_id: impl Into<String>, weights: impl IntoIterator<Item = (usize, f64)>) -> Self {
        let mut merged: BTreeMap<usize, f64> = BTreeMap::new();
        for (i, w) in weights {
            *merged.entry(i).or_insert(0.0) += w;
        }
        DocumentVector {
            doc_id: doc_id.into(),
            weights: merged.into_iter().filter(|&(_, w)| w != 0.0).collect(),
        }
    }

    pub fn norm(&self) -> f64 {
        self.weights.iter().map(|(_, w)| w * w).sum::<f64>().sqrt()
    }

    pub fn dot(&self, other: &DocumentVector) -> f64 {
        let (mut i, mut j) = (0, 0);
        let mut sum = 0.0;
        while i < self.weights.len() && j < other.weights.len() {
            let (a, wa) = self.weights[i];
            let (b, wb) = other.weights[j];
            match a.cmp(&b) {
                std::cmp::Ordering::Less => i += 1,
                std::cmp::Ordering::Greater => j += 1,
                std::cmp::Ordering::Equal => {
                    sum += wa * wb;
                    i += 1;
                    j += 1;
                }
            }
        }
        sum
    }

    pub fn scaled(&self, factor: f64) -> DocumentVector {
        DocumentVector {
            doc_id: self.doc_id.clone(),
            weights: self.weights.iter().map(|&(i, w)| (i, w * factor)).collect(),
        }
    }
}

/// `a·b / (|a| |b|)`, or 0 when either vector is zero.
pub fn cosine_similarity(a: &DocumentVector, b: &DocumentVector) -> f64 {
    let denom = a.norm() * b.norm();
    if denom == 0.0 {
        return 0.0;
    }
    (a.dot(b) / denom).min(1.0)
}

/// Preprocessed user query terms.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Query {
    pub terms: Vec<String>,
}

impl Query {
    pub fn new(terms: Vec<String>) -> Self {
        Query { terms }
    }

    /// Runs `text` through the same pipeline as the corpus.
    pub fn parse(text: &str, config: &PipelineConfig) -> Self {
        Query {
            terms: corpus::keywords(text, config),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Query as a vector in the corpus keyword space (standard tf × idf).
    /// Terms outside the vocabulary are ignored.
    pub fn to_vector(&self, vocab: &Vocabulary) -> DocumentVector {
        let p = self.terms.len() as f64;
        DocumentVector::new(
            "query",
            self.terms.iter().filter_map(|t| {
                let i = vocab.ordinal(t)?;
                Some((i, idf_value(vocab.n_docs(), vocab.df_of(i)) / p))
            }),
        )
    }
}

/// Sum of the table weights of every query term in `doc_id`. Repeated terms
/// count repeatedly.
pub fn query_score(query: &Query, doc_id: &str, table: &TfIdfTable<String>) -> f64 {
    query.terms.iter().map(|t| table.get(t, doc_id)).sum()
}
