//! Document clustering and ranking with a tf-idf driven Apriori.
//!
//! The pipeline is:
//!
//! 1. [`corpus`]: load a directory of text files and reduce each one to
//!    stemmed keyword counts.
//! 2. [`vsm`]: vocabulary, tf-idf tables and cosine similarity.
//! 3. [`tfidf_apriori`]: level-wise itemset generation where rows (itemsets)
//!    and columns (documents) of the tf-idf table are eliminated against a
//!    support-derived threshold; the surviving itemsets define clusters.
//! 4. [`ranking`]: order each cluster's members by query relevance times
//!    their similarity factor within the cluster.
//! 5. [`eval`]: precision/recall/F-measure against class labels, and a
//!    cluster-count sweep against the classic [`apriori`] baseline.

pub mod apriori;
pub mod corpus;
pub mod eval;
pub mod par;
pub mod ranking;
pub mod tfidf_apriori;
pub mod vsm;

pub use apriori::{FrequentLevel, Itemset, TransactionDb};
pub use corpus::{Document, PipelineConfig, RawDocument};
pub use eval::{EvalReport, SweepRow};
pub use ranking::RankedDocument;
pub use tfidf_apriori::{Cluster, ClusterSet, ThresholdConfig};
pub use vsm::{DocumentVector, Query, TfIdfTable, TfMode, Vocabulary};
