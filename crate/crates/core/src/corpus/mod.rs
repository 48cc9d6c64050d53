//! Corpus ingestion and keyword extraction.
//!
//! A corpus is a directory of UTF-8 text files, one document per file. Each
//! body goes through tokenizing, stopword removal, an optional keyword
//! filter and Porter stemming before its keyword counts are aggregated into
//! a [`Document`].

mod porter;

use std::collections::{BTreeMap, HashMap, HashSet};
use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use thiserror::Error;

pub use porter::porter_stem;

const SMART_STOPWORDS: &str = include_str!("smart_stopwords.txt");

#[derive(Debug, Error)]
pub enum CorpusError {
    #[error("cannot read corpus directory {path}: {source}")]
    Directory { path: PathBuf, source: std::io::Error },
    #[error("cannot read {path}: {source}")]
    Read { path: PathBuf, source: std::io::Error },
    #[error("{path} is not valid UTF-8")]
    Decode { path: PathBuf },
    #[error("duplicate document id {0}")]
    DuplicateId(String),
    #[error("labels file {path}: {message}")]
    Labels { path: PathBuf, message: String },
}

/// A document as read from disk, before preprocessing.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RawDocument {
    pub id: String,
    pub label: Option<String>,
    pub body: String,
}

/// A preprocessed document: stemmed, stopword-free keyword counts.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Document {
    pub id: String,
    pub label: Option<String>,
    pub counts: BTreeMap<String, u32>,
    pub total_tokens: u32,
}

impl Document {
    /// Builds a document directly from keyword counts. Zero counts are dropped.
    pub fn from_counts<K: Into<String>>(
        id: impl Into<String>,
        label: Option<String>,
        counts: impl IntoIterator<Item = (K, u32)>,
    ) -> Self {
        let mut map = BTreeMap::new();
        for (k, c) in counts {
            if c > 0 {
                *map.entry(k.into()).or_insert(0) += c;
            }
        }
        let total_tokens = map.values().sum();
        Document {
            id: id.into(),
            label,
            counts: map,
            total_tokens,
        }
    }

    pub fn distinct_keywords(&self) -> usize {
        self.counts.len()
    }

    pub fn count(&self, keyword: &str) -> u32 {
        self.counts.get(keyword).copied().unwrap_or(0)
    }

    pub fn contains(&self, keyword: &str) -> bool {
        self.counts.contains_key(keyword)
    }

    pub fn keywords(&self) -> impl Iterator<Item = &str> {
        self.counts.keys().map(String::as_str)
    }
}

/// Predicate deciding whether a (pre-stemming) token may become a keyword.
#[derive(Clone)]
pub struct KeywordFilter {
    name: String,
    predicate: Arc<dyn Fn(&str) -> bool + Send + Sync>,
}

impl KeywordFilter {
    pub fn new(name: impl Into<String>, predicate: impl Fn(&str) -> bool + Send + Sync + 'static) -> Self {
        KeywordFilter {
            name: name.into(),
            predicate: Arc::new(predicate),
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn accepts(&self, token: &str) -> bool {
        (self.predicate)(token)
    }
}

impl fmt::Debug for KeywordFilter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_tuple("KeywordFilter").field(&self.name).finish()
    }
}

#[derive(Debug, Clone)]
pub struct PipelineConfig {
    pub stopwords: HashSet<String>,
    /// `None` passes every token through.
    pub keyword_filter: Option<KeywordFilter>,
    pub min_token_length: usize,
    pub stemming: bool,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        PipelineConfig {
            stopwords: smart_stopwords(),
            keyword_filter: None,
            min_token_length: 2,
            stemming: true,
        }
    }
}

impl PipelineConfig {
    pub fn with_stopwords(mut self, stopwords: HashSet<String>) -> Self {
        self.stopwords = stopwords;
        self
    }

    pub fn with_keyword_filter(mut self, filter: KeywordFilter) -> Self {
        self.keyword_filter = Some(filter);
        self
    }
}

/// The embedded SMART stopword list.
pub fn smart_stopwords() -> HashSet<String> {
    parse_stopwords(SMART_STOPWORDS)
}

/// Parses a newline-delimited stopword list; `#` lines are comments.
pub fn parse_stopwords(text: &str) -> HashSet<String> {
    text.lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
        .map(str::to_lowercase)
        .collect()
}

pub fn load_stopwords(path: &Path) -> Result<HashSet<String>, CorpusError> {
    let bytes = fs::read(path).map_err(|source| CorpusError::Read {
        path: path.to_path_buf(),
        source,
    })?;
    let text = String::from_utf8(bytes).map_err(|_| CorpusError::Decode {
        path: path.to_path_buf(),
    })?;
    Ok(parse_stopwords(&text))
}

/// Reads a `filename,label` CSV without header.
pub fn load_labels(path: &Path) -> Result<HashMap<String, String>, CorpusError> {
    let labels_err = |message: String| CorpusError::Labels {
        path: path.to_path_buf(),
        message,
    };
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .from_path(path)
        .map_err(|e| labels_err(e.to_string()))?;
    let mut labels = HashMap::new();
    for (line, record) in reader.records().enumerate() {
        let record = record.map_err(|e| labels_err(e.to_string()))?;
        if record.len() != 2 {
            return Err(labels_err(format!(
                "line {} has {} fields, expected 2",
                line + 1,
                record.len()
            )));
        }
        labels.insert(record[0].trim().to_string(), record[1].trim().to_string());
    }
    Ok(labels)
}

/// Label implied by a Classic-style filename such as `med.123`.
pub fn label_from_filename(name: &str) -> Option<String> {
    match name.split_once('.') {
        Some((prefix, _)) if !prefix.is_empty() => Some(prefix.to_string()),
        _ => None,
    }
}

/// Loads every regular file of `dir` as a document, sorted by id.
///
/// Labels come from `labels` when given (files absent from it stay
/// unlabeled), otherwise from the filename prefix.
pub fn load_corpus(dir: &Path, labels: Option<&Path>) -> Result<Vec<RawDocument>, CorpusError> {
    let dir_err = |source| CorpusError::Directory {
        path: dir.to_path_buf(),
        source,
    };
    let label_map = labels.map(load_labels).transpose()?;

    let mut docs = Vec::new();
    let mut seen = HashSet::new();
    for entry in fs::read_dir(dir).map_err(dir_err)? {
        let entry = entry.map_err(dir_err)?;
        let path = entry.path();
        let file_type = entry.file_type().map_err(|source| CorpusError::Read {
            path: path.clone(),
            source,
        })?;
        if !file_type.is_file() {
            continue;
        }
        let id = entry
            .file_name()
            .into_string()
            .map_err(|_| CorpusError::Decode { path: path.clone() })?;
        if !seen.insert(id.clone()) {
            return Err(CorpusError::DuplicateId(id));
        }
        let bytes = fs::read(&path).map_err(|source| CorpusError::Read {
            path: path.clone(),
            source,
        })?;
        let body = String::from_utf8(bytes).map_err(|_| CorpusError::Decode { path })?;
        let label = match &label_map {
            Some(map) => map.get(&id).cloned(),
            None => label_from_filename(&id),
        };
        docs.push(RawDocument { id, label, body });
    }
    docs.sort_by(|a, b| a.id.cmp(&b.id));
    Ok(docs)
}

/// Lowercase maximal alphabetic runs of at least `min_token_length` chars.
pub fn tokenize(body: &str, config: &PipelineConfig) -> Vec<String> {
    body.to_lowercase()
        .split(|c: char| !c.is_alphabetic())
        .filter(|t| !t.is_empty() && t.chars().count() >= config.min_token_length)
        .map(str::to_string)
        .collect()
}

/// Maps a token to its keyword, or `None` when the pipeline discards it.
fn keyword_of(token: &str, config: &PipelineConfig) -> Option<String> {
    if config.stopwords.contains(token) {
        return None;
    }
    if let Some(filter) = &config.keyword_filter {
        if !filter.accepts(token) {
            return None;
        }
    }
    if !config.stemming {
        return Some(token.to_string());
    }
    let stem = porter_stem(token);
    // A stem can collide with a stopword ("uses" -> "us").
    if config.stopwords.contains(&stem) {
        None
    } else {
        Some(stem)
    }
}

/// Tokens that survive filtering, before stemming.
pub fn kept_tokens(body: &str, config: &PipelineConfig) -> Vec<String> {
    tokenize(body, config)
        .into_iter()
        .filter(|t| keyword_of(t, config).is_some())
        .collect()
}

/// Keywords of a free-text string in token order (duplicates kept).
pub fn keywords(body: &str, config: &PipelineConfig) -> Vec<String> {
    tokenize(body, config)
        .iter()
        .filter_map(|t| keyword_of(t, config))
        .collect()
}

pub fn preprocess(raw: &RawDocument, config: &PipelineConfig) -> Document {
    Document::from_counts(
        raw.id.clone(),
        raw.label.clone(),
        keywords(&raw.body, config).into_iter().map(|k| (k, 1)),
    )
}

pub fn preprocess_all(raws: &[RawDocument], config: &PipelineConfig) -> Vec<Document> {
    crate::par::map(raws, |raw| preprocess(raw, config))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn no_stopwords() -> PipelineConfig {
        PipelineConfig::default().with_stopwords(HashSet::new())
    }

    #[test]
    fn tokenize_rules() {
        let config = no_stopwords();
        assert!(tokenize("", &config).is_empty());
        assert_eq!(tokenize("The Web, 2 webs.", &config), ["the", "web", "webs"]);
        let one = PipelineConfig {
            min_token_length: 1,
            ..no_stopwords()
        };
        assert_eq!(tokenize("a-b-c", &one), ["a", "b", "c"]);
        assert_eq!(tokenize("a-b-c", &config), Vec::<String>::new());
        assert_eq!(tokenize("x86_64 isn't", &config), ["isn"]);
    }

    #[test]
    fn preprocess_examples() {
        let raw = |body: &str| RawDocument {
            id: "d".into(),
            label: None,
            body: body.into(),
        };
        let the: HashSet<String> = ["the".to_string()].into();
        let config = PipelineConfig::default().with_stopwords(the);
        let doc = preprocess(&raw("the the the"), &config);
        assert_eq!(doc.distinct_keywords(), 0);
        assert_eq!(doc.total_tokens, 0);

        let doc = preprocess(&raw("apple apples"), &config);
        assert_eq!(doc.counts, BTreeMap::from([("appl".to_string(), 2)]));

        let doc = preprocess(&raw("apple banana apple"), &config);
        assert_eq!(doc.count("appl"), 2);
        assert_eq!(doc.count("banana"), 1);
        assert_eq!(doc.total_tokens, 3);
        assert_eq!(doc.distinct_keywords(), 2);
    }

    #[test]
    fn stemmed_stopword_collision_is_dropped() {
        let doc = preprocess(
            &RawDocument {
                id: "d".into(),
                label: None,
                body: "uses cases".into(),
            },
            &PipelineConfig::default(),
        );
        assert!(!doc.contains("us"));
        assert!(doc.contains("case"));
    }

    #[test]
    fn keyword_filter_hook() {
        let config = no_stopwords().with_keyword_filter(KeywordFilter::new("no-b", |t| !t.starts_with('b')));
        assert_eq!(keywords("apple banana cherry", &config), ["appl", "cherri"]);
    }

    #[test]
    fn stemming_can_be_disabled() {
        let config = PipelineConfig {
            stemming: false,
            ..no_stopwords()
        };
        assert_eq!(keywords("apples", &config), ["apples"]);
    }

    #[test]
    fn stopword_parsing() {
        let words = parse_stopwords("# comment\nThe\n\n  and \n");
        assert_eq!(words, HashSet::from(["the".to_string(), "and".to_string()]));
        let smart = smart_stopwords();
        assert!(smart.contains("the") && smart.contains("afterwards"));
        assert!(smart.iter().all(|w| *w == w.to_lowercase()));
    }

    #[test]
    fn filename_labels() {
        assert_eq!(label_from_filename("cacm.1").as_deref(), Some("cacm"));
        assert_eq!(label_from_filename("med.2").as_deref(), Some("med"));
        assert_eq!(label_from_filename("D1"), None);
        assert_eq!(label_from_filename(".hidden"), None);
    }
}
