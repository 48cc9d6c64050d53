//! Classic level-wise Apriori over keyword transactions.
//!
//! Items are keyword ordinals and each document is one transaction.

use std::collections::{BTreeMap, BTreeSet, HashSet};
use std::fmt;

use thiserror::Error;

use crate::corpus::Document;
use crate::par;
use crate::vsm::Vocabulary;

/// Largest item universe the exhaustive miner accepts.
pub const BRUTE_FORCE_MAX_ITEMS: usize = 20;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum AprioriError {
    #[error("minimum support must be at least 1")]
    ZeroSupport,
    #[error("item universe of {0} exceeds the brute-force limit of {BRUTE_FORCE_MAX_ITEMS}")]
    UniverseTooLarge(usize),
}

/// Non-empty, strictly ascending set of item ordinals.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Itemset(Vec<usize>);

impl Itemset {
    /// Sorts and deduplicates `items`. Returns `None` when empty.
    pub fn new(mut items: Vec<usize>) -> Option<Self> {
        items.sort_unstable();
        items.dedup();
        (!items.is_empty()).then_some(Itemset(items))
    }

    pub fn singleton(item: usize) -> Self {
        Itemset(vec![item])
    }

    pub fn items(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// True when every item of `self` is in the sorted slice `sorted`.
    pub fn is_subset_of(&self, sorted: &[usize]) -> bool {
        let mut rest = sorted.iter();
        self.0.iter().all(|item| rest.any(|x| x == item))
    }

    /// All subsets obtained by removing one item.
    pub fn drop_one_subsets(&self) -> impl Iterator<Item = Itemset> + '_ {
        (0..self.0.len()).filter(|_| self.0.len() > 1).map(move |skip| {
            Itemset(
                self.0
                    .iter()
                    .enumerate()
                    .filter(|&(i, _)| i != skip)
                    .map(|(_, &x)| x)
                    .collect(),
            )
        })
    }
}

impl fmt::Debug for Itemset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(&self.0).finish()
    }
}

/// One transaction per document; each transaction is a sorted item list.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TransactionDb {
    transactions: Vec<Vec<usize>>,
    n_items: usize,
}

impl TransactionDb {
    /// # Panics
    /// If an item is not below `n_items`.
    pub fn new(transactions: Vec<Vec<usize>>, n_items: usize) -> Self {
        let transactions = transactions
            .into_iter()
            .map(|mut t| {
                t.sort_unstable();
                t.dedup();
                assert!(t.iter().all(|&i| i < n_items), "item outside universe");
                t
            })
            .collect();
        TransactionDb { transactions, n_items }
    }

    pub fn from_documents(docs: &[Document], vocab: &Vocabulary) -> Self {
        let transactions = docs
            .iter()
            .map(|d| d.keywords().filter_map(|k| vocab.ordinal(k)).collect())
            .collect();
        TransactionDb::new(transactions, vocab.len())
    }

    pub fn transactions(&self) -> &[Vec<usize>] {
        &self.transactions
    }

    pub fn len(&self) -> usize {
        self.transactions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.transactions.is_empty()
    }

    pub fn n_items(&self) -> usize {
        self.n_items
    }

    /// Indices of the transactions containing `itemset`.
    pub fn supporting(&self, itemset: &Itemset) -> Vec<usize> {
        self.transactions
            .iter()
            .enumerate()
            .filter(|(_, t)| itemset.is_subset_of(t))
            .map(|(i, _)| i)
            .collect()
    }
}

pub fn support(itemset: &Itemset, db: &TransactionDb) -> usize {
    db.transactions.iter().filter(|t| itemset.is_subset_of(t)).count()
}

/// Frequent itemsets of one size with their supports.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FrequentLevel {
    pub k: usize,
    pub itemsets: BTreeMap<Itemset, usize>,
}

impl FrequentLevel {
    pub fn is_empty(&self) -> bool {
        self.itemsets.is_empty()
    }
}

/// Join step followed by the prune step over a sorted list of same-size
/// itemsets: pairs sharing all but their last item are merged, and a merged
/// candidate is kept only if each of its one-smaller subsets is in `prev`.
pub fn generate_candidates(prev: &[Itemset]) -> Vec<Itemset> {
    let known: HashSet<&Itemset> = prev.iter().collect();
    let mut sorted: Vec<&Itemset> = prev.iter().collect();
    sorted.sort();
    sorted.dedup();

    let mut out = Vec::new();
    for (i, a) in sorted.iter().enumerate() {
        let (a_prefix, a_last) = a.0.split_at(a.0.len() - 1);
        for b in &sorted[i + 1..] {
            let (b_prefix, b_last) = b.0.split_at(b.0.len() - 1);
            // Sorted order groups shared prefixes contiguously.
            if a_prefix != b_prefix {
                break;
            }
            let mut items = a.0.clone();
            items.push(b_last[0]);
            debug_assert!(a_last[0] < b_last[0]);
            let candidate = Itemset(items);
            if candidate.drop_one_subsets().all(|s| known.contains(&s)) {
                out.push(candidate);
            }
        }
    }
    out
}

pub fn join_and_prune(prev: &FrequentLevel) -> Vec<Itemset> {
    let itemsets: Vec<Itemset> = prev.itemsets.keys().cloned().collect();
    generate_candidates(&itemsets)
}

fn count_level(candidates: &[Itemset], db: &TransactionDb, min_sup: usize, k: usize) -> FrequentLevel {
    let supports = par::map(candidates, |c| support(c, db));
    FrequentLevel {
        k,
        itemsets: candidates
            .iter()
            .cloned()
            .zip(supports)
            .filter(|&(_, s)| s >= min_sup)
            .collect(),
    }
}

/// All frequent levels `L1, L2, ...`; empty levels are not returned.
pub fn mine(db: &TransactionDb, min_sup: usize) -> Result<Vec<FrequentLevel>, AprioriError> {
    if min_sup == 0 {
        return Err(AprioriError::ZeroSupport);
    }
    let singletons: Vec<Itemset> = (0..db.n_items()).map(Itemset::singleton).collect();
    let mut levels = Vec::new();
    let mut current = count_level(&singletons, db, min_sup, 1);
    while !current.is_empty() {
        let candidates = join_and_prune(&current);
        let k = current.k + 1;
        levels.push(current);
        if candidates.is_empty() {
            break;
        }
        current = count_level(&candidates, db, min_sup, k);
    }
    Ok(levels)
}

/// Exhaustive reference miner over all `2^n - 1` itemsets.
pub fn brute_force_frequent(db: &TransactionDb, min_sup: usize) -> Result<Vec<FrequentLevel>, AprioriError> {
    if min_sup == 0 {
        return Err(AprioriError::ZeroSupport);
    }
    let n = db.n_items();
    if n > BRUTE_FORCE_MAX_ITEMS {
        return Err(AprioriError::UniverseTooLarge(n));
    }
    let masks: Vec<u32> = db
        .transactions()
        .iter()
        .map(|t| t.iter().fold(0u32, |m, &i| m | (1 << i)))
        .collect();
    let mut by_size: BTreeMap<usize, BTreeMap<Itemset, usize>> = BTreeMap::new();
    for subset in 1u32..(1u32 << n) {
        let count = masks.iter().filter(|&&m| m & subset == subset).count();
        if count >= min_sup {
            let items: Vec<usize> = (0..n).filter(|&i| subset & (1 << i) != 0).collect();
            by_size.entry(items.len()).or_default().insert(Itemset(items), count);
        }
    }
    Ok(by_size
        .into_iter()
        .map(|(k, itemsets)| FrequentLevel { k, itemsets })
        .collect())
}

/// Baseline cluster count: the itemsets of the deepest level mapped to their
/// supporting transaction sets, with identical sets counted once.
pub fn deepest_level_clusters(levels: &[FrequentLevel], db: &TransactionDb) -> Vec<Vec<usize>> {
    let Some(deepest) = levels.iter().rev().find(|l| !l.is_empty()) else {
        return Vec::new();
    };
    let sets: BTreeSet<Vec<usize>> = deepest.itemsets.keys().map(|s| db.supporting(s)).collect();
    sets.into_iter().collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(items: &[usize]) -> Itemset {
        Itemset::new(items.to_vec()).unwrap()
    }

    const A: usize = 0;
    const B: usize = 1;
    const C: usize = 2;

    fn abc_db() -> TransactionDb {
        TransactionDb::new(
            vec![vec![A, B, C], vec![A, B], vec![A, C], vec![B, C], vec![A, B, C]],
            3,
        )
    }

    fn level(k: usize, entries: &[(&[usize], usize)]) -> FrequentLevel {
        FrequentLevel {
            k,
            itemsets: entries.iter().map(|&(s, c)| (set(s), c)).collect(),
        }
    }

    #[test]
    fn itemset_normalizes() {
        assert_eq!(Itemset::new(vec![3, 1, 3]).unwrap().items(), [1, 3]);
        assert!(Itemset::new(vec![]).is_none());
        assert!(set(&[1, 3]).is_subset_of(&[0, 1, 2, 3]));
        assert!(!set(&[1, 4]).is_subset_of(&[0, 1, 2, 3]));
    }

    #[test]
    fn support_examples() {
        let db = TransactionDb::new(vec![vec![0], vec![0, 1], vec![0], vec![1], vec![0]], 3);
        assert_eq!(support(&set(&[0]), &db), 4);
        assert_eq!(support(&set(&[A, B]), &abc_db()), 3);
        assert_eq!(support(&set(&[2]), &db), 0);
    }

    #[test]
    fn candidate_generation() {
        let l1 = level(1, &[(&[A], 1), (&[B], 1), (&[C], 1)]);
        assert_eq!(join_and_prune(&l1), vec![set(&[A, B]), set(&[A, C]), set(&[B, C])]);
        let l2 = level(2, &[(&[A, B], 1), (&[A, C], 1), (&[B, C], 1)]);
        assert_eq!(join_and_prune(&l2), vec![set(&[A, B, C])]);
        let l2 = level(2, &[(&[A, B], 1), (&[A, C], 1)]);
        assert!(join_and_prune(&l2).is_empty());
    }

    #[test]
    fn mine_abc() {
        let levels = mine(&abc_db(), 3).unwrap();
        assert_eq!(
            levels,
            vec![
                level(1, &[(&[A], 4), (&[B], 4), (&[C], 4)]),
                level(2, &[(&[A, B], 3), (&[A, C], 3), (&[B, C], 3)]),
            ]
        );
        assert_eq!(levels, brute_force_frequent(&abc_db(), 3).unwrap());
    }

    #[test]
    fn mine_edges() {
        assert_eq!(mine(&abc_db(), 0), Err(AprioriError::ZeroSupport));
        assert!(mine(&abc_db(), 6).unwrap().is_empty());
        let single = TransactionDb::new(vec![vec![0]], 1);
        assert_eq!(mine(&single, 1).unwrap(), vec![level(1, &[(&[0], 1)])]);
        assert_eq!(brute_force_frequent(&single, 1).unwrap(), vec![level(1, &[(&[0], 1)])]);
        let empty = TransactionDb::new(vec![], 3);
        assert!(brute_force_frequent(&empty, 1).unwrap().is_empty());
        assert!(mine(&empty, 1).unwrap().is_empty());
        let wide = TransactionDb::new(vec![], 21);
        assert_eq!(brute_force_frequent(&wide, 1), Err(AprioriError::UniverseTooLarge(21)));
    }

    #[test]
    fn from_documents_orientation() {
        let docs = vec![
            Document::from_counts("x", None, [("a", 1), ("b", 1)]),
            Document::from_counts("y", None, [("b", 1)]),
            Document::from_counts("z", None, Vec::<(&str, u32)>::new()),
        ];
        let vocab = Vocabulary::build(&docs).unwrap();
        let db = TransactionDb::from_documents(&docs, &vocab);
        assert_eq!(db.transactions(), [vec![0, 1], vec![1], vec![]]);
    }

    #[test]
    fn baseline_cluster_count() {
        let db = abc_db();
        let levels = mine(&db, 3).unwrap();
        // AB -> {0,1,4}, AC -> {0,2,4}, BC -> {0,3,4}
        assert_eq!(deepest_level_clusters(&levels, &db).len(), 3);
        let dup = TransactionDb::new(vec![vec![0, 1], vec![0, 1]], 2);
        let levels = mine(&dup, 1).unwrap();
        assert_eq!(deepest_level_clusters(&levels, &dup), vec![vec![0, 1]]);
        assert!(deepest_level_clusters(&[], &dup).is_empty());
    }
}
