#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};
use std::fs;
use std::path::Path;

use docrank::corpus::Document;
use rand::seq::IndexedRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub fn write_corpus(dir: &Path, files: &[(String, String)]) {
    for (name, body) in files {
        fs::write(dir.join(name), body).unwrap();
    }
}

pub fn fixture_files() -> Vec<(String, String)> {
    vec![
        ("D1".to_string(), "apple banana".to_string()),
        ("D2".to_string(), "apple banana".to_string()),
        ("D3".to_string(), "cherry".to_string()),
    ]
}

/// Up to 6 documents over keywords k0..k7 with counts 0..=3.
pub fn random_corpus(rng: &mut ChaCha8Rng) -> Vec<Document> {
    let n_docs = rng.random_range(1..=6);
    let n_kw = rng.random_range(1..=8);
    (0..n_docs)
        .map(|d| {
            Document::from_counts(
                format!("D{d}"),
                None,
                (0..n_kw).map(|k| (format!("k{k}"), rng.random_range(0..4u32))),
            )
        })
        .collect()
}

/// Result of the reference clustering, in the same shape the library reports.
#[derive(Debug, PartialEq)]
pub struct OracleClusters {
    pub levels_run: usize,
    pub clusters: Vec<(Vec<String>, Vec<String>)>,
    pub unclustered: Vec<String>,
}

fn subsets(items: &[String], n: usize) -> Vec<Vec<String>> {
    if n == 0 {
        return vec![vec![]];
    }
    if items.len() < n {
        return vec![];
    }
    let mut with: Vec<Vec<String>> = subsets(&items[1..], n - 1)
        .into_iter()
        .map(|mut s| {
            s.insert(0, items[0].clone());
            s
        })
        .collect();
    with.extend(subsets(&items[1..], n));
    with
}

fn min_entry(row: &BTreeMap<String, f64>) -> Option<f64> {
    row.values().copied().reduce(f64::min)
}

fn survives(row: &BTreeMap<String, f64>, thr: f64) -> bool {
    min_entry(row).is_some_and(|m| m > 0.0 && m <= thr)
}

/// Straightforward restatement of the clustering rules over keyword strings:
/// every n-subset of the vocabulary is enumerated and kept as a candidate
/// only if all of its (n-1)-subsets survived the previous level.
pub fn oracle_cluster(docs: &[Document], min_sup: usize) -> OracleClusters {
    let n = docs.len() as f64;
    let m = min_sup as f64;
    let thr = (1.0 / m) * (n / m).log10();
    let vocab: Vec<String> = docs
        .iter()
        .flat_map(|d| d.counts.iter().filter(|(_, &c)| c > 0).map(|(k, _)| k.clone()))
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();

    let mut prev: BTreeSet<Vec<String>> = BTreeSet::new();
    for k in &vocab {
        let holders: Vec<&Document> = docs.iter().filter(|d| d.count(k) > 0).collect();
        let idf = (n / holders.len() as f64).log10();
        let mut row = BTreeMap::new();
        if idf > 0.0 {
            for d in holders {
                let distinct = d.counts.values().filter(|&&c| c > 0).count() as f64;
                row.insert(d.id.clone(), (1.0 / distinct) * idf);
            }
        }
        if survives(&row, thr) {
            prev.insert(vec![k.clone()]);
        }
    }
    if prev.is_empty() {
        return OracleClusters {
            levels_run: 0,
            clusters: vec![],
            unclustered: docs
                .iter()
                .map(|d| d.id.clone())
                .collect::<BTreeSet<_>>()
                .into_iter()
                .collect(),
        };
    }

    let mut live: Vec<&Document> = docs.iter().collect();
    let mut level = 1;
    loop {
        let candidates: Vec<Vec<String>> = subsets(&vocab, level + 1)
            .into_iter()
            .filter(|s| {
                (0..s.len()).all(|drop| {
                    let mut sub = s.clone();
                    sub.remove(drop);
                    prev.contains(&sub)
                })
            })
            .collect();
        let mut kept: BTreeMap<Vec<String>, BTreeMap<String, f64>> = BTreeMap::new();
        for c in candidates {
            let hits: Vec<(&Document, u32)> = live
                .iter()
                .filter_map(|d| {
                    let occ = c.iter().map(|k| d.count(k)).min().unwrap();
                    (occ > 0).then_some((*d, occ))
                })
                .collect();
            let mut row = BTreeMap::new();
            if !hits.is_empty() {
                let idf = (live.len() as f64 / hits.len() as f64).log10();
                if idf > 0.0 {
                    for (d, occ) in hits {
                        row.insert(d.id.clone(), (1.0 / occ as f64) * idf);
                    }
                }
            }
            if survives(&row, thr) {
                kept.insert(c, row);
            }
        }
        if kept.is_empty() {
            break;
        }
        live.retain(|d| {
            kept.values()
                .any(|row| row.get(&d.id).is_some_and(|&w| w > 0.0 && w <= thr))
        });
        prev = kept.into_keys().collect();
        level += 1;
    }

    let mut clusters: Vec<(Vec<String>, Vec<String>)> = Vec::new();
    if level >= 2 {
        let mut seen: BTreeSet<Vec<String>> = BTreeSet::new();
        for itemset in &prev {
            let mut members: Vec<String> = live
                .iter()
                .filter(|d| itemset.iter().all(|k| d.count(k) > 0))
                .map(|d| d.id.clone())
                .collect();
            members.sort();
            if !members.is_empty() && seen.insert(members.clone()) {
                clusters.push((itemset.clone(), members));
            }
        }
    }
    let clustered: BTreeSet<&String> = clusters.iter().flat_map(|(_, m)| m).collect();
    let unclustered = docs
        .iter()
        .map(|d| d.id.clone())
        .filter(|id| !clustered.contains(id))
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    OracleClusters {
        levels_run: level,
        clusters,
        unclustered,
    }
}

/// 40 documents in 4 blocks of 10. Each document holds the 5 keywords of
/// its block and 5 keywords of its own, every one repeated `repeat` times.
pub fn block_corpus(repeat: u32) -> Vec<Document> {
    (0..40)
        .map(|d| {
            let block = d / 10;
            let shared = (0..5).map(|j| format!("b{block}w{j}"));
            let unique = (0..5).map(|j| format!("d{d}u{j}"));
            Document::from_counts(
                format!("doc{d:02}"),
                Some(format!("block{block}")),
                shared.chain(unique).map(|k| (k, repeat)),
            )
        })
        .collect()
}

const CLASSES: &[(&str, &[&str], &[&str])] = &[
    (
        "cacm",
        &["compiler", "algorithm", "syntax"],
        &[
            "parser",
            "recursion",
            "lexical",
            "bytecode",
            "pointer",
            "subroutine",
            "register",
            "assembler",
            "interpreter",
            "garbage",
            "semaphore",
            "scheduler",
            "kernel",
            "quicksort",
            "hashing",
            "grammar",
            "debugger",
            "linker",
            "loader",
            "macro",
        ],
    ),
    (
        "cran",
        &["aerodynamic", "airfoil", "turbulent"],
        &[
            "supersonic",
            "wing",
            "nozzle",
            "shock",
            "laminar",
            "viscous",
            "mach",
            "propeller",
            "flutter",
            "fuselage",
            "drag",
            "hypersonic",
            "wake",
            "vortex",
            "compressor",
            "turbine",
            "blade",
            "cone",
            "plate",
            "jet",
        ],
    ),
    (
        "med",
        &["patient", "tumor", "clinical"],
        &[
            "insulin",
            "cardiac",
            "renal",
            "antibody",
            "biopsy",
            "lesion",
            "carcinoma",
            "hepatic",
            "enzyme",
            "plasma",
            "leukemia",
            "diabetes",
            "fetal",
            "pulmonary",
            "lymphocyte",
            "hormone",
            "serum",
            "muscle",
            "thyroid",
            "infant",
        ],
    ),
];

const GENERIC: &[&str] = &[
    "report",
    "study",
    "measurement",
    "method",
    "analysis",
    "result",
    "survey",
    "data",
];

/// 60 Classic-style labeled documents, 20 per class, named `<class>.<n>`.
pub fn classic_corpus(rng: &mut ChaCha8Rng) -> Vec<(String, String)> {
    let mut files = Vec::new();
    for (label, core, pool) in CLASSES {
        for i in 0..20 {
            let mut words: Vec<&str> = Vec::new();
            for w in core.iter() {
                for _ in 0..rng.random_range(2..=3) {
                    words.push(w);
                }
            }
            words.extend(pool.choose_multiple(rng, 6));
            words.extend(GENERIC.choose_multiple(rng, 2));
            files.push((format!("{label}.{i:03}"), words.join(" ")));
        }
    }
    files
}
