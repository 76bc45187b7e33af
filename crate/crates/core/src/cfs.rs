//! Correlation-based feature subset selection.
//!
//! A subset of `k` features scores
//! `k·mean(r_cf) / sqrt(k + k(k−1)·mean(r_ff))`, where `r_cf` is a
//! feature's correlation with the class and `r_ff` the correlation between
//! two features. Both are absolute Pearson correlations. With several
//! classes `r_cf` is the mean over classes of the point-biserial
//! correlation with the one-vs-rest indicator.
//!
//! The search is forward best-first from the empty set and stops after a
//! fixed number of consecutive expansions that fail to improve on the best
//! subset seen.

use std::cmp::Ordering;
use std::collections::{BTreeSet, BinaryHeap, HashMap, HashSet};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

pub const DEFAULT_STALL_LIMIT: usize = 5;
/// Improvements smaller than this are treated as ties.
const MERIT_EPSILON: f64 = 1e-12;
/// Columns whose variance falls below this are treated as constant.
const CONSTANT_VARIANCE: f64 = 1e-24;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum CfsError {
    #[error("merit of an empty subset is undefined")]
    EmptySubset,
    #[error("selection needs at least two classes, found {0}")]
    SingleClass(usize),
    #[error("selection needs at least two instances, found {0}")]
    TooFewInstances(usize),
    #[error("row {row} has {found} values, expected {expected}")]
    Ragged {
        row: usize,
        found: usize,
        expected: usize,
    },
    #[error("{labels} labels for {rows} rows")]
    LabelCount { labels: usize, rows: usize },
    #[error("feature index {index} out of range for {features} features")]
    FeatureOutOfRange { index: usize, features: usize },
}

/// Standardized columns, class correlations, and the feature–feature rows
/// computed so far.
pub struct CorrelationCache {
    n: usize,
    /// Column-major z-scores (population σ); constant columns are all zero.
    columns: Vec<Vec<f64>>,
    class_corr: Vec<f64>,
    rows: HashMap<usize, Vec<f64>>,
}

impl CorrelationCache {
    /// `x` is row-major (one row per instance); `y` holds class ids.
    pub fn new(x: &[Vec<f64>], y: &[usize]) -> Result<Self, CfsError> {
        let n = x.len();
        if y.len() != n {
            return Err(CfsError::LabelCount {
                labels: y.len(),
                rows: n,
            });
        }
        if n < 2 {
            return Err(CfsError::TooFewInstances(n));
        }
        let d = x[0].len();
        for (row, r) in x.iter().enumerate() {
            if r.len() != d {
                return Err(CfsError::Ragged {
                    row,
                    found: r.len(),
                    expected: d,
                });
            }
        }
        let classes: BTreeSet<usize> = y.iter().copied().collect();
        if classes.len() < 2 {
            return Err(CfsError::SingleClass(classes.len()));
        }

        let columns: Vec<Vec<f64>> = (0..d)
            .into_par_iter()
            .map(|j| {
                let nf = n as f64;
                let mean = x.iter().map(|r| r[j]).sum::<f64>() / nf;
                let var = x.iter().map(|r| (r[j] - mean).powi(2)).sum::<f64>() / nf;
                if var < CONSTANT_VARIANCE * (1.0 + mean * mean) {
                    vec![0.0; n]
                } else {
                    let sd = var.sqrt();
                    x.iter().map(|r| (r[j] - mean) / sd).collect()
                }
            })
            .collect();

        let class_sizes: Vec<(usize, f64)> = classes
            .iter()
            .map(|&c| (c, y.iter().filter(|&&v| v == c).count() as f64))
            .collect();
        let class_corr = columns
            .par_iter()
            .map(|z| {
                let nf = n as f64;
                let total: f64 = class_sizes
                    .iter()
                    .map(|&(c, size)| {
                        let p = size / nf;
                        // Σ z over the class; z has zero mean so this is the
                        // covariance with the centred indicator, times n
                        let s: f64 = z
                            .iter()
                            .zip(y)
                            .filter(|(_, &l)| l == c)
                            .map(|(v, _)| v)
                            .sum();
                        (s / (nf * (p * (1.0 - p)).sqrt())).abs()
                    })
                    .sum();
                (total / class_sizes.len() as f64).min(1.0)
            })
            .collect();

        Ok(Self {
            n,
            columns,
            class_corr,
            rows: HashMap::new(),
        })
    }

    pub fn num_features(&self) -> usize {
        self.columns.len()
    }

    pub fn class_correlation(&self, feature: usize) -> f64 {
        self.class_corr[feature]
    }

    pub fn class_correlations(&self) -> &[f64] {
        &self.class_corr
    }

    fn dot(&self, a: usize, b: usize) -> f64 {
        if a == b {
            return 1.0;
        }
        let s: f64 = self.columns[a]
            .iter()
            .zip(&self.columns[b])
            .map(|(p, q)| p * q)
            .sum();
        (s / self.n as f64).abs().min(1.0)
    }

    /// `|r|` between two features, from a cached row when available.
    pub fn feature_correlation(&self, a: usize, b: usize) -> f64 {
        if a == b {
            return 1.0;
        }
        if let Some(row) = self.rows.get(&a) {
            return row[b];
        }
        if let Some(row) = self.rows.get(&b) {
            return row[a];
        }
        self.dot(a, b)
    }

    /// Computes and stores the full correlation row of `feature`.
    pub fn ensure_row(&mut self, feature: usize) -> &[f64] {
        if !self.rows.contains_key(&feature) {
            let row: Vec<f64> = (0..self.num_features())
                .into_par_iter()
                .map(|j| self.dot(feature, j))
                .collect();
            self.rows.insert(feature, row);
        }
        &self.rows[&feature]
    }

    pub fn cached_rows(&self) -> usize {
        self.rows.len()
    }
}

fn merit_from_sums(k: usize, sum_cf: f64, sum_ff_pairs: f64) -> f64 {
    if k == 0 {
        return 0.0;
    }
    let kf = k as f64;
    // k·mean(r_cf) / sqrt(k + k(k−1)·mean(r_ff)) with the means expanded
    let denom = kf + 2.0 * sum_ff_pairs;
    if denom <= 0.0 {
        0.0
    } else {
        sum_cf / denom.sqrt()
    }
}

pub fn merit_score(subset: &[usize], cache: &CorrelationCache) -> Result<f64, CfsError> {
    if subset.is_empty() {
        return Err(CfsError::EmptySubset);
    }
    let d = cache.num_features();
    if let Some(&index) = subset.iter().find(|&&i| i >= d) {
        return Err(CfsError::FeatureOutOfRange { index, features: d });
    }
    let sum_cf: f64 = subset.iter().map(|&f| cache.class_correlation(f)).sum();
    let mut sum_ff = 0.0;
    for (i, &a) in subset.iter().enumerate() {
        for &b in &subset[i + 1..] {
            sum_ff += cache.feature_correlation(a, b);
        }
    }
    Ok(merit_from_sums(subset.len(), sum_cf, sum_ff))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SelectionResult {
    /// Ascending feature indices.
    pub selected: Vec<usize>,
    pub merit: f64,
    /// Number of subsets scored during the search.
    pub evaluations: usize,
}

/// Search state of one visited subset.
struct Node {
    parent: Option<usize>,
    feature: usize,
    size: usize,
    sum_cf: f64,
    sum_ff: f64,
    hash: u128,
}

struct Candidate {
    merit: f64,
    seq: u64,
    parent: usize,
    feature: usize,
}

impl PartialEq for Candidate {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Candidate {}

impl PartialOrd for Candidate {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Candidate {
    /// Highest merit first; equal merits go to the earlier-generated
    /// candidate, which is the lower feature index within one expansion.
    fn cmp(&self, other: &Self) -> Ordering {
        self.merit
            .total_cmp(&other.merit)
            .then_with(|| other.seq.cmp(&self.seq))
    }
}

fn subset_of(nodes: &[Node], mut id: usize) -> Vec<usize> {
    let mut out = Vec::with_capacity(nodes[id].size);
    while let Some(parent) = nodes[id].parent {
        out.push(nodes[id].feature);
        id = parent;
    }
    out.sort_unstable();
    out
}

/// Forward best-first search over feature subsets.
pub fn best_first_select(
    x: &[Vec<f64>],
    y: &[usize],
    stall_limit: usize,
) -> Result<SelectionResult, CfsError> {
    let mut cache = CorrelationCache::new(x, y)?;
    Ok(best_first_with_cache(&mut cache, stall_limit))
}

pub fn best_first_with_cache(cache: &mut CorrelationCache, stall_limit: usize) -> SelectionResult {
    let d = cache.num_features();
    // Zobrist keys identify a subset by the XOR of its members' keys
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_cf5);
    let keys: Vec<u128> = (0..d).map(|_| rng.gen()).collect();

    let mut nodes = vec![Node {
        parent: None,
        feature: usize::MAX,
        size: 0,
        sum_cf: 0.0,
        sum_ff: 0.0,
        hash: 0,
    }];
    let mut seen: HashSet<u128> = HashSet::from([0]);
    let mut open = BinaryHeap::new();
    let mut seq = 0u64;
    let mut best = (0usize, 0.0f64);
    let mut evaluations = 0usize;
    let mut stalls = 0usize;
    let mut next = Some(0usize);

    while let Some(id) = next.take() {
        let members = subset_of(&nodes, id);
        for &m in &members {
            cache.ensure_row(m);
        }
        let member_rows: Vec<&[f64]> = members.iter().map(|m| cache.rows[m].as_slice()).collect();
        let in_subset: HashSet<usize> = members.iter().copied().collect();
        let (size, sum_cf, sum_ff, hash) = {
            let n = &nodes[id];
            (n.size, n.sum_cf, n.sum_ff, n.hash)
        };

        let mut improved = false;
        for f in 0..d {
            if in_subset.contains(&f) || !seen.insert(hash ^ keys[f]) {
                continue;
            }
            let add_ff: f64 = member_rows.iter().map(|r| r[f]).sum();
            let merit = merit_from_sums(size + 1, sum_cf + cache.class_corr[f], sum_ff + add_ff);
            evaluations += 1;
            if merit > best.1 + MERIT_EPSILON {
                improved = true;
            }
            open.push(Candidate {
                merit,
                seq,
                parent: id,
                feature: f,
            });
            seq += 1;
        }

        // the best newly generated child becomes the best subset if it improves
        if improved {
            stalls = 0;
        } else {
            stalls += 1;
            if stalls >= stall_limit {
                break;
            }
        }

        let Some(c) = open.pop() else { break };
        let parent = &nodes[c.parent];
        let add_ff: f64 = subset_of(&nodes, c.parent)
            .iter()
            .map(|&m| cache.feature_correlation(m, c.feature))
            .sum();
        let node = Node {
            parent: Some(c.parent),
            feature: c.feature,
            size: parent.size + 1,
            sum_cf: parent.sum_cf + cache.class_corr[c.feature],
            sum_ff: parent.sum_ff + add_ff,
            hash: parent.hash ^ keys[c.feature],
        };
        nodes.push(node);
        let new_id = nodes.len() - 1;
        if c.merit > best.1 + MERIT_EPSILON {
            best = (new_id, c.merit);
        }
        next = Some(new_id);
    }

    SelectionResult {
        selected: subset_of(&nodes, best.0),
        merit: best.1,
        evaluations,
    }
}

/// Features present in every fold's selection, ascending.
pub fn intersect_fold_selections<S: AsRef<[usize]>>(fold_sets: &[S]) -> Vec<usize> {
    let Some((first, rest)) = fold_sets.split_first() else {
        return Vec::new();
    };
    let mut acc: BTreeSet<usize> = first.as_ref().iter().copied().collect();
    for s in rest {
        let set: HashSet<usize> = s.as_ref().iter().copied().collect();
        acc.retain(|f| set.contains(f));
    }
    acc.into_iter().collect()
}
