//! Utility metrics and top-k n-gram mining.

use std::collections::{BTreeMap, BTreeSet};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::estimation::rank_descending;
use crate::scalar::Scalar;

/// `Σ |a(v) − b(v)|`.
pub fn l1_distance<T: Scalar>(actual: &[T], estimated: &[T]) -> Result<T> {
    same_len(actual, estimated)?;
    Ok(actual.iter().zip(estimated).map(|(&a, &b)| (a - b).abs()).sum())
}

fn same_len<A, B>(a: &[A], b: &[B]) -> Result<()> {
    if a.len() != b.len() {
        return Err(Error::SizeMismatch {
            expected: a.len(),
            actual: b.len(),
        });
    }
    Ok(())
}

/// The `k` most frequent items by true count, ties by ascending index.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TopKSelection {
    pub k: usize,
    pub items: Vec<usize>,
}

impl TopKSelection {
    pub fn from_counts<T: Scalar>(true_counts: &[T], k: usize) -> Result<Self> {
        if k == 0 {
            return Err(Error::InvalidParameter("k must be positive".into()));
        }
        let mut items = rank_descending(true_counts);
        items.truncate(k);
        Ok(Self { k, items })
    }

    pub fn as_set(&self) -> BTreeSet<usize> {
        self.items.iter().copied().collect()
    }

    fn check(&self, size: usize) -> Result<()> {
        match self.items.iter().find(|&&i| i >= size) {
            Some(&index) => Err(Error::IndexOutOfRange { index, size }),
            None => Ok(()),
        }
    }
}

/// Mean relative error over the selected items.
pub fn avre<T: Scalar>(true_counts: &[T], est_counts: &[T], topk: &TopKSelection) -> Result<T> {
    same_len(true_counts, est_counts)?;
    topk.check(true_counts.len())?;
    if topk.items.is_empty() {
        return Err(Error::Empty("top-k selection".into()));
    }
    let mut total = T::zero();
    for &x in &topk.items {
        let t = true_counts[x];
        if !(t > T::zero()) {
            return Err(Error::InvalidParameter(format!(
                "item {x} in the top-k has true count {t}"
            )));
        }
        total = total + (est_counts[x] - t).abs() / t;
    }
    Ok(total / T::from_usize(topk.items.len()).unwrap())
}

/// How pairs tied in either vector are scored.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TiePolicy {
    /// Tied pairs add to neither count.
    #[default]
    Neither,
    /// Any pair that is not strictly concordant is discordant.
    Discordant,
}

/// `(concordant − discordant) / (k(k−1)/2)` over pairs of selected items.
pub fn kendall_tau<T: Scalar>(
    true_counts: &[T],
    est_counts: &[T],
    topk: &TopKSelection,
    ties: TiePolicy,
) -> Result<f64> {
    same_len(true_counts, est_counts)?;
    topk.check(true_counts.len())?;
    let k = topk.items.len();
    if k < 2 {
        return Err(Error::InvalidParameter(format!("kendall tau needs k >= 2, got {k}")));
    }
    let mut score: i64 = 0;
    for (a, &i) in topk.items.iter().enumerate() {
        for &j in &topk.items[a + 1..] {
            let dt = true_counts[i] - true_counts[j];
            let de = est_counts[i] - est_counts[j];
            let product = dt * de;
            if product > T::zero() {
                score += 1;
            } else if product < T::zero() || ties == TiePolicy::Discordant {
                score -= 1;
            }
        }
    }
    Ok(score as f64 / (k * (k - 1) / 2) as f64)
}

/// `|A ∩ B| / |A ∪ B|`, 1 when both are empty.
pub fn jaccard<T: Ord>(a: &BTreeSet<T>, b: &BTreeSet<T>) -> f64 {
    let union = a.union(b).count();
    if union == 0 {
        return 1.0;
    }
    a.intersection(b).count() as f64 / union as f64
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct NgramPattern {
    pub gram: Vec<usize>,
    pub support: u64,
}

/// Contiguous `n`-gram occurrence counts, overlapping occurrences included.
pub fn count_ngrams(sequences: &[Vec<usize>], n: usize) -> Result<BTreeMap<Vec<usize>, u64>> {
    if !(2..=3).contains(&n) {
        return Err(Error::InvalidParameter(format!("n-gram length {n} not in {{2, 3}}")));
    }
    Ok(sequences
        .par_iter()
        .fold(BTreeMap::new, |mut acc, seq| {
            for w in seq.windows(n) {
                *acc.entry(w.to_vec()).or_insert(0u64) += 1;
            }
            acc
        })
        .reduce(BTreeMap::new, |mut a, b| {
            for (g, c) in b {
                *a.entry(g).or_insert(0) += c;
            }
            a
        }))
}

/// Top-`k` contiguous `n`-grams by support, ties by lexicographic gram order.
pub fn mine_ngrams(sequences: &[Vec<usize>], n: usize, k: usize) -> Result<Vec<NgramPattern>> {
    let mut patterns: Vec<NgramPattern> = count_ngrams(sequences, n)?
        .into_iter()
        .map(|(gram, support)| NgramPattern { gram, support })
        .collect();
    // stable sort over lexicographic input keeps tie order
    patterns.sort_by(|a, b| b.support.cmp(&a.support));
    patterns.truncate(k);
    Ok(patterns)
}

/// Gram set of a mined pattern list.
pub fn gram_set(patterns: &[NgramPattern]) -> BTreeSet<Vec<usize>> {
    patterns.iter().map(|p| p.gram.clone()).collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MetricsReport {
    pub l1: f64,
    pub avre: f64,
    pub kendall_tau: f64,
    pub jaccard: f64,
    pub k: usize,
}

/// Full metric suite of an estimate against ground truth.
///
/// L1 compares normalized frequencies. AvRE and Kendall-tau use counts
/// over the true top-`k`. Jaccard compares the true and estimated top-`k`
/// sets.
pub fn evaluate_counts(true_counts: &[f64], est_counts: &[f64], k: usize) -> Result<MetricsReport> {
    same_len(true_counts, est_counts)?;
    let truth = TopKSelection::from_counts(true_counts, k)?;
    let estimated = TopKSelection::from_counts(est_counts, k)?;
    Ok(MetricsReport {
        l1: l1_distance(&normalize(true_counts), &normalize(est_counts))?,
        avre: avre(true_counts, est_counts, &truth)?,
        kendall_tau: kendall_tau(true_counts, est_counts, &truth, TiePolicy::default())?,
        jaccard: jaccard(&truth.as_set(), &estimated.as_set()),
        k,
    })
}

/// Clamps negatives to zero and rescales to sum 1; uniform if nothing is
/// positive.
pub fn normalize(counts: &[f64]) -> Vec<f64> {
    let total: f64 = counts.iter().map(|c| c.max(0.0)).sum();
    if total > 0.0 {
        counts.iter().map(|c| c.max(0.0) / total).collect()
    } else {
        vec![1.0 / counts.len() as f64; counts.len()]
    }
}
