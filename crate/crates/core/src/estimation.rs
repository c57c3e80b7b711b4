//! Server-side aggregation and frequency estimation.

use std::cmp::Ordering;

use indexmap::IndexMap;
use serde::{Deserialize, Serialize};

use crate::domain::{BudgetKind, PrivacyBudget, Universe};
use crate::error::{Error, Result};
use crate::mechanisms::{olh_supports, GrrParams, MechanismDistribution, OlhConfig, OlhReport, RapporConfig, RapporEncoding};
use crate::protocols::item_cldp_denoise;
use crate::scalar::Scalar;

/// Per-item estimated counts for a population of `n` reports.
///
/// `raw_counts` may be negative (unbiased LDP estimators). `frequencies`
/// clamps negatives to zero and renormalizes. `ranking` orders item indices
/// by descending raw count, ties by ascending index.
#[derive(Debug, Clone, PartialEq)]
pub struct FrequencyEstimate {
    pub n: usize,
    pub raw_counts: Vec<f64>,
    pub frequencies: Vec<f64>,
    pub ranking: Vec<usize>,
}

impl FrequencyEstimate {
    pub fn from_raw_counts(raw_counts: Vec<f64>, n: usize) -> Self {
        let clamped: Vec<f64> = raw_counts.iter().map(|&c| c.max(0.0)).collect();
        let total: f64 = clamped.iter().sum();
        let frequencies = if total > 0.0 {
            clamped.iter().map(|c| c / total).collect()
        } else {
            // nothing positive to normalize: fall back to uniform
            vec![1.0 / raw_counts.len() as f64; raw_counts.len()]
        };
        let ranking = rank_descending(&raw_counts);
        Self {
            n,
            raw_counts,
            frequencies,
            ranking,
        }
    }

    pub fn from_counts(counts: &[u64]) -> Self {
        let n = counts.iter().sum::<u64>() as usize;
        Self::from_raw_counts(counts.iter().map(|&c| c as f64).collect(), n)
    }

    pub fn to_report(&self, universe: &Universe) -> FrequencyReport {
        FrequencyReport {
            n: self.n,
            raw_counts: labelled(universe, &self.raw_counts),
            frequencies: labelled(universe, &self.frequencies),
            ranking: self
                .ranking
                .iter()
                .map(|&i| universe.items()[i].clone())
                .collect(),
        }
    }
}

/// JSON form of [`FrequencyEstimate`]. Maps keep universe order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FrequencyReport {
    pub n: usize,
    pub raw_counts: IndexMap<String, f64>,
    pub frequencies: IndexMap<String, f64>,
    pub ranking: Vec<String>,
}

impl FrequencyReport {
    /// Re-indexes the report against `universe`. The item sets must match.
    pub fn to_estimate(&self, universe: &Universe) -> Result<FrequencyEstimate> {
        let keys_match = |m: &IndexMap<String, f64>| {
            m.len() == universe.size() && m.keys().all(|k| universe.index_of(k).is_some())
        };
        if !keys_match(&self.raw_counts) || !keys_match(&self.frequencies) {
            return Err(Error::InvalidParameter(
                "report items do not match the universe".into(),
            ));
        }
        let mut raw = vec![0.0; universe.size()];
        let mut freq = vec![0.0; universe.size()];
        for (k, v) in &self.raw_counts {
            raw[universe.require(k)?] = *v;
        }
        for (k, v) in &self.frequencies {
            freq[universe.require(k)?] = *v;
        }
        let ranking = self
            .ranking
            .iter()
            .map(|k| universe.require(k))
            .collect::<Result<Vec<_>>>()?;
        Ok(FrequencyEstimate {
            n: self.n,
            raw_counts: raw,
            frequencies: freq,
            ranking,
        })
    }
}

/// Pairs values with universe items, in universe order.
pub fn labelled<V: Copy>(universe: &Universe, values: &[V]) -> IndexMap<String, V> {
    universe.items().iter().cloned().zip(values.iter().copied()).collect()
}

/// Item indices by descending value; ties by ascending index. Values must
/// not be NaN.
pub fn rank_descending<T: PartialOrd>(values: &[T]) -> Vec<usize> {
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&a, &b| {
        values[b]
            .partial_cmp(&values[a])
            .unwrap_or(Ordering::Equal)
            .then(a.cmp(&b))
    });
    order
}

/// Exact multiset counts of item reports.
pub fn aggregate_counts(universe: &Universe, reports: &[&str]) -> Result<Vec<u64>> {
    let mut counts = vec![0u64; universe.size()];
    for r in reports {
        counts[universe.require(r)?] += 1;
    }
    Ok(counts)
}

/// Counts of index reports over a universe of `size` items.
pub fn count_indices(size: usize, reports: &[usize]) -> Result<Vec<u64>> {
    let mut counts = vec![0u64; size];
    for &r in reports {
        *counts
            .get_mut(r)
            .ok_or(Error::IndexOutOfRange { index: r, size })? += 1;
    }
    Ok(counts)
}

/// Adds `other` into `acc` (partition-and-merge reduction).
pub fn merge_counts(acc: &mut [u64], other: &[u64]) -> Result<()> {
    if acc.len() != other.len() {
        return Err(Error::SizeMismatch {
            expected: acc.len(),
            actual: other.len(),
        });
    }
    acc.iter_mut().zip(other).for_each(|(a, b)| *a += b);
    Ok(())
}

/// Reports from one of the LDP baselines.
#[derive(Debug, Clone, PartialEq)]
pub enum LdpReports {
    Grr(Vec<usize>),
    Olh(OlhConfig, Vec<OlhReport>),
    Rappor(RapporConfig, Vec<Vec<bool>>),
}

/// Standard unbiased frequency-oracle estimate for an LDP baseline.
pub fn ldp_estimate(
    reports: &LdpReports,
    epsilon: &PrivacyBudget,
    universe: &Universe,
) -> Result<FrequencyEstimate> {
    let eps = epsilon.expect(BudgetKind::Epsilon)?;
    match reports {
        LdpReports::Grr(r) => grr_estimate(&count_indices(universe.size(), r)?, r.len(), eps),
        LdpReports::Olh(cfg, r) => {
            if (cfg.epsilon - eps).abs() > 1e-12 {
                return Err(Error::InvalidParameter("OLH config epsilon mismatch".into()));
            }
            olh_estimate(r, cfg, universe.size())
        }
        LdpReports::Rappor(cfg, r) => {
            if (cfg.epsilon - eps).abs() > 1e-12 {
                return Err(Error::InvalidParameter("RAPPOR config epsilon mismatch".into()));
            }
            rappor_estimate(r, cfg, universe.size())
        }
    }
}

/// `ĉ(v) = (c(v) - n·q) / (p - q)`.
pub fn grr_estimate(counts: &[u64], n: usize, epsilon: f64) -> Result<FrequencyEstimate> {
    let g = GrrParams::from_value(epsilon, counts.len())?;
    let spread = g.p - g.q;
    if !(spread > 0.0) {
        return Err(Error::InvalidParameter("GRR with p = q carries no signal".into()));
    }
    let raw = counts
        .iter()
        .map(|&c| (c as f64 - n as f64 * g.q) / spread)
        .collect();
    Ok(FrequencyEstimate::from_raw_counts(raw, n))
}

/// `ĉ(v) = (support(v) - n/g) / (p - 1/g)`, scanning every report per item.
pub fn olh_estimate(reports: &[OlhReport], cfg: &OlhConfig, size: usize) -> Result<FrequencyEstimate> {
    let grr = cfg.grr();
    let inv_g = 1.0 / cfg.g as f64;
    let spread = grr.p - inv_g;
    if !(spread > 0.0) {
        return Err(Error::InvalidParameter("OLH with p = 1/g carries no signal".into()));
    }
    let n = reports.len();
    let raw = (0..size)
        .map(|v| {
            let support = reports.iter().filter(|r| olh_supports(r, cfg, v)).count();
            (support as f64 - n as f64 * inv_g) / spread
        })
        .collect();
    Ok(FrequencyEstimate::from_raw_counts(raw, n))
}

/// Per-bit debiasing for one-hot RAPPOR: `ĉ(v) = (ones(v) - n·f0) / (f1 - f0)`.
pub fn rappor_estimate(reports: &[Vec<bool>], cfg: &RapporConfig, size: usize) -> Result<FrequencyEstimate> {
    if cfg.encoding != RapporEncoding::OneHot {
        return Err(Error::Unsupported("decoding Bloom-encoded RAPPOR reports".into()));
    }
    let f1 = cfg.keep_probability();
    let f0 = 1.0 - f1;
    if !(f1 - f0 > 0.0) {
        return Err(Error::InvalidParameter("RAPPOR with keep = flip carries no signal".into()));
    }
    let mut ones = vec![0u64; size];
    for r in reports {
        if r.len() != size {
            return Err(Error::SizeMismatch {
                expected: size,
                actual: r.len(),
            });
        }
        for (o, &b) in ones.iter_mut().zip(r) {
            *o += b as u64;
        }
    }
    let n = reports.len();
    let raw = ones
        .iter()
        .map(|&c| (c as f64 - n as f64 * f0) / (f1 - f0))
        .collect();
    Ok(FrequencyEstimate::from_raw_counts(raw, n))
}

/// How CLDP singleton reports are turned into counts.
#[derive(Debug, Clone, Copy)]
pub enum CldpMode<'a> {
    /// Observed counts as-is; rank-faithful in expectation under a uniform
    /// metric.
    Raw,
    /// Item-CLDP de-noising against the given EM table.
    Denoised(&'a MechanismDistribution<f64>),
}

pub fn cldp_estimate(reports: &[usize], size: usize, mode: CldpMode<'_>) -> Result<FrequencyEstimate> {
    let counts = count_indices(size, reports)?;
    match mode {
        CldpMode::Raw => Ok(FrequencyEstimate::from_counts(&counts)),
        CldpMode::Denoised(em) => {
            let observed: Vec<f64> = counts.iter().map(|&c| c as f64).collect();
            let out = item_cldp_denoise(&observed, em)?;
            Ok(FrequencyEstimate::from_raw_counts(out.adjusted_counts, reports.len()))
        }
    }
}

/// `E[obs(y)] = Σ_x true(x)·Pr[Φ(x) = y]`.
pub fn expected_observed_counts<T: Scalar>(mech: &MechanismDistribution<T>, true_counts: &[T]) -> Result<Vec<T>> {
    if true_counts.len() != mech.n_inputs() {
        return Err(Error::SizeMismatch {
            expected: mech.n_inputs(),
            actual: true_counts.len(),
        });
    }
    Ok((0..mech.n_outputs())
        .map(|y| {
            true_counts
                .iter()
                .enumerate()
                .fold(T::zero(), |acc, (x, &c)| acc + c * mech.prob(x, y))
        })
        .collect())
}
