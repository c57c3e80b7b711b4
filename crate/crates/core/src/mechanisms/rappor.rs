use serde::{Deserialize, Serialize};

use crate::domain::{BudgetKind, PrivacyBudget, Universe};
use crate::error::{Error, Result};
use crate::rng::{derive_seed, RandomSource};
use crate::scalar::Scalar;

/// Bloom defaults. Not prescribed anywhere; purely configuration.
pub const DEFAULT_BLOOM_BITS: usize = 64;
pub const DEFAULT_BLOOM_HASHES: usize = 2;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum RapporEncoding {
    OneHot,
    Bloom { bits: usize, hashes: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RapporConfig {
    pub epsilon: f64,
    pub encoding: RapporEncoding,
}

impl RapporConfig {
    pub fn new(epsilon: &PrivacyBudget, encoding: RapporEncoding) -> Result<Self> {
        let eps = epsilon.expect(BudgetKind::Epsilon)?;
        if let RapporEncoding::Bloom { bits, hashes } = encoding {
            if hashes == 0 {
                return Err(Error::InvalidParameter("bloom filter needs h >= 1".into()));
            }
            if bits < hashes {
                return Err(Error::InvalidParameter(format!(
                    "bloom filter with m = {bits} < h = {hashes}"
                )));
            }
        }
        Ok(Self {
            epsilon: eps,
            encoding,
        })
    }

    pub fn one_hot(epsilon: &PrivacyBudget) -> Result<Self> {
        Self::new(epsilon, RapporEncoding::OneHot)
    }

    /// Δ: 1 for one-hot, h for Bloom.
    pub fn sensitivity(&self) -> usize {
        match self.encoding {
            RapporEncoding::OneHot => 1,
            RapporEncoding::Bloom { hashes, .. } => hashes,
        }
    }

    /// `e^(ε/2Δ) / (e^(ε/2Δ) + 1)`.
    pub fn keep_probability(&self) -> f64 {
        let e = (self.epsilon / (2.0 * self.sensitivity() as f64)).exp();
        e / (e + 1.0)
    }

    pub fn vector_len(&self, universe_size: usize) -> usize {
        match self.encoding {
            RapporEncoding::OneHot => universe_size,
            RapporEncoding::Bloom { bits, .. } => bits,
        }
    }

    /// Pre-perturbation bitvector of universe index `v`.
    pub fn encode(&self, universe_size: usize, v: usize) -> Vec<bool> {
        let mut bits = vec![false; self.vector_len(universe_size)];
        match self.encoding {
            RapporEncoding::OneHot => bits[v] = true,
            RapporEncoding::Bloom { bits: m, hashes } => {
                for h in 0..hashes {
                    bits[(derive_seed(h as u64, &[v as u64]) % m as u64) as usize] = true;
                }
            }
        }
        bits
    }
}

/// Encodes `v` then keeps each bit independently with the keep probability.
pub fn rappor_perturb_index(
    cfg: &RapporConfig,
    universe_size: usize,
    v: usize,
    rng: &mut RandomSource,
) -> Vec<bool> {
    let keep = cfg.keep_probability();
    cfg.encode(universe_size, v)
        .into_iter()
        .map(|b| if rng.bernoulli(keep) { b } else { !b })
        .collect()
}

pub fn rappor_perturb(
    universe: &Universe,
    cfg: &RapporConfig,
    item: &str,
    rng: &mut RandomSource,
) -> Result<Vec<bool>> {
    Ok(rappor_perturb_index(cfg, universe.size(), universe.require(item)?, rng))
}

/// Exact probability of observing `output` given pre-perturbation `encoded`.
pub fn rappor_output_probability<T: Scalar>(
    cfg: &RapporConfig,
    encoded: &[bool],
    output: &[bool],
) -> Result<T> {
    if encoded.len() != output.len() {
        return Err(Error::SizeMismatch {
            expected: encoded.len(),
            actual: output.len(),
        });
    }
    let e = (T::lit(cfg.epsilon) / T::from_usize(2 * cfg.sensitivity()).unwrap()).exp();
    let keep = e / (e + T::one());
    let flip = T::one() / (e + T::one());
    Ok(encoded
        .iter()
        .zip(output)
        .fold(T::one(), |acc, (a, b)| acc * if a == b { keep } else { flip }))
}
