use rand::RngCore;
use serde::{Deserialize, Serialize};

use super::grr::{grr_perturb, GrrParams};
use crate::domain::{BudgetKind, PrivacyBudget, Universe};
use crate::error::{Error, Result};
use crate::rng::{mix64, RandomSource};

/// Optimized local hashing parameters. `g = ceil(e^ε + 1)` unless set
/// explicitly.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OlhConfig {
    pub epsilon: f64,
    pub g: u32,
}

/// `⟨H, GRR(H(v))⟩` with `H` identified by its seed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct OlhReport {
    pub hash_seed: u64,
    pub hashed_value: u32,
}

impl OlhConfig {
    pub fn new(epsilon: &PrivacyBudget) -> Result<Self> {
        let eps = epsilon.expect(BudgetKind::Epsilon)?;
        let g = (eps.exp() + 1.0).ceil();
        if g > u32::MAX as f64 {
            return Err(Error::InvalidParameter(format!("epsilon {eps} too large for OLH")));
        }
        Self::with_hash_domain(epsilon, g as u32)
    }

    pub fn with_hash_domain(epsilon: &PrivacyBudget, g: u32) -> Result<Self> {
        let eps = epsilon.expect(BudgetKind::Epsilon)?;
        if g < 2 {
            return Err(Error::InvalidParameter(format!("OLH hash domain g = {g} < 2")));
        }
        Ok(Self { epsilon: eps, g })
    }

    /// GRR parameters on the hashed domain `[0, g)`.
    pub fn grr(&self) -> GrrParams {
        GrrParams::from_value(self.epsilon, self.g as usize).expect("g >= 2")
    }

    /// Member `hash_seed` of the hash family, applied to universe index `v`.
    #[inline]
    pub fn hash(&self, hash_seed: u64, v: usize) -> u32 {
        let h = mix64(hash_seed ^ mix64(v as u64 ^ 0x6f6c_685f_6974_656d));
        (h % self.g as u64) as u32
    }
}

pub fn olh_perturb_index(cfg: &OlhConfig, v: usize, rng: &mut RandomSource) -> OlhReport {
    let hash_seed = rng.next_u64();
    let hashed = cfg.hash(hash_seed, v) as usize;
    OlhReport {
        hash_seed,
        hashed_value: grr_perturb(&cfg.grr(), hashed, rng) as u32,
    }
}

pub fn olh_perturb(
    universe: &Universe,
    cfg: &OlhConfig,
    item: &str,
    rng: &mut RandomSource,
) -> Result<OlhReport> {
    Ok(olh_perturb_index(cfg, universe.require(item)?, rng))
}

/// Whether the report's hash function maps universe index `y` onto the
/// reported value.
#[inline]
pub fn olh_supports(report: &OlhReport, cfg: &OlhConfig, y: usize) -> bool {
    cfg.hash(report.hash_seed, y) == report.hashed_value
}
