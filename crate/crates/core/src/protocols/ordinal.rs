use rayon::prelude::*;

use crate::domain::{Metric, PrivacyBudget, Universe};
use crate::error::{Error, Result};
use crate::mechanisms::{em_matrix, CumulativeSampler, MechanismDistribution};
use crate::rng::RandomSource;
use crate::scalar::Scalar;

/// Exponential-mechanism randomizer with per-input samplers precomputed.
#[derive(Debug, Clone)]
pub struct OrdinalCldp<T = f64> {
    alpha: f64,
    matrix: MechanismDistribution<T>,
    samplers: Vec<CumulativeSampler>,
}

impl<T: Scalar> OrdinalCldp<T> {
    /// Rejects tables that are not metrics.
    pub fn new(universe: &Universe, metric: &Metric<T>, alpha: &PrivacyBudget) -> Result<Self> {
        metric.ensure_valid()?;
        let matrix = em_matrix(universe, metric, alpha)?;
        let samplers = matrix
            .rows()
            .map(CumulativeSampler::new)
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            alpha: alpha.value(),
            matrix,
            samplers,
        })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn size(&self) -> usize {
        self.samplers.len()
    }

    pub fn matrix(&self) -> &MechanismDistribution<T> {
        &self.matrix
    }

    pub fn perturb(&self, v: usize, rng: &mut RandomSource) -> Result<usize> {
        let sampler = self.samplers.get(v).ok_or(Error::IndexOutOfRange {
            index: v,
            size: self.size(),
        })?;
        Ok(sampler.draw(rng))
    }

    /// Perturbs every client; client `i` draws from stream `i` of `seed`.
    pub fn perturb_population(&self, clients: &[usize], seed: u64) -> Result<Vec<usize>> {
        if let Some(&bad) = clients.iter().find(|&&v| v >= self.size()) {
            return Err(Error::IndexOutOfRange {
                index: bad,
                size: self.size(),
            });
        }
        Ok(clients
            .par_iter()
            .enumerate()
            .map(|(i, &v)| self.samplers[v].draw(&mut RandomSource::new(seed, i as u64)))
            .collect())
    }
}

/// One-shot Ordinal-CLDP report for `item`; returns the reported index.
pub fn ordinal_cldp_perturb<T: Scalar>(
    universe: &Universe,
    metric: &Metric<T>,
    alpha: &PrivacyBudget,
    item: &str,
    rng: &mut RandomSource,
) -> Result<usize> {
    let v = universe.require(item)?;
    OrdinalCldp::new(universe, metric, alpha)?.perturb(v, rng)
}
