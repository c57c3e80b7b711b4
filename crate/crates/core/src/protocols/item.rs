use indexmap::IndexMap;
use rand::seq::SliceRandom;
use serde::{Deserialize, Serialize};

use super::OrdinalCldp;
use crate::domain::{BudgetKind, Metric, PrivacyBudget, Universe};
use crate::error::{Error, Result};
use crate::estimation::{count_indices, labelled, rank_descending, FrequencyEstimate, FrequencyReport};
use crate::mechanisms::MechanismDistribution;
use crate::rng::RandomSource;
use crate::scalar::Scalar;

/// Share of alpha spent in round one.
pub const DEFAULT_SPLIT: f64 = 0.8;

const TAG_ORDER: u64 = 1;
const TAG_ROUND1: u64 = 2;
const TAG_ROUND2: u64 = 3;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ItemCldpConfig {
    pub alpha: PrivacyBudget,
    /// Round one runs at `alpha * split`, round two at `alpha * (1 - split)`.
    pub split: f64,
}

impl ItemCldpConfig {
    pub fn new(alpha: PrivacyBudget, split: f64) -> Result<Self> {
        alpha.expect(BudgetKind::Alpha)?;
        if !(split > 0.0 && split < 1.0) {
            return Err(Error::InvalidParameter(format!("split L = {split} outside (0, 1)")));
        }
        Ok(Self { alpha, split })
    }

    pub fn with_default_split(alpha: PrivacyBudget) -> Result<Self> {
        Self::new(alpha, DEFAULT_SPLIT)
    }
}

/// Server-side result of de-noising the round-one counts.
#[derive(Debug, Clone, PartialEq)]
pub struct DenoiseOutput<T = f64> {
    /// `true'(y)` per item index.
    pub adjusted_counts: Vec<T>,
    /// Item indices by descending adjusted count, ties by ascending index.
    pub ranking: Vec<usize>,
    /// Rank-difference metric over `ranking`.
    pub refined_metric: Metric<T>,
}

/// `true'(y) = (obs(y) - Σ_{x≠y} obs(x)·Pr[Φ(x)=y]) / Pr[Φ(y)=y]`, then rank.
pub fn item_cldp_denoise<T: Scalar>(
    observed: &[T],
    em: &MechanismDistribution<T>,
) -> Result<DenoiseOutput<T>> {
    let n = observed.len();
    if em.n_inputs() != n || em.n_outputs() != n {
        return Err(Error::SizeMismatch {
            expected: n,
            actual: em.n_inputs(),
        });
    }
    let adjusted = (0..n)
        .map(|y| {
            let stay = em.prob(y, y);
            if !(stay > T::zero()) {
                return Err(Error::SingularDiagonal(y));
            }
            let leaked = (0..n)
                .filter(|&x| x != y)
                .fold(T::zero(), |acc, x| acc + observed[x] * em.prob(x, y));
            Ok((observed[y] - leaked) / stay)
        })
        .collect::<Result<Vec<T>>>()?;
    let ranking = rank_descending(&adjusted);
    let refined_metric = Metric::from_order(&ranking)?;
    Ok(DenoiseOutput {
        adjusted_counts: adjusted,
        ranking,
        refined_metric,
    })
}

/// Everything the server sees over one Item-CLDP run.
#[derive(Debug, Clone, PartialEq)]
pub struct ItemCldpTrace {
    /// Public random order advertised in step 1 (`order[p]` = item at `p`).
    pub order: Vec<usize>,
    pub round1_counts: Vec<u64>,
    pub denoise: DenoiseOutput<f64>,
    pub round2_counts: Vec<u64>,
    /// Final estimate from the round-two counts.
    pub estimate: FrequencyEstimate,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ItemCldpTraceReport {
    pub order: Vec<String>,
    pub round1_counts: IndexMap<String, u64>,
    pub adjusted_counts: IndexMap<String, f64>,
    pub denoised_ranking: Vec<String>,
    pub round2_counts: IndexMap<String, u64>,
    pub estimate: FrequencyReport,
}

impl ItemCldpTrace {
    pub fn to_report(&self, universe: &Universe) -> ItemCldpTraceReport {
        let names = |idx: &[usize]| idx.iter().map(|&i| universe.items()[i].clone()).collect();
        ItemCldpTraceReport {
            order: names(&self.order),
            round1_counts: labelled(universe, &self.round1_counts),
            adjusted_counts: labelled(universe, &self.denoise.adjusted_counts),
            denoised_ranking: names(&self.denoise.ranking),
            round2_counts: labelled(universe, &self.round2_counts),
            estimate: self.estimate.to_report(universe),
        }
    }
}

/// Runs both Item-CLDP rounds over `clients` (universe indices).
///
/// The random order, round-one reports and round-two reports each use their
/// own stream family forked from `rng`; client `i` uses stream `i`. Round two
/// perturbs each client's true value.
pub fn item_cldp_run(
    clients: &[usize],
    cfg: &ItemCldpConfig,
    universe: &Universe,
    rng: &RandomSource,
) -> Result<ItemCldpTrace> {
    if clients.is_empty() {
        return Err(Error::Empty("Item-CLDP needs at least one client".into()));
    }
    let size = universe.size();

    // Step 1: public random total order
    let mut order: Vec<usize> = (0..size).collect();
    order.shuffle(&mut RandomSource::new(rng.fork_seed(TAG_ORDER), 0));
    let first_metric: Metric<f64> = Metric::from_order(&order)?;

    // Step 2: round one at alpha * L
    let round1 = OrdinalCldp::new(universe, &first_metric, &cfg.alpha.scaled(cfg.split)?)?;
    let reports1 = round1.perturb_population(clients, rng.fork_seed(TAG_ROUND1))?;
    let round1_counts = count_indices(size, &reports1)?;

    // Step 3: de-noise into a ranking and its metric
    let observed: Vec<f64> = round1_counts.iter().map(|&c| c as f64).collect();
    let denoise = item_cldp_denoise(&observed, round1.matrix())?;

    // Steps 4-5: round two at alpha * (1 - L) under d', aggregate
    let round2 = OrdinalCldp::new(
        universe,
        &denoise.refined_metric,
        &cfg.alpha.scaled(1.0 - cfg.split)?,
    )?;
    let reports2 = round2.perturb_population(clients, rng.fork_seed(TAG_ROUND2))?;
    let round2_counts = count_indices(size, &reports2)?;
    let estimate = FrequencyEstimate::from_counts(&round2_counts);

    Ok(ItemCldpTrace {
        order,
        round1_counts,
        denoise,
        round2_counts,
        estimate,
    })
}
