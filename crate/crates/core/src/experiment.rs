//! Repeated-trial simulation of CLDP protocols and LDP baselines.
//!
//! Trial `t` of protocol `p` draws every random choice from seeds derived
//! from `(seed, t, p)`, and client `i` always uses stream `i`. Trials run in
//! parallel and are reduced in trial order, so a report depends only on the
//! configuration and the data.

use std::collections::BTreeSet;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::calibration::{calibrate_alpha, CalibrationResult, SearchStrategy};
use crate::data_io::{generate_population, SyntheticDistribution, SyntheticSpec};
use crate::domain::{Metric, MetricKind, PriorPreset, PrivacyBudget, Universe};
use crate::error::{Error, Result};
use crate::estimation::{
    cldp_estimate, count_indices, grr_estimate, olh_estimate, rappor_estimate, CldpMode,
    FrequencyEstimate, FrequencyReport,
};
use crate::evaluation::{evaluate_counts, gram_set, jaccard, mine_ngrams, MetricsReport};
use crate::mechanisms::{grr_perturb, olh_perturb_index, rappor_perturb_index, GrrParams, OlhConfig, RapporConfig};
use crate::protocols::{
    item_cldp_run, recommended_mode, sequence_params, ItemCldpConfig, OrdinalCldp, SequenceCldp,
    SequenceMode, SequenceParams,
};
use crate::rng::{derive_seed, RandomSource};

const TAG_DATA: u64 = 0xda7a;
const TAG_PROTOCOL: u64 = 0x9707;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Protocol {
    Ordinal,
    Item,
    Sequence,
    Setvalued,
    Grr,
    Olh,
    Rappor,
}

impl Protocol {
    pub const ALL: [Protocol; 7] = [
        Protocol::Ordinal,
        Protocol::Item,
        Protocol::Sequence,
        Protocol::Setvalued,
        Protocol::Grr,
        Protocol::Olh,
        Protocol::Rappor,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Protocol::Ordinal => "ordinal",
            Protocol::Item => "item",
            Protocol::Sequence => "sequence",
            Protocol::Setvalued => "setvalued",
            Protocol::Grr => "grr",
            Protocol::Olh => "olh",
            Protocol::Rappor => "rappor",
        }
    }

    pub fn parse(name: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|p| p.name() == name)
            .ok_or_else(|| Error::InvalidParameter(format!("unknown protocol `{name}`")))
    }

    pub fn is_cldp(self) -> bool {
        matches!(self, Protocol::Ordinal | Protocol::Item | Protocol::Sequence | Protocol::Setvalued)
    }

    /// Sequence and set-valued protocols consume multi-item records.
    pub fn needs_records(self) -> bool {
        matches!(self, Protocol::Sequence | Protocol::Setvalued)
    }

    fn tag(self) -> u64 {
        self as u64
    }
}

/// Input data for a simulation.
#[derive(Debug, Clone, PartialEq)]
pub enum Dataset {
    /// A fresh population is drawn for every trial.
    Synthetic(SyntheticSpec),
    Singletons(Vec<usize>),
    Records(Vec<Vec<usize>>),
}

impl Dataset {
    fn describe(&self) -> DatasetSummary {
        match self {
            Dataset::Synthetic(spec) => DatasetSummary::Synthetic { spec: *spec },
            Dataset::Singletons(v) => DatasetSummary::Singletons { clients: v.len() },
            Dataset::Records(r) => DatasetSummary::Records {
                clients: r.len(),
                mean_len: mean_len(r),
            },
        }
    }
}

fn mean_len(records: &[Vec<usize>]) -> f64 {
    if records.is_empty() {
        return 0.0;
    }
    records.iter().map(Vec::len).sum::<usize>() as f64 / records.len() as f64
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum DatasetSummary {
    Synthetic { spec: SyntheticSpec },
    Singletons { clients: usize },
    Records { clients: usize, mean_len: f64 },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub protocols: Vec<Protocol>,
    /// LDP budget. CLDP protocols calibrate their alpha from it unless
    /// `alpha` is set.
    pub epsilon: Option<f64>,
    pub alpha: Option<f64>,
    pub prior: PriorPreset,
    pub metric: MetricKind,
    pub seed: u64,
    pub trials: usize,
    /// Item-CLDP round-one share of alpha.
    pub split: f64,
    pub max_len: usize,
    /// `None` picks by mean record length.
    pub mode: Option<SequenceMode>,
    pub halt: Option<f64>,
    pub k: usize,
    pub ngram: usize,
    pub dump_estimates: bool,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            protocols: vec![Protocol::Ordinal],
            epsilon: Some(1.0),
            alpha: None,
            prior: PriorPreset::Uniform,
            metric: MetricKind::Ordinal,
            seed: 0,
            trials: 1,
            split: crate::protocols::DEFAULT_SPLIT,
            max_len: crate::protocols::DEFAULT_MAX_LEN,
            mode: None,
            halt: None,
            k: 10,
            ngram: 2,
            dump_estimates: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Provenance {
    pub library: String,
    pub version: String,
    pub seed: u64,
    pub config: ExperimentConfig,
    pub data: DatasetSummary,
    pub notes: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrialResult {
    pub trial: usize,
    pub metrics: MetricsReport,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub ngram_jaccard: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub estimate: Option<FrequencyReport>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MeanMetrics {
    pub l1: f64,
    pub avre: f64,
    pub kendall_tau: f64,
    pub jaccard: f64,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub ngram_jaccard: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProtocolResult {
    pub protocol: Protocol,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub epsilon: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub alpha: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub sequence_params: Option<SequenceParams>,
    pub mean: MeanMetrics,
    pub trials: Vec<TrialResult>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentReport {
    pub provenance: Provenance,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub calibration: Option<CalibrationResult>,
    pub results: Vec<ProtocolResult>,
}

fn validate(config: &ExperimentConfig, data: &Dataset) -> Result<()> {
    if config.protocols.is_empty() {
        return Err(Error::InvalidParameter("no protocol selected".into()));
    }
    if config.trials == 0 {
        return Err(Error::InvalidParameter("trials must be at least 1".into()));
    }
    if config.epsilon.is_none() && config.alpha.is_none() {
        return Err(Error::InvalidBudget("either epsilon or alpha is required".into()));
    }
    for &p in &config.protocols {
        if !p.is_cldp() && config.epsilon.is_none() {
            return Err(Error::InvalidBudget(format!("{} needs epsilon", p.name())));
        }
        let records = matches!(data, Dataset::Records(_));
        if p.needs_records() != records {
            let kind = if records { "sequence records" } else { "singleton data" };
            return Err(Error::InvalidParameter(format!(
                "protocol {} cannot run on {kind}",
                p.name()
            )));
        }
    }
    Ok(())
}

/// Runs every configured protocol for `config.trials` trials.
pub fn run_experiment(config: &ExperimentConfig, universe: &Universe, data: &Dataset) -> Result<ExperimentReport> {
    validate(config, data)?;
    if let Dataset::Synthetic(spec) = data {
        if spec.universe_size != universe.size() {
            return Err(Error::SizeMismatch {
                expected: universe.size(),
                actual: spec.universe_size,
            });
        }
    }
    let metric: Metric<f64> = Metric::build(universe, &config.metric)?;
    metric.ensure_valid()?;

    let needs_calibration = config.alpha.is_none() && config.protocols.iter().any(|p| p.is_cldp());
    let calibration = if needs_calibration {
        let prior = config.prior.build::<f64>(universe.size())?;
        let eps = PrivacyBudget::epsilon(config.epsilon.expect("validated"))?;
        Some(calibrate_alpha(universe, &metric, &prior, &eps, SearchStrategy::default())?)
    } else {
        None
    };
    let alpha = config.alpha.or(calibration.map(|c| c.alpha));

    let mut notes = Vec::new();
    if let Some(c) = &calibration {
        notes.push(format!(
            "alpha = {} calibrated from epsilon = {} under the {} prior",
            c.alpha,
            c.epsilon,
            prior_name(&config.prior)
        ));
    }

    let results = config
        .protocols
        .iter()
        .map(|&p| run_protocol(p, config, universe, &metric, data, alpha))
        .collect::<Result<Vec<_>>>()?;

    Ok(ExperimentReport {
        provenance: Provenance {
            library: env!("CARGO_PKG_NAME").to_string(),
            version: env!("CARGO_PKG_VERSION").to_string(),
            seed: config.seed,
            config: config.clone(),
            data: data.describe(),
            notes,
        },
        calibration,
        results,
    })
}

fn prior_name(p: &PriorPreset) -> &'static str {
    match p {
        PriorPreset::Uniform => "uniform",
        PriorPreset::Gaussian { .. } => "gaussian",
        PriorPreset::Exponential { .. } => "exponential",
    }
}

/// Per-protocol state that does not change between trials.
enum Prepared {
    Ordinal(OrdinalCldp<f64>),
    Item(ItemCldpConfig),
    Sequence(SequenceCldp<f64>),
    Setvalued(SequenceCldp<f64>),
    Grr(GrrParams),
    Olh(OlhConfig),
    Rappor(RapporConfig),
}

fn prepare(
    protocol: Protocol,
    config: &ExperimentConfig,
    universe: &Universe,
    metric: &Metric<f64>,
    data: &Dataset,
    alpha: Option<f64>,
) -> Result<(Prepared, Option<SequenceParams>)> {
    let eps = || PrivacyBudget::epsilon(config.epsilon.expect("validated"));
    let alpha = || PrivacyBudget::alpha(alpha.expect("validated"));
    let seq_params = |records: &[Vec<usize>]| -> Result<SequenceParams> {
        let a = alpha()?;
        let mode = config
            .mode
            .unwrap_or_else(|| recommended_mode(mean_len(records), config.max_len));
        let halt = match (mode, config.halt) {
            (SequenceMode::Asymmetric, None) => {
                Some(SequenceParams::default_asymmetric_halt(a.value()))
            }
            (_, h) => h,
        };
        sequence_params(&a, mode, halt, config.max_len)
    };
    Ok(match (protocol, data) {
        (Protocol::Ordinal, _) => (Prepared::Ordinal(OrdinalCldp::new(universe, metric, &alpha()?)?), None),
        (Protocol::Item, _) => (Prepared::Item(ItemCldpConfig::new(alpha()?, config.split)?), None),
        (Protocol::Sequence | Protocol::Setvalued, Dataset::Records(records)) => {
            let params = seq_params(records)?;
            let s = SequenceCldp::new(universe, metric, &alpha()?, params)?;
            let prepared = if protocol == Protocol::Sequence {
                Prepared::Sequence(s)
            } else {
                Prepared::Setvalued(s)
            };
            (prepared, Some(params))
        }
        (Protocol::Sequence | Protocol::Setvalued, _) => unreachable!("rejected by validate"),
        (Protocol::Grr, _) => (Prepared::Grr(GrrParams::new(&eps()?, universe.size())?), None),
        (Protocol::Olh, _) => (Prepared::Olh(OlhConfig::new(&eps()?)?), None),
        (Protocol::Rappor, _) => (Prepared::Rappor(RapporConfig::one_hot(&eps()?)?), None),
    })
}

fn run_protocol(
    protocol: Protocol,
    config: &ExperimentConfig,
    universe: &Universe,
    metric: &Metric<f64>,
    data: &Dataset,
    alpha: Option<f64>,
) -> Result<ProtocolResult> {
    let (prepared, sequence_params) = prepare(protocol, config, universe, metric, data, alpha)?;
    let trials = (0..config.trials)
        .into_par_iter()
        .map(|t| run_trial(&prepared, config, universe, data, t, protocol))
        .collect::<Result<Vec<_>>>()?;

    let count = trials.len() as f64;
    let mean_of = |f: &dyn Fn(&TrialResult) -> f64| trials.iter().map(f).sum::<f64>() / count;
    let mean = MeanMetrics {
        l1: mean_of(&|r| r.metrics.l1),
        avre: mean_of(&|r| r.metrics.avre),
        kendall_tau: mean_of(&|r| r.metrics.kendall_tau),
        jaccard: mean_of(&|r| r.metrics.jaccard),
        ngram_jaccard: trials[0]
            .ngram_jaccard
            .map(|_| mean_of(&|r| r.ngram_jaccard.unwrap_or(0.0))),
    };
    Ok(ProtocolResult {
        protocol,
        epsilon: if protocol.is_cldp() { None } else { config.epsilon },
        alpha: if protocol.is_cldp() { alpha } else { None },
        sequence_params,
        mean,
        trials,
    })
}

/// Seed shared by every random choice of one trial of one protocol.
pub fn trial_seed(seed: u64, trial: usize, protocol: Protocol) -> u64 {
    derive_seed(seed, &[TAG_PROTOCOL, trial as u64, protocol.tag()])
}

/// Population of trial `trial`. Synthetic data is shared by every protocol.
pub fn trial_population(seed: u64, trial: usize, spec: &SyntheticSpec) -> Result<Vec<usize>> {
    let mut rng = RandomSource::new(derive_seed(seed, &[TAG_DATA, trial as u64]), 0);
    Ok(generate_population(spec, &mut rng)?.items)
}

fn per_client<T: Send>(n: usize, seed: u64, f: impl Fn(usize, &mut RandomSource) -> T + Sync) -> Vec<T> {
    (0..n)
        .into_par_iter()
        .map(|i| f(i, &mut RandomSource::new(seed, i as u64)))
        .collect()
}

fn run_trial(
    prepared: &Prepared,
    config: &ExperimentConfig,
    universe: &Universe,
    data: &Dataset,
    trial: usize,
    protocol: Protocol,
) -> Result<TrialResult> {
    let size = universe.size();
    let seed = trial_seed(config.seed, trial, protocol);
    let synthetic;
    let clients: &[usize] = match data {
        Dataset::Synthetic(spec) => {
            synthetic = trial_population(config.seed, trial, spec)?;
            &synthetic
        }
        Dataset::Singletons(v) => v,
        Dataset::Records(_) => &[],
    };

    let (truth, estimate, ngram_jaccard): (Vec<u64>, FrequencyEstimate, Option<f64>) = match prepared {
        Prepared::Ordinal(m) => {
            let reports = m.perturb_population(clients, seed)?;
            (count_indices(size, clients)?, cldp_estimate(&reports, size, CldpMode::Raw)?, None)
        }
        Prepared::Item(cfg) => {
            let trace = item_cldp_run(clients, cfg, universe, &RandomSource::new(seed, 0))?;
            (count_indices(size, clients)?, trace.estimate, None)
        }
        Prepared::Grr(g) => {
            let reports = per_client(clients.len(), seed, |i, r| grr_perturb(g, clients[i], r));
            let counts = count_indices(size, &reports)?;
            (count_indices(size, clients)?, grr_estimate(&counts, clients.len(), g.epsilon)?, None)
        }
        Prepared::Olh(cfg) => {
            let reports = per_client(clients.len(), seed, |i, r| olh_perturb_index(cfg, clients[i], r));
            (count_indices(size, clients)?, olh_estimate(&reports, cfg, size)?, None)
        }
        Prepared::Rappor(cfg) => {
            let reports = per_client(clients.len(), seed, |i, r| rappor_perturb_index(cfg, size, clients[i], r));
            (count_indices(size, clients)?, rappor_estimate(&reports, cfg, size)?, None)
        }
        Prepared::Sequence(s) => {
            let Dataset::Records(records) = data else { unreachable!() };
            let outputs = per_client(records.len(), seed, |i, r| s.perturb(&records[i], r))
                .into_iter()
                .collect::<Result<Vec<_>>>()?;
            let truth = count_indices(size, &records.concat())?;
            let est = FrequencyEstimate::from_counts(&count_indices(size, &outputs.concat())?);
            let true_top = mine_ngrams(records, config.ngram, config.k)?;
            let est_top = mine_ngrams(&outputs, config.ngram, config.k)?;
            (truth, est, Some(jaccard(&gram_set(&true_top), &gram_set(&est_top))))
        }
        Prepared::Setvalued(s) => {
            let Dataset::Records(records) = data else { unreachable!() };
            let sets: Vec<BTreeSet<usize>> = records.iter().map(|r| r.iter().copied().collect()).collect();
            let outputs = per_client(sets.len(), seed, |i, r| s.perturb_set(&sets[i], r))
                .into_iter()
                .collect::<Result<Vec<_>>>()?;
            let flat = |v: &[BTreeSet<usize>]| v.iter().flatten().copied().collect::<Vec<_>>();
            let truth = count_indices(size, &flat(&sets))?;
            let est = FrequencyEstimate::from_counts(&count_indices(size, &flat(&outputs))?);
            (truth, est, None)
        }
    };

    let truth: Vec<f64> = truth.iter().map(|&c| c as f64).collect();
    let positive = truth.iter().filter(|&&c| c > 0.0).count();
    let k = config.k.min(positive);
    if k < 2 {
        return Err(Error::InvalidParameter(format!(
            "trial {trial}: fewer than two items occur in the data"
        )));
    }
    let metrics = evaluate_counts(&truth, &estimate.raw_counts, k)?;
    Ok(TrialResult {
        trial,
        metrics,
        ngram_jaccard,
        estimate: config.dump_estimates.then(|| estimate.to_report(universe)),
    })
}

/// Small-population utility setup: Gaussian(50, 12) over `0..100`.
pub fn gaussian_population_spec(n: usize) -> SyntheticSpec {
    SyntheticSpec {
        distribution: SyntheticDistribution::Gaussian { mean: 50.0, std: 12.0 },
        n,
        universe_size: 100,
    }
}
