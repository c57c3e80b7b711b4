//! Condensed local differential privacy (CLDP).
//!
//! Client-side perturbation primitives, the Bayesian-adversary calibration that
//! maps an LDP budget `epsilon` onto a CLDP budget `alpha`, the three CLDP
//! collection protocols (ordinal, item and sequence), server-side estimators
//! and the utility metrics used to compare them against GRR, OLH and RAPPOR.
//!
//! The numeric core is generic over [`Scalar`] (`f32` or `f64`). The aliases
//! at the crate root pin the `f64` instantiation used by the simulation
//! pipeline and the CLI.

pub mod calibration;
pub mod data_io;
pub mod domain;
pub mod error;
pub mod estimation;
pub mod evaluation;
pub mod experiment;
pub mod mechanisms;
pub mod protocols;
pub mod rng;
pub mod scalar;

pub use calibration::{calibrate_alpha, compute_mpc, CalibrationResult, SearchStrategy};
pub use domain::{
    Axiom, BudgetKind, MetricKind, PriorPreset, PrivacyBudget, Universe, Violation,
};
pub use error::{Error, Result};
pub use estimation::FrequencyEstimate;
pub use mechanisms::{OlhConfig, OlhReport, RapporConfig, RapporEncoding};
pub use rng::RandomSource;
pub use scalar::Scalar;

/// Distance table over universe indices, `f64` precision.
pub type Metric = domain::Metric<f64>;
/// Distance table over universe indices, `f32` precision.
pub type Metric32 = domain::Metric<f32>;
/// Prior over the universe, `f64` precision.
pub type Prior = domain::Prior<f64>;
/// Prior over the universe, `f32` precision.
pub type Prior32 = domain::Prior<f32>;
/// Row-stochastic mechanism table, `f64` precision.
pub type MechanismDistribution = mechanisms::MechanismDistribution<f64>;
/// Row-stochastic mechanism table, `f32` precision.
pub type MechanismDistribution32 = mechanisms::MechanismDistribution<f32>;
/// Item-CLDP de-noising result, `f64` precision.
pub type DenoiseOutput = protocols::DenoiseOutput<f64>;
/// Sequence-CLDP randomizer, `f64` precision.
pub type SequenceCldp = protocols::SequenceCldp<f64>;
/// Ordinal-CLDP randomizer, `f64` precision.
pub type OrdinalCldp = protocols::OrdinalCldp<f64>;
