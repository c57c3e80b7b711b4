//! Per-report perturbation primitives.
//!
//! The exponential mechanism is the CLDP building block; GRR, OLH and RAPPOR
//! are the epsilon-LDP baselines. EM and GRR expose exact output
//! distributions (needed by calibration); OLH and RAPPOR expose samplers and
//! their analytic per-cell probabilities.

mod distribution;
mod em;
mod grr;
mod olh;
mod rappor;
mod sample;

pub use distribution::MechanismDistribution;
pub use em::{em_distribution, em_matrix, em_row};
pub use grr::{grr_distribution, grr_matrix, grr_perturb, GrrParams};
pub use olh::{olh_perturb, olh_perturb_index, olh_supports, OlhConfig, OlhReport};
pub use rappor::{
    rappor_output_probability, rappor_perturb, rappor_perturb_index, RapporConfig,
    RapporEncoding, DEFAULT_BLOOM_BITS, DEFAULT_BLOOM_HASHES,
};
pub use sample::{sample, CumulativeSampler};
