//! The CLDP collection protocols.
//!
//! * [`OrdinalCldp`]: single-round EM over a domain with a natural metric.
//! * [`item_cldp_run`]: two rounds for items without a metric. Round one
//!   perturbs under a random total order, the server de-noises the counts into
//!   a ranking, and round two perturbs under the ranking-induced metric.
//! * [`SequenceCldp`]: per-element EM with random truncation and dummy
//!   padding that hides both length and content of an item sequence.

mod item;
mod ordinal;
mod sequence;

pub use item::{
    item_cldp_denoise, item_cldp_run, DenoiseOutput, ItemCldpConfig, ItemCldpTrace,
    ItemCldpTraceReport, DEFAULT_SPLIT,
};
pub use ordinal::{ordinal_cldp_perturb, OrdinalCldp};
pub use sequence::{
    d_seq, recommended_mode, sequence_cldp_perturb, sequence_params, setvalued_perturb,
    SequenceCldp, SequenceMode, SequenceParams, SequenceRecord, DEFAULT_MAX_LEN,
};
