use std::collections::BTreeSet;

use rand::seq::SliceRandom;
use serde::{Deserialize, Serialize};

use super::OrdinalCldp;
use crate::domain::{BudgetKind, Metric, PrivacyBudget, Universe};
use crate::error::{Error, Result};
use crate::rng::RandomSource;
use crate::scalar::Scalar;

pub const DEFAULT_MAX_LEN: usize = 30;

/// A sequence of universe indices. The padding symbol is internal to the
/// randomizer and never appears here.
pub type SequenceRecord = Vec<usize>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SequenceMode {
    /// `halt = gen = 1 / (e^α + 1)`.
    Symmetric,
    /// `halt < 1 / (e^α + 1)` with `gen` in `[1 - e^α·halt, 1 - halt/e^α]`.
    Asymmetric,
    /// Arbitrary probabilities, no privacy guarantee. Diagnostics only.
    Unchecked,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SequenceParams {
    pub halt: f64,
    pub gen: f64,
    pub max_len: usize,
    pub mode: SequenceMode,
}

/// Halting/generation probabilities that satisfy both length and content
/// indistinguishability at `alpha`.
///
/// Asymmetric mode needs `halt_override`; `gen` defaults to the midpoint of
/// its legal range (see [`SequenceParams::with_gen`]).
pub fn sequence_params(
    alpha: &PrivacyBudget,
    mode: SequenceMode,
    halt_override: Option<f64>,
    max_len: usize,
) -> Result<SequenceParams> {
    let a = alpha.expect(BudgetKind::Alpha)?;
    if max_len == 0 {
        return Err(Error::InvalidParameter("max_len must be positive".into()));
    }
    let e = a.exp();
    let bound = 1.0 / (e + 1.0);
    match mode {
        SequenceMode::Symmetric => {
            if halt_override.is_some() {
                return Err(Error::InvalidParameter(
                    "halt override applies only to asymmetric mode".into(),
                ));
            }
            Ok(SequenceParams {
                halt: bound,
                gen: bound,
                max_len,
                mode,
            })
        }
        SequenceMode::Asymmetric => {
            let halt = halt_override.ok_or_else(|| {
                Error::InvalidParameter("asymmetric mode requires a halt probability".into())
            })?;
            if !(halt > 0.0 && halt < bound) {
                return Err(Error::InvalidParameter(format!(
                    "halt = {halt} outside (0, {bound}) for alpha = {a}"
                )));
            }
            let (lo, hi) = gen_range(a, halt);
            Ok(SequenceParams {
                halt,
                gen: 0.5 * (lo + hi),
                max_len,
                mode,
            })
        }
        SequenceMode::Unchecked => Err(Error::InvalidParameter(
            "use SequenceParams::unchecked for diagnostic parameters".into(),
        )),
    }
}

/// Legal `gen` interval for asymmetric `halt`.
fn gen_range(alpha: f64, halt: f64) -> (f64, f64) {
    let e = alpha.exp();
    (1.0 - e * halt, 1.0 - halt / e)
}

/// Symmetric for short inputs, asymmetric once the mean input length exceeds
/// half of `max_len`.
pub fn recommended_mode(mean_len: f64, max_len: usize) -> SequenceMode {
    if mean_len > max_len as f64 / 2.0 {
        SequenceMode::Asymmetric
    } else {
        SequenceMode::Symmetric
    }
}

impl SequenceParams {
    /// Halt probability used when asymmetric mode is requested without one:
    /// half of the symmetric value.
    pub fn default_asymmetric_halt(alpha: f64) -> f64 {
        0.5 / (alpha.exp() + 1.0)
    }

    /// Replaces `gen` with an explicit value inside the asymmetric range.
    pub fn with_gen(self, alpha: &PrivacyBudget, gen: f64) -> Result<Self> {
        let a = alpha.expect(BudgetKind::Alpha)?;
        if self.mode != SequenceMode::Asymmetric {
            return Err(Error::InvalidParameter("gen can only be set in asymmetric mode".into()));
        }
        let (lo, hi) = gen_range(a, self.halt);
        if !(gen >= lo - 1e-12 && gen <= hi + 1e-12 && gen > 0.0 && gen < 1.0) {
            return Err(Error::InvalidParameter(format!("gen = {gen} outside [{lo}, {hi}]")));
        }
        Ok(Self { gen, ..self })
    }

    /// Probabilities in `[0, 1)` with no privacy check.
    pub fn unchecked(halt: f64, gen: f64, max_len: usize) -> Result<Self> {
        if !((0.0..1.0).contains(&halt) && (0.0..1.0).contains(&gen)) || max_len == 0 {
            return Err(Error::InvalidParameter(format!(
                "halt = {halt}, gen = {gen}, max_len = {max_len}"
            )));
        }
        Ok(Self {
            halt,
            gen,
            max_len,
            mode: SequenceMode::Unchecked,
        })
    }

    /// Exact distribution of the output length for an input of length
    /// `input_len`, indexed `0..=max_len`.
    ///
    /// Below the input length the run halted at that position; above it the
    /// run generated dummies and then stopped. At `max_len` the loop ends on
    /// its own, so that bucket carries no stopping factor.
    pub fn length_pmf<T: Scalar>(&self, input_len: usize) -> Result<Vec<T>> {
        if input_len > self.max_len {
            return Err(Error::SequenceTooLong {
                len: input_len,
                max_len: self.max_len,
            });
        }
        let halt = T::lit(self.halt);
        let gen = T::lit(self.gen);
        let keep = T::one() - halt;
        let survived = keep.powi(input_len as i32);
        Ok((0..=self.max_len)
            .map(|len| {
                if len < input_len {
                    halt * keep.powi(len as i32)
                } else {
                    let dummies = gen.powi((len - input_len) as i32);
                    let stop = if len < self.max_len { T::one() - gen } else { T::one() };
                    survived * dummies * stop
                }
            })
            .collect())
    }
}

/// `Σ_i d(x[i], y[i])` for equal-length sequences.
pub fn d_seq<T: Scalar>(metric: &Metric<T>, x: &[usize], y: &[usize]) -> Result<T> {
    if x.len() != y.len() {
        return Err(Error::SizeMismatch {
            expected: x.len(),
            actual: y.len(),
        });
    }
    Ok(x.iter().zip(y).map(|(&a, &b)| metric.get(a, b)).sum())
}

/// Sequence-CLDP randomizer.
#[derive(Debug, Clone)]
pub struct SequenceCldp<T = f64> {
    em: OrdinalCldp<T>,
    params: SequenceParams,
}

impl<T: Scalar> SequenceCldp<T> {
    pub fn new(
        universe: &Universe,
        metric: &Metric<T>,
        alpha: &PrivacyBudget,
        params: SequenceParams,
    ) -> Result<Self> {
        Ok(Self {
            em: OrdinalCldp::new(universe, metric, alpha)?,
            params,
        })
    }

    pub fn params(&self) -> &SequenceParams {
        &self.params
    }

    pub fn element_mechanism(&self) -> &OrdinalCldp<T> {
        &self.em
    }

    fn check_input(&self, x: &[usize]) -> Result<()> {
        if x.len() > self.params.max_len {
            return Err(Error::SequenceTooLong {
                len: x.len(),
                max_len: self.params.max_len,
            });
        }
        if let Some(&bad) = x.iter().find(|&&v| v >= self.em.size()) {
            return Err(Error::IndexOutOfRange {
                index: bad,
                size: self.em.size(),
            });
        }
        Ok(())
    }

    /// Pads `x` to `max_len`; real positions halt with probability `halt` or
    /// append their EM perturbation, padding positions append a uniform item
    /// with probability `gen` or stop. A halt ends the whole output.
    pub fn perturb(&self, x: &[usize], rng: &mut RandomSource) -> Result<SequenceRecord> {
        self.check_input(x)?;
        let mut out = Vec::with_capacity(self.params.max_len);
        for i in 0..self.params.max_len {
            match x.get(i) {
                Some(&v) => {
                    if rng.bernoulli(self.params.halt) {
                        return Ok(out);
                    }
                    out.push(self.em.perturb(v, rng)?);
                }
                None => {
                    if !rng.bernoulli(self.params.gen) {
                        return Ok(out);
                    }
                    out.push(rng.below(self.em.size()));
                }
            }
        }
        Ok(out)
    }

    /// Imposes a random order on the set, perturbs it as a sequence and
    /// drops the order again (duplicates collapse).
    pub fn perturb_set(&self, itemset: &BTreeSet<usize>, rng: &mut RandomSource) -> Result<BTreeSet<usize>> {
        let mut seq: Vec<usize> = itemset.iter().copied().collect();
        seq.shuffle(rng);
        Ok(self.perturb(&seq, rng)?.into_iter().collect())
    }

    /// Exact probability that `x` is randomized into exactly `s`.
    pub fn output_probability(&self, x: &[usize], s: &[usize]) -> Result<T> {
        self.check_input(x)?;
        let p = &self.params;
        if s.len() > p.max_len || s.iter().any(|&v| v >= self.em.size()) {
            return Ok(T::zero());
        }
        let halt = T::lit(p.halt);
        let gen = T::lit(p.gen);
        let keep = T::one() - halt;
        let matrix = self.em.matrix();
        let real = x.len().min(s.len());
        let mut prob = (0..real).fold(T::one(), |acc, i| acc * keep * matrix.prob(x[i], s[i]));
        if s.len() < x.len() {
            prob = prob * halt;
        } else {
            let pick = gen / T::from_usize(self.em.size()).unwrap();
            prob = prob * pick.powi((s.len() - x.len()) as i32);
            if s.len() < p.max_len {
                prob = prob * (T::one() - gen);
            }
        }
        Ok(prob)
    }
}

/// One-shot Sequence-CLDP report.
pub fn sequence_cldp_perturb<T: Scalar>(
    x: &[usize],
    params: SequenceParams,
    alpha: &PrivacyBudget,
    universe: &Universe,
    metric: &Metric<T>,
    rng: &mut RandomSource,
) -> Result<SequenceRecord> {
    SequenceCldp::new(universe, metric, alpha, params)?.perturb(x, rng)
}

/// One-shot set-valued report.
pub fn setvalued_perturb<T: Scalar>(
    itemset: &BTreeSet<usize>,
    params: SequenceParams,
    alpha: &PrivacyBudget,
    universe: &Universe,
    metric: &Metric<T>,
    rng: &mut RandomSource,
) -> Result<BTreeSet<usize>> {
    SequenceCldp::new(universe, metric, alpha, params)?.perturb_set(itemset, rng)
}
