use serde::{Deserialize, Serialize};
use statrs::distribution::{ContinuousCDF, Normal};

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Adversary's prior over universe indices.
#[derive(Debug, Clone, PartialEq)]
pub struct Prior<T = f64> {
    probs: Vec<T>,
}

/// Prior families used for calibration. Continuous ones are discretized by
/// rounding to the nearest integer position and renormalized over the
/// universe.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum PriorPreset {
    Uniform,
    Gaussian { mean: f64, std: f64 },
    Exponential { rate: f64 },
}

impl PriorPreset {
    pub fn build<T: Scalar>(&self, n: usize) -> Result<Prior<T>> {
        match *self {
            PriorPreset::Uniform => Ok(Prior::uniform(n)),
            PriorPreset::Gaussian { mean, std } => Prior::gaussian(n, mean, std),
            PriorPreset::Exponential { rate } => Prior::exponential(n, rate),
        }
    }
}

impl<T: Scalar> Prior<T> {
    pub fn new(probs: Vec<T>) -> Result<Self> {
        if probs.is_empty() {
            return Err(Error::InvalidPrior("empty".into()));
        }
        if let Some(p) = probs.iter().find(|p| !(p.is_finite() && **p >= T::zero())) {
            return Err(Error::InvalidPrior(format!("negative or non-finite entry {p}")));
        }
        let total: T = probs.iter().copied().sum();
        if (total - T::one()).abs() > T::tolerance() {
            return Err(Error::InvalidPrior(format!("entries sum to {total}")));
        }
        Ok(Self { probs })
    }

    pub fn uniform(n: usize) -> Self {
        let p = T::one() / T::from_usize(n).unwrap();
        Self { probs: vec![p; n] }
    }

    /// Normal(mean, std) mass on each rounding cell `[i - 0.5, i + 0.5)`.
    pub fn gaussian(n: usize, mean: f64, std: f64) -> Result<Self> {
        let normal = Normal::new(mean, std)
            .map_err(|e| Error::InvalidPrior(format!("gaussian({mean}, {std}): {e}")))?;
        Self::from_cells(n, |x| normal.cdf(x))
    }

    /// Exponential(rate) mass on each rounding cell.
    pub fn exponential(n: usize, rate: f64) -> Result<Self> {
        if !(rate.is_finite() && rate > 0.0) {
            return Err(Error::InvalidPrior(format!("exponential rate {rate}")));
        }
        Self::from_cells(n, |x| if x <= 0.0 { 0.0 } else { 1.0 - (-rate * x).exp() })
    }

    fn from_cells(n: usize, cdf: impl Fn(f64) -> f64) -> Result<Self> {
        let mass: Vec<f64> = (0..n)
            .map(|i| cdf(i as f64 + 0.5) - cdf(i as f64 - 0.5))
            .collect();
        let total: f64 = mass.iter().sum();
        if !(total > 0.0) {
            return Err(Error::InvalidPrior("no mass inside the universe".into()));
        }
        Ok(Self {
            probs: mass.into_iter().map(|m| T::lit(m / total)).collect(),
        })
    }

    pub fn len(&self) -> usize {
        self.probs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.probs.is_empty()
    }

    pub fn probs(&self) -> &[T] {
        &self.probs
    }

    #[inline]
    pub fn get(&self, i: usize) -> T {
        self.probs[i]
    }
}
