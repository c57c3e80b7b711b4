use super::distribution::check_probability_vector;
use crate::error::{Error, Result};
use crate::rng::RandomSource;
use crate::scalar::Scalar;

/// Inverse-CDF sampler over a validated probability vector.
#[derive(Debug, Clone)]
pub struct CumulativeSampler {
    cdf: Vec<f64>,
}

impl CumulativeSampler {
    pub fn new<T: Scalar>(dist: &[T]) -> Result<Self> {
        check_probability_vector(dist).map_err(Error::InvalidDistribution)?;
        let mut acc = 0.0;
        let cdf = dist
            .iter()
            .map(|p| {
                acc += p.as_f64();
                acc
            })
            .collect();
        Ok(Self { cdf })
    }

    pub fn len(&self) -> usize {
        self.cdf.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cdf.is_empty()
    }

    /// Draws one index. Zero-probability indices are never returned.
    #[inline]
    pub fn draw(&self, rng: &mut RandomSource) -> usize {
        let total = *self.cdf.last().expect("non-empty");
        let target = rng.uniform() * total;
        self.cdf.partition_point(|&c| c <= target).min(self.cdf.len() - 1)
    }
}

/// Draws an index with probability `dist[i]`.
pub fn sample<T: Scalar>(dist: &[T], rng: &mut RandomSource) -> Result<usize> {
    Ok(CumulativeSampler::new(dist)?.draw(rng))
}
