use super::MechanismDistribution;
use crate::domain::{BudgetKind, PrivacyBudget, Universe};
use crate::error::{Error, Result};
use crate::rng::RandomSource;
use crate::scalar::Scalar;

/// Keep/replace probabilities of generalized randomized response over a
/// domain of `size` values: `p = e^ε / (e^ε + size - 1)`, `q = 1 / (...)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GrrParams {
    pub epsilon: f64,
    pub size: usize,
    pub p: f64,
    pub q: f64,
}

impl GrrParams {
    pub fn new(epsilon: &PrivacyBudget, size: usize) -> Result<Self> {
        let eps = epsilon.expect(BudgetKind::Epsilon)?;
        Self::from_value(eps, size)
    }

    pub(crate) fn from_value(eps: f64, size: usize) -> Result<Self> {
        if size < 2 {
            return Err(Error::InvalidParameter(format!("GRR domain size {size} < 2")));
        }
        let e = eps.exp();
        let denom = e + (size - 1) as f64;
        Ok(Self {
            epsilon: eps,
            size,
            p: e / denom,
            q: 1.0 / denom,
        })
    }

    pub fn row<T: Scalar>(&self, v: usize) -> Vec<T> {
        let (p, q) = self.exact::<T>();
        (0..self.size).map(|y| if y == v { p } else { q }).collect()
    }

    /// `p` and `q` evaluated in `T` arithmetic.
    pub fn exact<T: Scalar>(&self) -> (T, T) {
        let e = T::lit(self.epsilon).exp();
        let denom = e + T::from_usize(self.size - 1).unwrap();
        (e / denom, T::one() / denom)
    }
}

pub fn grr_distribution<T: Scalar>(
    universe: &Universe,
    epsilon: &PrivacyBudget,
    item: &str,
) -> Result<Vec<T>> {
    let params = GrrParams::new(epsilon, universe.size())?;
    Ok(params.row(universe.require(item)?))
}

pub fn grr_matrix<T: Scalar>(
    universe: &Universe,
    epsilon: &PrivacyBudget,
) -> Result<MechanismDistribution<T>> {
    let params = GrrParams::new(epsilon, universe.size())?;
    let rows = (0..universe.size()).map(|v| params.row(v)).collect();
    MechanismDistribution::over_universe(universe, rows)
}

/// Keeps `v` with probability `p`, otherwise reports one of the other
/// `size - 1` values uniformly.
pub fn grr_perturb(params: &GrrParams, v: usize, rng: &mut RandomSource) -> usize {
    if rng.bernoulli(params.p) {
        v
    } else {
        let r = rng.below(params.size - 1);
        if r >= v {
            r + 1
        } else {
            r
        }
    }
}
