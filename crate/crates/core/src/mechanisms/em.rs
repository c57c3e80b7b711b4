use super::MechanismDistribution;
use crate::domain::{BudgetKind, Metric, PrivacyBudget, Universe};
use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Output distribution of the exponential mechanism for the input at
/// `index`: `Pr[y] ∝ exp(-alpha * d(v, y) / 2)`.
///
/// Scores are normalized in log space, so large `alpha * d` underflows to an
/// exact zero for far items instead of turning the whole row into NaN.
pub fn em_row<T: Scalar>(metric: &Metric<T>, alpha: T, index: usize) -> Vec<T> {
    let half = T::lit(0.5);
    let logits: Vec<T> = metric.row(index).iter().map(|&d| -alpha * d * half).collect();
    let top = logits.iter().copied().fold(T::neg_infinity(), T::max);
    let scores: Vec<T> = logits.iter().map(|&l| (l - top).exp()).collect();
    let total: T = scores.iter().copied().sum();
    scores.into_iter().map(|s| s / total).collect()
}

fn checked_alpha<T: Scalar>(universe: &Universe, metric: &Metric<T>, alpha: &PrivacyBudget) -> Result<T> {
    let a = alpha.expect(BudgetKind::Alpha)?;
    if metric.size() != universe.size() {
        return Err(Error::SizeMismatch {
            expected: universe.size(),
            actual: metric.size(),
        });
    }
    Ok(T::lit(a))
}

/// EM output distribution over the universe for true item `item`.
pub fn em_distribution<T: Scalar>(
    universe: &Universe,
    metric: &Metric<T>,
    alpha: &PrivacyBudget,
    item: &str,
) -> Result<Vec<T>> {
    let a = checked_alpha(universe, metric, alpha)?;
    let v = universe.require(item)?;
    Ok(em_row(metric, a, v))
}

/// Full EM table, one row per true item.
pub fn em_matrix<T: Scalar>(
    universe: &Universe,
    metric: &Metric<T>,
    alpha: &PrivacyBudget,
) -> Result<MechanismDistribution<T>> {
    let a = checked_alpha(universe, metric, alpha)?;
    let rows = (0..universe.size()).map(|v| em_row(metric, a, v)).collect();
    MechanismDistribution::over_universe(universe, rows)
}
