//! Bayesian-adversary calibration.
//!
//! The adversary sees one perturbed report `y` and guesses the input with the
//! highest posterior `π(v)·Pr[f(v)=y] / Σ_z π(z)·Pr[f(z)=y]`. The maximum of
//! that posterior over all `(v, y)` is the mechanism's maximum posterior
//! confidence (MPC). Calibration picks the largest CLDP `alpha` whose EM
//! has MPC no larger than GRR at the given `epsilon`.

use serde::{Deserialize, Serialize};

use crate::domain::{BudgetKind, Metric, Prior, PrivacyBudget, Universe};
use crate::error::{Error, Result};
use crate::mechanisms::{em_matrix, grr_matrix, MechanismDistribution};
use crate::scalar::Scalar;

pub const DEFAULT_TOLERANCE: f64 = 1e-4;
pub const ITERATION_CAP: usize = 1_000_000;
/// Upper end of the alpha search window, as a multiple of epsilon.
pub const WINDOW_FACTOR: f64 = 10.0;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CalibrationResult {
    pub epsilon: f64,
    pub alpha: f64,
    pub mpc_ldp: f64,
    pub mpc_cldp: f64,
    pub iterations: usize,
    pub search_tolerance: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SearchStrategy {
    /// Bisection on alpha until the bracket is narrower than `tolerance`.
    Bisection { tolerance: f64 },
    /// Increment alpha by `step` until the MPC constraint breaks.
    LinearScan { step: f64 },
}

impl Default for SearchStrategy {
    fn default() -> Self {
        SearchStrategy::Bisection {
            tolerance: DEFAULT_TOLERANCE,
        }
    }
}

/// Maximum posterior confidence of `mech` against an adversary with prior
/// `prior`.
pub fn compute_mpc<T: Scalar>(mech: &MechanismDistribution<T>, prior: &Prior<T>) -> Result<T> {
    if prior.len() != mech.n_inputs() {
        return Err(Error::SizeMismatch {
            expected: mech.n_inputs(),
            actual: prior.len(),
        });
    }
    let mut best = T::zero();
    for y in 0..mech.n_outputs() {
        let mut mass = T::zero();
        for z in 0..mech.n_inputs() {
            mass = mass + prior.get(z) * mech.prob(z, y);
        }
        if !(mass > T::zero()) {
            return Err(Error::ZeroMassColumn(y));
        }
        for v in 0..mech.n_inputs() {
            let posterior = prior.get(v) * mech.prob(v, y) / mass;
            if posterior > best {
                best = posterior;
            }
        }
    }
    Ok(best)
}

/// MPC of the exponential mechanism at `alpha`.
pub fn em_mpc<T: Scalar>(
    universe: &Universe,
    metric: &Metric<T>,
    prior: &Prior<T>,
    alpha: f64,
) -> Result<T> {
    compute_mpc(&em_matrix(universe, metric, &PrivacyBudget::alpha(alpha)?)?, prior)
}

/// MPC of GRR at `epsilon`.
pub fn grr_mpc<T: Scalar>(universe: &Universe, prior: &Prior<T>, epsilon: &PrivacyBudget) -> Result<T> {
    compute_mpc(&grr_matrix(universe, epsilon)?, prior)
}

/// Largest `alpha` with `MPC(EM(alpha)) <= MPC(GRR(epsilon))`.
///
/// The search relies on EM's MPC being non-decreasing in alpha. The result
/// brackets the crossing: `mpc_cldp <= mpc_ldp` at `alpha` and the MPC at
/// `alpha + search_tolerance` exceeds `mpc_ldp`.
pub fn calibrate_alpha<T: Scalar>(
    universe: &Universe,
    metric: &Metric<T>,
    prior: &Prior<T>,
    epsilon: &PrivacyBudget,
    search: SearchStrategy,
) -> Result<CalibrationResult> {
    let eps = epsilon.expect(BudgetKind::Epsilon)?;
    metric.ensure_valid()?;
    if prior.len() != universe.size() {
        return Err(Error::SizeMismatch {
            expected: universe.size(),
            actual: prior.len(),
        });
    }
    let target = grr_mpc(universe, prior, epsilon)?;
    let mpc = |alpha: f64| em_mpc(universe, metric, prior, alpha);
    let window = WINDOW_FACTOR * eps;

    let (alpha, iterations, tolerance) = match search {
        SearchStrategy::Bisection { tolerance } => {
            if !(tolerance > 0.0) {
                return Err(Error::InvalidParameter(format!("tolerance {tolerance}")));
            }
            if mpc(window)? <= target {
                return Err(Error::NonConvergence(format!(
                    "MPC constraint still holds at the window edge alpha = {window}"
                )));
            }
            let (mut lo, mut hi) = (0.0f64, window);
            let mut iterations = 0;
            while hi - lo > tolerance {
                if iterations >= ITERATION_CAP {
                    return Err(Error::NonConvergence(format!(
                        "bracket [{lo}, {hi}] after {iterations} iterations"
                    )));
                }
                iterations += 1;
                let mid = 0.5 * (lo + hi);
                if mpc(mid)? <= target {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            (lo, iterations, tolerance)
        }
        SearchStrategy::LinearScan { step } => {
            if !(step > 0.0) {
                return Err(Error::InvalidParameter(format!("step {step}")));
            }
            let mut k = 0usize;
            loop {
                if k >= ITERATION_CAP {
                    return Err(Error::NonConvergence(format!(
                        "no crossing after {k} steps of {step}"
                    )));
                }
                let next = (k + 1) as f64 * step;
                if next > window {
                    return Err(Error::NonConvergence(format!(
                        "MPC constraint still holds at the window edge alpha = {window}"
                    )));
                }
                if mpc(next)? > target {
                    break;
                }
                k += 1;
            }
            (k as f64 * step, k + 1, step)
        }
    };
    if !(alpha > 0.0) {
        return Err(Error::NonConvergence(
            "no positive alpha within the search tolerance satisfies the MPC constraint".into(),
        ));
    }
    Ok(CalibrationResult {
        epsilon: eps,
        alpha,
        mpc_ldp: target.as_f64(),
        mpc_cldp: mpc(alpha)?.as_f64(),
        iterations,
        search_tolerance: tolerance,
    })
}
