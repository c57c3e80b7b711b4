use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BudgetKind {
    /// LDP budget.
    Epsilon,
    /// CLDP budget.
    Alpha,
}

/// A strictly positive privacy parameter tagged with the notion it belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PrivacyBudget {
    value: f64,
    kind: BudgetKind,
}

impl PrivacyBudget {
    pub fn new(value: f64, kind: BudgetKind) -> Result<Self> {
        if !(value.is_finite() && value > 0.0) {
            return Err(Error::InvalidBudget(format!(
                "{kind:?} must be positive and finite, got {value}"
            )));
        }
        Ok(Self { value, kind })
    }

    pub fn epsilon(value: f64) -> Result<Self> {
        Self::new(value, BudgetKind::Epsilon)
    }

    pub fn alpha(value: f64) -> Result<Self> {
        Self::new(value, BudgetKind::Alpha)
    }

    pub fn value(&self) -> f64 {
        self.value
    }

    pub fn kind(&self) -> BudgetKind {
        self.kind
    }

    /// Returns the value if the budget is of the expected kind.
    pub fn expect(&self, kind: BudgetKind) -> Result<f64> {
        if self.kind == kind {
            Ok(self.value)
        } else {
            Err(Error::InvalidBudget(format!(
                "expected {kind:?} budget, got {:?}",
                self.kind
            )))
        }
    }

    /// Same kind, value multiplied by `factor`.
    pub fn scaled(&self, factor: f64) -> Result<Self> {
        Self::new(self.value * factor, self.kind)
    }
}
