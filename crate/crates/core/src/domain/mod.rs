//! Universe, distance metrics, priors and privacy budgets shared by every
//! other module. All of these are immutable once built.

mod budget;
mod metric;
mod prior;
mod universe;

pub use budget::{BudgetKind, PrivacyBudget};
pub use metric::{Axiom, Metric, MetricKind, Violation};
pub use prior::{Prior, PriorPreset};
pub use universe::Universe;
