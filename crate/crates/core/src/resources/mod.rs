//! Circuit-cost accounting: the per-iteration cost recursion and
//! complexity estimators.

mod estimate;
mod ledger;

pub use estimate::{complexity_estimate, ComplexityEstimate, CostRegime, FormulaInputs};
pub use ledger::{ledger_advance, ledger_closed_form, Invocations, ResourceLedger, StepCosts};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ResourceError {
    #[error("invalid {what}: {value}")]
    InvalidInput { what: &'static str, value: f64 },
}
