//! Per-run circuit-cost ledger for the quantum iteration.

use serde::{Deserialize, Serialize};

/// Uses of the iterate encoding `U_x⁽ᵏ⁾` and of the row preparation `U_j`
/// inside one iteration.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Invocations {
    pub iterate: u32,
    pub row_prep: u32,
}

/// What one iteration actually did, as recorded by the pipeline.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct StepCosts {
    pub invocations: Invocations,
    /// Logical ancilla qubits introduced by the iteration's combinators.
    pub ancillas_added: u64,
    /// Depth of the row preparations and amplifications, in units.
    pub depth: u64,
    /// Uses of amplified encodings charged by the singular-value amplifications.
    pub amplification_queries: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ResourceLedger {
    pub c0: u128,
    pub c_prep: u128,
    /// `C_0, C_1, ...`
    pub per_step: Vec<u128>,
    pub ancilla_total: u64,
    pub depth_total: u64,
    pub amplification_queries: u64,
    /// What each iteration recorded, in order.
    pub steps: Vec<StepCosts>,
    /// Set once a cost saturated at `u128::MAX`.
    pub saturated: bool,
}

impl ResourceLedger {
    pub fn new(c0: u128, c_prep: u128) -> Self {
        Self {
            c0,
            c_prep,
            per_step: vec![c0],
            ancilla_total: 0,
            depth_total: 0,
            amplification_queries: 0,
            steps: Vec::new(),
            saturated: false,
        }
    }

    pub fn current(&self) -> u128 {
        *self.per_step.last().expect("ledger holds C_0")
    }

    pub fn iterations(&self) -> usize {
        self.per_step.len() - 1
    }

    /// True when every iteration used `U_x` twice and `U_j` twice, matching
    /// the coefficients of the recursion.
    pub fn invocations_match_recursion(&self) -> bool {
        self.steps.iter().all(|s| s.invocations == Invocations { iterate: 2, row_prep: 2 })
    }
}

/// Appends `C_{k+1} = 2·C_k + 2·𝒞` and accumulates the recorded step costs.
pub fn ledger_advance(ledger: &mut ResourceLedger, step: &StepCosts) -> u128 {
    let next = ledger
        .current()
        .checked_mul(2)
        .and_then(|a| ledger.c_prep.checked_mul(2).and_then(|b| a.checked_add(b)));
    let next = next.unwrap_or_else(|| {
        ledger.saturated = true;
        u128::MAX
    });
    ledger.per_step.push(next);
    ledger.ancilla_total = ledger.ancilla_total.saturating_add(step.ancillas_added);
    ledger.depth_total = ledger.depth_total.saturating_add(step.depth);
    ledger.amplification_queries = ledger.amplification_queries.saturating_add(step.amplification_queries);
    ledger.steps.push(*step);
    next
}

/// `2^T·c0 + (2^{T+1} − 2)·c_prep`, or `None` on overflow.
pub fn ledger_closed_form(c0: u128, c_prep: u128, t: u32) -> Option<u128> {
    let pow = 1u128.checked_shl(t)?;
    if t >= 127 {
        return None;
    }
    let geometric = (1u128 << (t + 1)) - 2;
    pow.checked_mul(c0)?.checked_add(geometric.checked_mul(c_prep)?)
}
