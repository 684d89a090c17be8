//! Runs the block-encoded iteration alongside the classical one.

use std::collections::HashMap;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::steps::iterate_once;
use super::QuantumError;
use crate::blockenc::{
    state_prep, AmplifyParams, BlockAlgebra, BlockEncoding, BlockEncodingError, CostConstants, EncodedOperator,
    StatePrepCost,
};
use crate::classical::{check_lambda, run_kaczmarz, IterateTrace, LinearSystem, RowSelector, SelectionStrategy, StoppingRule};
use crate::linalg::{ComplexMatrix, RealVector};
use crate::resources::{ledger_advance, CostRegime, ResourceLedger, StepCosts};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Backend {
    /// Explicit unitaries; exponential in the ancilla count, small inputs only.
    FullUnitary,
    /// Encoded operator plus subnormalization; any size.
    EncodedOperator,
}

impl Backend {
    /// Agreement with the classical trace expected from this backend.
    pub fn tolerance(self) -> f64 {
        match self {
            Backend::FullUnitary => 1e-8,
            Backend::EncodedOperator => 1e-10,
        }
    }
}

/// What to do when an amplification leaves its window.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum AlphaPolicy {
    /// Double the iterate's subnormalization and retry the iteration.
    Adaptive,
    /// Report the violation.
    Fixed,
}

/// Largest column count and iteration count accepted by the full-unitary backend.
pub const FULL_UNITARY_MAX_COLS: usize = 4;
pub const FULL_UNITARY_MAX_STEPS: usize = 4;
const MAX_ALPHA_DOUBLINGS: usize = 128;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuantumConfig {
    pub backend: Backend,
    pub amplify: AmplifyParams,
    pub alpha_policy: AlphaPolicy,
    pub regime: CostRegime,
    pub constants: CostConstants,
}

impl Default for QuantumConfig {
    fn default() -> Self {
        Self {
            backend: Backend::EncodedOperator,
            amplify: AmplifyParams::default(),
            alpha_policy: AlphaPolicy::Adaptive,
            regime: CostRegime::Structured,
            constants: CostConstants::default(),
        }
    }
}

impl QuantumConfig {
    pub fn with_backend(backend: Backend) -> Self {
        Self { backend, ..Self::default() }
    }
}

/// The iterate encoding `U_x⁽ᵏ⁾` in whichever backend produced it.
#[derive(Debug, Clone)]
pub enum IterateEncoding {
    FullUnitary(BlockEncoding),
    EncodedOperator(EncodedOperator),
}

impl IterateEncoding {
    pub fn encoded(&self) -> ComplexMatrix {
        match self {
            Self::FullUnitary(e) => e.encoded(),
            Self::EncodedOperator(e) => e.encoded(),
        }
    }

    pub fn alpha(&self) -> f64 {
        match self {
            Self::FullUnitary(e) => e.alpha(),
            Self::EncodedOperator(e) => e.alpha(),
        }
    }

    pub fn ancilla_qubits(&self) -> usize {
        match self {
            Self::FullUnitary(e) => e.ancilla_qubits(),
            Self::EncodedOperator(e) => BlockAlgebra::ancilla_qubits(e),
        }
    }

    pub fn backend(&self) -> Backend {
        match self {
            Self::FullUnitary(_) => Backend::FullUnitary,
            Self::EncodedOperator(_) => Backend::EncodedOperator,
        }
    }
}

#[derive(Debug, Clone)]
pub struct QuantumIterationState {
    pub encoding: IterateEncoding,
    pub k: usize,
    /// `x⁽ᵏ⁾` read from the first column, padding removed.
    pub first_column: RealVector,
    /// Subnormalization after each iteration, starting with `U_x⁽⁰⁾`'s.
    pub alpha_history: Vec<f64>,
    pub ledger: ResourceLedger,
}

/// A quantum run and the classical run driven by the same rows.
#[derive(Debug, Clone)]
pub struct QuantumRun {
    pub state: QuantumIterationState,
    pub classical: IterateTrace,
    /// `x⁽⁰⁾..x⁽ᵀ⁾` read from the encodings.
    pub quantum_iterates: Vec<RealVector>,
    /// `‖first_column(k) − x_classical⁽ᵏ⁾‖∞`
    pub deviations: Vec<f64>,
}

impl QuantumRun {
    pub fn max_deviation(&self) -> f64 {
        self.deviations.iter().fold(0.0, |a, &b| a.max(b))
    }
}

/// Smallest power of two holding `cols` entries, at least 2.
pub fn register_dim(cols: usize) -> usize {
    cols.max(2).next_power_of_two()
}

/// Reads `x` from column 0 of `encoded`, checking that imaginary parts and
/// padding entries stay below `tol`.
pub fn extract_first_column(encoded: &ComplexMatrix, m: usize, tol: f64) -> Result<RealVector, f64> {
    let col = encoded.column(0);
    let leak = col
        .iter()
        .enumerate()
        .map(|(i, z)| if i < m { z.im.abs() } else { z.norm() })
        .fold(0.0, f64::max);
    if leak > tol {
        return Err(leak);
    }
    Ok(RealVector::from(col[..m].iter().map(|z| z.re).collect::<Vec<_>>()))
}

fn initial_encoding<B: BlockAlgebra>(x0: &RealVector, d: usize, cfg: &QuantumConfig) -> Result<B, QuantumError> {
    let norm = x0.norm();
    if norm > 1.0 + 1e-12 {
        return Err(QuantumError::InitialNorm { norm });
    }
    let padded = x0.resized(d);
    if (norm - 1.0).abs() <= 1e-12 {
        let prep = state_prep(&padded.scaled(1.0 / norm), cfg.regime, &cfg.constants)?;
        return Ok(B::from_unitary(prep.encoding().unitary().clone(), "U_x0")?);
    }
    let mut m = ComplexMatrix::zeros(d);
    for (i, v) in padded.iter().enumerate() {
        m[(i, 0)] = Complex64::new(*v, 0.0);
    }
    Ok(B::dilate(&m, "U_x0")?)
}

struct RowPreps<B> {
    d: usize,
    regime: CostRegime,
    constants: CostConstants,
    cache: HashMap<usize, (B, StatePrepCost)>,
}

impl<B: BlockAlgebra> RowPreps<B> {
    fn get(&mut self, sys: &LinearSystem, j: usize) -> Result<&(B, StatePrepCost), QuantumError> {
        if !self.cache.contains_key(&j) {
            let norm = sys.row_norm(j);
            if norm == 0.0 {
                return Err(QuantumError::ZeroRowNorm);
            }
            let v = sys.a().row_vector(j).scaled(1.0 / norm).resized(self.d);
            let prep = state_prep(&v, self.regime, &self.constants)?;
            let enc = B::from_unitary(prep.encoding().unitary().clone(), &format!("U_a{j}"))?;
            self.cache.insert(j, (enc, *prep.cost()));
        }
        Ok(&self.cache[&j])
    }
}

/// `(c_0, 𝒞)`: unit cost for `U_x⁽⁰⁾` and the largest row-preparation gate count.
fn ledger_seed(sys: &LinearSystem, d: usize, cfg: &QuantumConfig) -> (u128, u128) {
    let c_prep = (0..sys.rows())
        .map(|j| StatePrepCost::model(cfg.regime, d, sys.row_support(j), &cfg.constants).gates)
        .max()
        .unwrap_or(0);
    (1, u128::from(c_prep))
}

struct Generic<B> {
    encoding: B,
    iterates: Vec<RealVector>,
    alpha_history: Vec<f64>,
    ledger: ResourceLedger,
}

fn run_generic<B: BlockAlgebra>(
    sys: &LinearSystem,
    selector: &RowSelector,
    lambda: f64,
    steps: usize,
    x0: &RealVector,
    cfg: &QuantumConfig,
) -> Result<Generic<B>, QuantumError> {
    let m = sys.cols();
    let d = register_dim(m);
    let tol = cfg.backend.tolerance();
    let mut ux: B = initial_encoding(x0, d, cfg)?;
    let (c0, c_prep) = ledger_seed(sys, d, cfg);
    let mut ledger = ResourceLedger::new(c0, c_prep);
    let mut preps = RowPreps::<B> { d, regime: cfg.regime, constants: cfg.constants, cache: HashMap::new() };
    let mut iterates = vec![extract_first_column(&ux.encoded(), m, tol).map_err(|magnitude| QuantumError::PaddingLeak { k: 0, magnitude })?];
    let mut alpha_history = vec![ux.alpha()];

    for k in 0..steps {
        let at = |e: QuantumError| QuantumError::AtIteration { k, source: Box::new(e) };
        let j = selector.select(k as u64);
        let row_norm = sys.row_norm(j);
        let b_j = sys.b()[j];
        let (prep, prep_cost) = preps.get(sys, j).map_err(at)?;
        let start_ancillas = ux.ancilla_qubits();
        let mut doublings = 0;
        let (next, mut costs) = loop {
            let mut costs = StepCosts::default();
            match iterate_once(&ux, prep, row_norm, b_j, lambda, &cfg.amplify, &mut costs) {
                Ok(next) => break (next, costs),
                Err(QuantumError::BlockEncoding(BlockEncodingError::AmplificationWindow { singular_value, limit }))
                    if cfg.alpha_policy == AlphaPolicy::Adaptive =>
                {
                    if doublings == MAX_ALPHA_DOUBLINGS {
                        return Err(at(QuantumError::AlphaLimit { alpha: ux.alpha(), singular_value, limit }));
                    }
                    doublings += 1;
                    ux = ux.subnormalize(2.0 * ux.alpha()).map_err(|e| at(e.into()))?;
                }
                Err(e) => return Err(at(e)),
            }
        };
        costs.ancillas_added = (next.ancilla_qubits() - start_ancillas) as u64;
        costs.depth = 2 * prep_cost.depth;
        ledger_advance(&mut ledger, &costs);

        ux = next.compact().map_err(|e| at(e.into()))?.relabel(&format!("U_x{}", k + 1));
        let x = extract_first_column(&ux.encoded(), m, tol)
            .map_err(|magnitude| QuantumError::PaddingLeak { k: k + 1, magnitude })?;
        iterates.push(x);
        alpha_history.push(ux.alpha());
    }
    Ok(Generic { encoding: ux, iterates, alpha_history, ledger })
}

/// Runs `steps` block-encoded iterations and the classical iteration with
/// the same row sequence.
pub fn run_quantum_kaczmarz(
    sys: &LinearSystem,
    strategy: SelectionStrategy,
    lambda: f64,
    steps: usize,
    x0: &RealVector,
    cfg: &QuantumConfig,
) -> Result<QuantumRun, QuantumError> {
    check_lambda(lambda)?;
    sys.check_quantum_input()?;
    if x0.dim() != sys.cols() {
        return Err(crate::classical::KaczmarzError::DimensionMismatch { expected: sys.cols(), found: x0.dim() }.into());
    }
    if cfg.backend == Backend::FullUnitary && (sys.cols() > FULL_UNITARY_MAX_COLS || steps > FULL_UNITARY_MAX_STEPS) {
        return Err(QuantumError::DimensionGuard { cols: sys.cols(), steps });
    }
    let selector = RowSelector::new(strategy, sys)?;
    let classical = run_kaczmarz(sys, strategy, lambda, StoppingRule::FixedSteps(steps), x0, None)?;

    let (encoding, iterates, alpha_history, ledger) = match cfg.backend {
        Backend::FullUnitary => {
            let g = run_generic::<BlockEncoding>(sys, &selector, lambda, steps, x0, cfg)?;
            (IterateEncoding::FullUnitary(g.encoding), g.iterates, g.alpha_history, g.ledger)
        }
        Backend::EncodedOperator => {
            let g = run_generic::<EncodedOperator>(sys, &selector, lambda, steps, x0, cfg)?;
            (IterateEncoding::EncodedOperator(g.encoding), g.iterates, g.alpha_history, g.ledger)
        }
    };
    let deviations = iterates.iter().zip(&classical.iterates).map(|(q, c)| q.dist_inf(c)).collect();
    let state = QuantumIterationState {
        encoding,
        k: steps,
        first_column: iterates.last().expect("holds x0").clone(),
        alpha_history,
        ledger,
    };
    Ok(QuantumRun { state, classical, quantum_iterates: iterates, deviations })
}
