//! Experiment configuration: built-in defaults per experiment, overlaid with
//! an optional JSON file and command-line flags.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use serde_json::Value;

use qkacz_core::blockenc::AmplifyParams;
use qkacz_core::qkaczmarz::{AlphaPolicy, Backend};
use qkacz_core::{CostRegime, SelectionKind};

use crate::error::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Experiment {
    Solve,
    Converge,
    Equiv,
    Resources,
}

impl Experiment {
    pub fn name(self) -> &'static str {
        match self {
            Experiment::Solve => "solve",
            Experiment::Converge => "converge",
            Experiment::Equiv => "equiv",
            Experiment::Resources => "resources",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum InstanceKind {
    Gaussian,
    SynthesizedSpectrum,
    File,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InstanceSpec {
    pub kind: InstanceKind,
    /// Rows.
    pub n: usize,
    /// Columns.
    pub m: usize,
    pub target_rank: Option<usize>,
    pub target_kappa: Option<f64>,
    /// Explicit singular values for `synthesized-spectrum`; overrides rank and κ.
    pub singular_values: Option<Vec<f64>>,
    /// Nonzeros per row for `gaussian`.
    pub row_sparsity: Option<usize>,
    /// Rescale so that `‖A‖ ≤ 1` and `‖b‖ ≤ 1`.
    pub normalize: bool,
    /// Draw `x*` and set `b = A x*`; otherwise `b` is Gaussian.
    pub consistent: bool,
    pub path: Option<PathBuf>,
}

/// How many iterations to run.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Mode {
    FixedSteps(usize),
    /// Run the iteration count predicted for relative expected error `eps`.
    TargetEps(f64),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    Classical,
    Quantum,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub instance: InstanceSpec,
    pub strategy: SelectionKind,
    pub lambda: f64,
    pub mode: Mode,
    pub trials: usize,
    pub method: Method,
    pub backend: Backend,
    pub seed: u64,
    pub output_dir: PathBuf,
    /// Measurement shots for quantum solves.
    pub shots: Option<u64>,
    /// Precision used by the iteration-bound and complexity tables.
    pub eps: f64,
    pub regime: CostRegime,
    pub amplify: AmplifyParams,
    pub alpha_policy: AlphaPolicy,
}

impl ExperimentConfig {
    pub fn defaults(experiment: Experiment) -> Self {
        let gaussian = |n, m| InstanceSpec {
            kind: InstanceKind::Gaussian,
            n,
            m,
            target_rank: None,
            target_kappa: None,
            singular_values: None,
            row_sparsity: None,
            normalize: true,
            consistent: true,
            path: None,
        };
        let base = Self {
            instance: gaussian(50, 20),
            strategy: SelectionKind::NormWeighted,
            lambda: 1.0,
            mode: Mode::FixedSteps(500),
            trials: 1,
            method: Method::Classical,
            backend: Backend::EncodedOperator,
            seed: 0,
            output_dir: PathBuf::from(format!("out/{}", experiment.name())),
            shots: None,
            eps: 1e-3,
            regime: CostRegime::Structured,
            amplify: AmplifyParams::default(),
            alpha_policy: AlphaPolicy::Adaptive,
        };
        match experiment {
            Experiment::Solve => Self { instance: gaussian(16, 8), mode: Mode::FixedSteps(100), ..base },
            Experiment::Converge => Self { trials: 200, ..base },
            Experiment::Equiv => Self {
                instance: InstanceSpec { consistent: false, ..gaussian(16, 8) },
                mode: Mode::FixedSteps(50),
                method: Method::Quantum,
                ..base
            },
            Experiment::Resources => Self {
                instance: gaussian(16, 8),
                mode: Mode::FixedSteps(20),
                method: Method::Quantum,
                ..base
            },
        }
    }

    /// Defaults for `experiment`, overlaid with the JSON object in `path`.
    pub fn load(experiment: Experiment, path: Option<&Path>) -> Result<Self, CliError> {
        let defaults = Self::defaults(experiment);
        let Some(path) = path else {
            return Ok(defaults);
        };
        let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        let overlay: Value =
            serde_json::from_str(&text).map_err(|e| CliError::Parse { path: path.into(), message: e.to_string() })?;
        Self::overlay(defaults, overlay).map_err(|e| CliError::Parse { path: path.into(), message: e })
    }

    /// Deep-merges `overlay` onto `base`; unknown keys are rejected.
    pub fn overlay(base: Self, overlay: Value) -> Result<Self, String> {
        let mut merged = serde_json::to_value(base).map_err(|e| e.to_string())?;
        // `mode` is an externally tagged enum: a new variant replaces the old one.
        if let (Some(m), Some(o)) = (merged.as_object_mut(), overlay.as_object()) {
            if o.contains_key("mode") {
                m.remove("mode");
            }
        }
        merge(&mut merged, overlay);
        serde_json::from_value(merged).map_err(|e| e.to_string())
    }

    pub fn validate(&self) -> Result<(), CliError> {
        let bad = |msg: String| Err(CliError::Config(msg));
        if self.trials == 0 {
            return bad("trials must be at least 1".into());
        }
        if !(self.lambda > 0.0 && self.lambda <= 2.0) {
            return bad(format!("lambda must lie in (0, 2], got {}", self.lambda));
        }
        if !(self.eps > 0.0 && self.eps < 1.0) {
            return bad(format!("eps must lie in (0, 1), got {}", self.eps));
        }
        if let Mode::TargetEps(e) = self.mode {
            if !(e > 0.0 && e < 1.0) {
                return bad(format!("target eps must lie in (0, 1), got {e}"));
            }
        }
        let inst = &self.instance;
        match inst.kind {
            InstanceKind::File => {
                if inst.path.is_none() {
                    return bad("instance.kind = file requires instance.path".into());
                }
            }
            InstanceKind::Gaussian | InstanceKind::SynthesizedSpectrum => {
                if inst.n == 0 || inst.m == 0 {
                    return bad(format!("instance must have at least one row and column, got {}x{}", inst.n, inst.m));
                }
            }
        }
        if let Some(s) = inst.row_sparsity {
            if inst.kind != InstanceKind::Gaussian {
                return bad("row_sparsity applies to gaussian instances only".into());
            }
            if s == 0 || s > inst.m {
                return bad(format!("row_sparsity must lie in 1..={}, got {s}", inst.m));
            }
        }
        if let Some(r) = inst.target_rank {
            if r == 0 || r > inst.n.min(inst.m) {
                return bad(format!("target_rank must lie in 1..={}, got {r}", inst.n.min(inst.m)));
            }
        }
        if let Some(k) = inst.target_kappa {
            if !(k.is_finite() && k >= 1.0) {
                return bad(format!("target_kappa must be finite and at least 1, got {k}"));
            }
        }
        if let Some(s) = &inst.singular_values {
            if s.is_empty() || s.len() > inst.n.min(inst.m) || s.iter().any(|v| !(v.is_finite() && *v > 0.0)) {
                return bad("singular_values must be 1..=min(n, m) positive finite numbers".into());
            }
        }
        Ok(())
    }
}

fn merge(base: &mut Value, overlay: Value) {
    match (base, overlay) {
        (Value::Object(b), Value::Object(o)) => {
            for (k, v) in o {
                match b.get_mut(&k) {
                    Some(slot) if slot.is_object() && v.is_object() => merge(slot, v),
                    _ => {
                        b.insert(k, v);
                    }
                }
            }
        }
        (slot, v) => *slot = v,
    }
}
