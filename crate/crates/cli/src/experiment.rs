//! Runs trials for one experiment and aggregates them.

use rayon::prelude::*;
use serde_json::{json, Value};

use qkacz_core::classical::{
    convergence_bound, iteration_count, iteration_estimate, run_kaczmarz, t_lower_bound, t_upper_bound,
};
use qkacz_core::qkaczmarz::{measure, run_quantum_kaczmarz, Backend, MeasurementOutcome, QuantumConfig};
use qkacz_core::resources::{ledger_closed_form, complexity_estimate};
use qkacz_core::rng::trial_seed;
use qkacz_core::{CostRegime, LinearSystem, RealVector, ResourceLedger, SelectionStrategy, StoppingRule};

use crate::config::{Experiment, ExperimentConfig, Method, Mode};
use crate::error::CliError;
use crate::instance::generate_instance;

/// Environment variable capping the number of parallel trials.
pub const THREADS_ENV: &str = "QKACZ_THREADS";

/// Tolerance on `‖A x_sol − b‖` below which a system counts as consistent.
const CONSISTENCY_TOL: f64 = 1e-10;

/// Precisions tabulated in the iteration-bound table, besides the configured one.
const TABLE_EPS: [f64; 4] = [1e-1, 1e-2, 1e-4, 1e-6];

#[derive(Debug, Clone)]
pub struct TrialOutcome {
    /// Row used to produce `x⁽ᵏ⁾`, for `k ≥ 1`.
    pub rows: Vec<usize>,
    pub errors_sq: Vec<f64>,
    pub residuals: Vec<f64>,
    /// `‖x⁽ᵏ⁾‖²`
    pub norms_sq: Vec<f64>,
    pub final_x: RealVector,
    pub quantum: Option<QuantumTrial>,
}

#[derive(Debug, Clone)]
pub struct QuantumTrial {
    pub deviations: Vec<f64>,
    pub alphas: Vec<f64>,
    pub ledger: ResourceLedger,
    pub measurement: Result<MeasurementOutcome, String>,
}

/// One row of `aggregate.csv`; `None` fields are written empty.
#[derive(Debug, Clone, PartialEq)]
pub struct AggregateRow {
    pub k: usize,
    pub mean_error2: f64,
    pub bound: Option<f64>,
    pub bound_slack: Option<f64>,
    pub mean_residual_norm: f64,
    pub max_deviation: Option<f64>,
    pub ledger_cost: Option<u128>,
    pub ledger_depth: Option<u64>,
    pub success_probability: Option<f64>,
}

#[derive(Debug, Clone)]
pub struct Report {
    pub experiment: Experiment,
    pub config: ExperimentConfig,
    pub system: LinearSystem,
    pub steps: usize,
    pub threads: usize,
    pub trials: Vec<TrialOutcome>,
    pub aggregate: Vec<AggregateRow>,
    pub summary: Value,
}

/// Threads for trial parallelism: `QKACZ_THREADS` if set and positive,
/// otherwise rayon's default.
pub fn thread_count() -> usize {
    std::env::var(THREADS_ENV)
        .ok()
        .and_then(|v| v.trim().parse::<usize>().ok())
        .filter(|&n| n > 0)
        .unwrap_or_else(rayon::current_num_threads)
}

fn method_for(experiment: Experiment, cfg: &ExperimentConfig) -> Method {
    match experiment {
        Experiment::Equiv | Experiment::Resources => Method::Quantum,
        Experiment::Solve | Experiment::Converge => cfg.method,
    }
}

pub fn run_experiment(experiment: Experiment, cfg: &ExperimentConfig) -> Result<Report, CliError> {
    cfg.validate()?;
    let sys = generate_instance(&cfg.instance, cfg.seed)?;
    let steps = match cfg.mode {
        Mode::FixedSteps(t) => t,
        Mode::TargetEps(eps) => iteration_count(sys.spectral(), eps)
            .map_err(|e| CliError::numerical("deriving the iteration count", e))? as usize,
    };
    let method = method_for(experiment, cfg);
    let solution = sys.least_squares_solution().map_err(|e| CliError::numerical("least-squares reference", e))?;
    let x0 = RealVector::zeros(sys.cols());
    let threads = thread_count();
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| CliError::Config(format!("thread pool: {e}")))?;

    let results: Vec<Result<TrialOutcome, CliError>> = pool.install(|| {
        (0..cfg.trials)
            .into_par_iter()
            .map(|t| run_trial(&sys, cfg, method, steps, t, &x0, &solution))
            .collect()
    });
    let trials = results.into_iter().collect::<Result<Vec<_>, _>>()?;

    let consistent = sys.residual_norm(&solution).map_err(|e| CliError::numerical("residual", e))?
        <= CONSISTENCY_TOL * sys.b().norm().max(1.0);
    let aggregate = aggregate(&sys, cfg, steps, &trials, consistent, x0.dist_sq(&solution));
    let summary = summarize(experiment, cfg, &sys, steps, &trials, &aggregate, consistent, &solution);
    Ok(Report { experiment, config: cfg.clone(), system: sys, steps, threads, trials, aggregate, summary })
}

fn run_trial(
    sys: &LinearSystem,
    cfg: &ExperimentConfig,
    method: Method,
    steps: usize,
    t: usize,
    x0: &RealVector,
    solution: &RealVector,
) -> Result<TrialOutcome, CliError> {
    let seed = trial_seed(cfg.seed, t as u64);
    let strategy = SelectionStrategy { kind: cfg.strategy, seed };
    let context = || format!("trial {t}");
    let (trace, quantum) = match method {
        Method::Classical => {
            let trace = run_kaczmarz(sys, strategy, cfg.lambda, StoppingRule::FixedSteps(steps), x0, Some(solution))
                .map_err(|e| CliError::numerical(context(), e))?;
            (trace, None)
        }
        Method::Quantum => {
            let qcfg = QuantumConfig {
                backend: cfg.backend,
                amplify: cfg.amplify,
                alpha_policy: cfg.alpha_policy,
                regime: cfg.regime,
                ..QuantumConfig::default()
            };
            let run = run_quantum_kaczmarz(sys, strategy, cfg.lambda, steps, x0, &qcfg)
                .map_err(|e| CliError::numerical(context(), e))?;
            let measurement = measure(&run.state, cfg.shots, seed).map_err(|e| e.to_string());
            let mut trace = run.classical;
            trace.errors_sq = run.quantum_iterates.iter().map(|x| x.dist_sq(solution)).collect();
            trace.residual_norms = run
                .quantum_iterates
                .iter()
                .map(|x| sys.residual_norm(x))
                .collect::<Result<_, _>>()
                .map_err(|e| CliError::numerical(context(), e))?;
            trace.iterates = run.quantum_iterates;
            let q = QuantumTrial {
                deviations: run.deviations,
                alphas: run.state.alpha_history,
                ledger: run.state.ledger,
                measurement,
            };
            (trace, Some(q))
        }
    };
    Ok(TrialOutcome {
        rows: trace.selected_rows,
        errors_sq: trace.errors_sq,
        residuals: trace.residual_norms,
        norms_sq: trace.iterates.iter().map(RealVector::norm_sq).collect(),
        final_x: trace.iterates.last().expect("trace holds x0").clone(),
        quantum,
    })
}

fn aggregate(
    sys: &LinearSystem,
    cfg: &ExperimentConfig,
    steps: usize,
    trials: &[TrialOutcome],
    consistent: bool,
    init_err_sq: f64,
) -> Vec<AggregateRow> {
    let n = trials.len() as f64;
    let slack = 1.0 + 3.0 / n.sqrt();
    let has_bound = consistent
        && cfg.strategy == qkacz_core::SelectionKind::NormWeighted
        && cfg.lambda == 1.0
        && sys.spectral().sigma_min > 0.0;
    let first_ledger = trials.first().and_then(|t| t.quantum.as_ref()).map(|q| &q.ledger);
    let mut depth = 0u64;
    (0..=steps)
        .map(|k| {
            let mean = |f: &dyn Fn(&TrialOutcome) -> f64| trials.iter().map(f).sum::<f64>() / n;
            let bound = if has_bound { convergence_bound(sys.spectral(), init_err_sq, k as u64).ok() } else { None };
            let quantum = trials.iter().all(|t| t.quantum.is_some()) && !trials.is_empty();
            let max_deviation = quantum.then(|| {
                trials.iter().map(|t| t.quantum.as_ref().expect("quantum trial").deviations[k]).fold(0.0, f64::max)
            });
            let success_probability = (quantum && trials.iter().all(|t| t.norms_sq[k] <= 1.0)).then(|| mean(&|t| t.norms_sq[k]));
            if k > 0 {
                if let Some(l) = first_ledger {
                    depth = depth.saturating_add(l.steps[k - 1].depth);
                }
            }
            AggregateRow {
                k,
                mean_error2: mean(&|t| t.errors_sq[k]),
                bound,
                bound_slack: bound.map(|b| b * slack),
                mean_residual_norm: mean(&|t| t.residuals[k]),
                max_deviation,
                ledger_cost: first_ledger.map(|l| l.per_step[k]),
                ledger_depth: first_ledger.map(|_| depth),
                success_probability,
            }
        })
        .collect()
}

#[allow(clippy::too_many_arguments)]
fn summarize(
    experiment: Experiment,
    cfg: &ExperimentConfig,
    sys: &LinearSystem,
    steps: usize,
    trials: &[TrialOutcome],
    aggregate: &[AggregateRow],
    consistent: bool,
    solution: &RealVector,
) -> Value {
    let sp = sys.spectral();
    let mut eps_list = TABLE_EPS.to_vec();
    if !eps_list.contains(&cfg.eps) {
        eps_list.push(cfg.eps);
    }
    eps_list.sort_by(|a, b| b.total_cmp(a));
    let bounds: Vec<Value> = eps_list
        .iter()
        .map(|&eps| {
            json!({
                "eps": eps,
                "lower": t_lower_bound(sp, eps).ok(),
                "estimate": iteration_estimate(sp, eps).ok(),
                "iteration_count": iteration_count(sp, eps).ok(),
                "upper": t_upper_bound(sp, eps).ok(),
            })
        })
        .collect();

    let convergence = {
        let checked: Vec<(f64, f64)> =
            aggregate.iter().filter_map(|r| r.bound_slack.map(|b| (r.mean_error2, b))).collect();
        if checked.is_empty() {
            Value::Null
        } else {
            let holds = checked.iter().all(|(e, b)| e <= b);
            let worst = checked.iter().map(|(e, b)| if *b > 0.0 { e / b } else if *e > 0.0 { f64::INFINITY } else { 0.0 }).fold(0.0, f64::max);
            json!({ "bound_holds": holds, "max_ratio_to_slack_bound": worst, "trials": trials.len() })
        }
    };

    let first = trials.first().expect("at least one trial");
    let quantum = first.quantum.as_ref().map(|q| {
        let tol = cfg.backend.tolerance();
        let max_dev = aggregate.iter().filter_map(|r| r.max_deviation).fold(0.0, f64::max);
        let l = &q.ledger;
        let closed = u32::try_from(steps).ok().and_then(|t| ledger_closed_form(l.c0, l.c_prep, t));
        let x_norm = first.final_x.norm();
        let s = sys.max_row_support();
        let complexity: Vec<Value> = [CostRegime::Structured, CostRegime::SparseGeneral]
            .iter()
            .map(|&regime| match complexity_estimate(sp, x_norm, cfg.eps, sys.cols(), s, regime) {
                Ok(e) => serde_json::to_value(e).unwrap_or(Value::Null),
                Err(err) => json!({ "regime": regime, "error": err.to_string() }),
            })
            .collect();
        let measurement = match &q.measurement {
            Ok(m) => serde_json::to_value(m).unwrap_or(Value::Null),
            Err(e) => json!({ "error": e }),
        };
        json!({
            "backend": backend_name(cfg.backend),
            "max_deviation": max_dev,
            "tolerance": tol,
            "within_tolerance": max_dev <= tol,
            "final_alpha": q.alphas.last(),
            "alpha_doublings": q.alphas.last().map(|a| a.log2().round() as i64),
            "ledger": {
                "c0": l.c0.to_string(),
                "c_prep": l.c_prep.to_string(),
                "final_cost": l.current().to_string(),
                "closed_form": closed.map(|c| c.to_string()),
                "recursion_matches_closed_form": closed == Some(l.current()),
                "invocations_match_recursion": l.invocations_match_recursion(),
                "ancilla_total": l.ancilla_total,
                "depth_total": l.depth_total,
                "amplification_queries": l.amplification_queries,
                "saturated": l.saturated,
            },
            "measurement": measurement,
            "complexity": complexity,
        })
    });

    json!({
        "schema_version": crate::report::SCHEMA_VERSION,
        "experiment": experiment.name(),
        "steps": steps,
        "trials": trials.len(),
        "instance": {
            "rows": sys.rows(),
            "cols": sys.cols(),
            "rank": sp.rank,
            "sigma_min": sp.sigma_min,
            "sigma_max": sp.sigma_max,
            "frob_sq": sp.frob_sq,
            "kappa": sp.kappa,
            "max_row_support": sys.max_row_support(),
            "consistent": consistent,
            "solution_norm": solution.norm(),
        },
        "iteration_bounds": bounds,
        "convergence": convergence,
        "quantum": quantum,
        "final_iterate": first.final_x.as_slice(),
        "final_error2": first.errors_sq.last(),
    })
}

pub(crate) fn backend_name(b: Backend) -> &'static str {
    match b {
        Backend::FullUnitary => "full-unitary",
        Backend::EncodedOperator => "encoded-operator",
    }
}
