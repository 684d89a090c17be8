//! Output files of a run.
//!
//! - `manifest.json`: resolved config, seed, version, timestamp, column lists
//! - `aggregate.csv`: one row per iteration across trials
//! - `traces/trial_XXXX.csv`: one row per iteration of each trial
//! - `ledger.csv`: per-iteration cost recursion (quantum runs)
//! - `summary.json`: spectral data, iteration bounds, quantum checks
//! - `instance.txt`: the system that was solved
//!
//! CSV floats use 17 significant digits. Only the manifest depends on the
//! wall clock.

use std::fmt::Write as _;
use std::path::Path;
use std::time::{SystemTime, UNIX_EPOCH};

use serde_json::json;

use crate::error::CliError;
use crate::experiment::{AggregateRow, Report, TrialOutcome};
use crate::matrix_io::format_system;

pub const SCHEMA_VERSION: u32 = 1;

pub const AGGREGATE_COLUMNS: [&str; 9] = [
    "k",
    "mean_error2",
    "bound",
    "bound_slack",
    "mean_residual_norm",
    "max_deviation",
    "ledger_cost",
    "ledger_depth",
    "success_probability",
];
pub const TRACE_COLUMNS: [&str; 7] = ["k", "row", "error2", "residual_norm", "norm2", "deviation", "alpha"];
pub const LEDGER_COLUMNS: [&str; 8] =
    ["k", "cost", "closed_form", "iterate_uses", "row_prep_uses", "ancillas_added", "depth", "amplification_queries"];

/// `{:.16e}`: 17 significant digits, enough to round-trip any `f64`.
pub fn fmt_f64(v: f64) -> String {
    format!("{v:.16e}")
}

fn opt<T>(v: Option<T>, f: impl Fn(T) -> String) -> String {
    v.map(f).unwrap_or_default()
}

fn header(cols: &[&str]) -> String {
    let mut s = cols.join(",");
    s.push('\n');
    s
}

pub fn aggregate_csv(rows: &[AggregateRow]) -> String {
    let mut out = header(&AGGREGATE_COLUMNS);
    for r in rows {
        writeln!(
            out,
            "{},{},{},{},{},{},{},{},{}",
            r.k,
            fmt_f64(r.mean_error2),
            opt(r.bound, fmt_f64),
            opt(r.bound_slack, fmt_f64),
            fmt_f64(r.mean_residual_norm),
            opt(r.max_deviation, fmt_f64),
            opt(r.ledger_cost, |c| c.to_string()),
            opt(r.ledger_depth, |d| d.to_string()),
            opt(r.success_probability, fmt_f64),
        )
        .expect("writing to a String");
    }
    out
}

pub fn trace_csv(t: &TrialOutcome) -> String {
    let mut out = header(&TRACE_COLUMNS);
    for k in 0..t.errors_sq.len() {
        let q = t.quantum.as_ref();
        writeln!(
            out,
            "{},{},{},{},{},{},{}",
            k,
            opt(k.checked_sub(1).map(|i| t.rows[i]), |r| r.to_string()),
            fmt_f64(t.errors_sq[k]),
            fmt_f64(t.residuals[k]),
            fmt_f64(t.norms_sq[k]),
            opt(q.map(|q| q.deviations[k]), fmt_f64),
            opt(q.map(|q| q.alphas[k]), fmt_f64),
        )
        .expect("writing to a String");
    }
    out
}

pub fn ledger_csv(t: &TrialOutcome, c0: u128, c_prep: u128) -> Option<String> {
    let l = &t.quantum.as_ref()?.ledger;
    let mut out = header(&LEDGER_COLUMNS);
    for (k, cost) in l.per_step.iter().enumerate() {
        let step = k.checked_sub(1).map(|i| l.steps[i]);
        let closed = u32::try_from(k).ok().and_then(|kk| qkacz_core::resources::ledger_closed_form(c0, c_prep, kk));
        writeln!(
            out,
            "{},{},{},{},{},{},{},{}",
            k,
            cost,
            opt(closed, |c| c.to_string()),
            opt(step, |s| s.invocations.iterate.to_string()),
            opt(step, |s| s.invocations.row_prep.to_string()),
            opt(step, |s| s.ancillas_added.to_string()),
            opt(step, |s| s.depth.to_string()),
            opt(step, |s| s.amplification_queries.to_string()),
        )
        .expect("writing to a String");
    }
    Some(out)
}

fn write(path: &Path, body: &str) -> Result<(), CliError> {
    std::fs::write(path, body).map_err(|e| CliError::io(path, e))
}

fn write_json(path: &Path, value: &serde_json::Value) -> Result<(), CliError> {
    let mut body = serde_json::to_string_pretty(value).expect("JSON values always serialize");
    body.push('\n');
    write(path, &body)
}

pub fn write_report(report: &Report, dir: &Path) -> Result<(), CliError> {
    let traces = dir.join("traces");
    std::fs::create_dir_all(&traces).map_err(|e| CliError::io(&traces, e))?;

    write(&dir.join("aggregate.csv"), &aggregate_csv(&report.aggregate))?;
    for (i, t) in report.trials.iter().enumerate() {
        write(&traces.join(format!("trial_{i:04}.csv")), &trace_csv(t))?;
    }
    let ledger = report.trials.first().and_then(|t| {
        let l = &t.quantum.as_ref()?.ledger;
        ledger_csv(t, l.c0, l.c_prep)
    });
    if let Some(body) = &ledger {
        write(&dir.join("ledger.csv"), body)?;
    }
    write(&dir.join("instance.txt"), &format_system(&report.system))?;
    write_json(&dir.join("summary.json"), &report.summary)?;

    let created = SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0);
    let manifest = json!({
        "schema_version": SCHEMA_VERSION,
        "experiment": report.experiment.name(),
        "version": env!("CARGO_PKG_VERSION"),
        "seed": report.config.seed,
        "config": report.config,
        "steps": report.steps,
        "threads": report.threads,
        "created_unix_seconds": created,
        "columns": {
            "aggregate.csv": AGGREGATE_COLUMNS,
            "traces/trial_XXXX.csv": TRACE_COLUMNS,
            "ledger.csv": if ledger.is_some() { json!(LEDGER_COLUMNS) } else { json!(null) },
        },
    });
    write_json(&dir.join("manifest.json"), &manifest)
}
