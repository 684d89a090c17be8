use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use qkacz_cli::config::{Experiment, ExperimentConfig, Mode};
use qkacz_cli::{run_experiment, write_report, CliError};
use qkacz_core::qkaczmarz::Backend;

/// Classical and simulated quantum Kaczmarz experiments.
#[derive(Parser)]
#[command(name = "qkacz", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve one system, classically or with the simulated quantum pipeline.
    Solve(Common),
    /// Compare the mean squared error over many trials with the expected-error bound.
    Converge(Common),
    /// Track the quantum iterate against the classical one step by step.
    Equiv(Common),
    /// Cost ledger, complexity estimates and iteration-bound tables.
    Resources(Common),
}

#[derive(Args)]
struct Common {
    /// JSON file overriding the built-in defaults.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long, value_enum)]
    backend: Option<BackendArg>,
    /// Output directory.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Fixed number of iterations.
    #[arg(long)]
    steps: Option<usize>,
    #[arg(long)]
    trials: Option<usize>,
}

#[derive(Clone, Copy, ValueEnum)]
enum BackendArg {
    FullUnitary,
    EncodedOperator,
}

impl From<BackendArg> for Backend {
    fn from(b: BackendArg) -> Self {
        match b {
            BackendArg::FullUnitary => Backend::FullUnitary,
            BackendArg::EncodedOperator => Backend::EncodedOperator,
        }
    }
}

fn resolve(experiment: Experiment, args: Common) -> Result<ExperimentConfig, CliError> {
    let mut cfg = ExperimentConfig::load(experiment, args.config.as_deref())?;
    if let Some(seed) = args.seed {
        cfg.seed = seed;
    }
    if let Some(b) = args.backend {
        cfg.backend = b.into();
    }
    if let Some(out) = args.out {
        cfg.output_dir = out;
    }
    if let Some(t) = args.steps {
        cfg.mode = Mode::FixedSteps(t);
    }
    if let Some(n) = args.trials {
        cfg.trials = n;
    }
    cfg.validate()?;
    Ok(cfg)
}

fn run(experiment: Experiment, args: Common) -> Result<(), CliError> {
    let cfg = resolve(experiment, args)?;
    let report = run_experiment(experiment, &cfg)?;
    write_report(&report, &cfg.output_dir)?;
    let last = report.aggregate.last().expect("aggregate holds k = 0");
    println!(
        "{}: {}x{} system, {} trial(s), {} step(s), mean error2 {:.6e}, written to {}",
        experiment.name(),
        report.system.rows(),
        report.system.cols(),
        report.trials.len(),
        report.steps,
        last.mean_error2,
        cfg.output_dir.display()
    );
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (experiment, args) = match cli.command {
        Command::Solve(a) => (Experiment::Solve, a),
        Command::Converge(a) => (Experiment::Converge, a),
        Command::Equiv(a) => (Experiment::Equiv, a),
        Command::Resources(a) => (Experiment::Resources, a),
    };
    match run(experiment, args) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
