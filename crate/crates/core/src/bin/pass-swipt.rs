use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use pass_swipt::driver::{AlternationConfig, PositionAlgorithm};
use pass_swipt::sweep::{export_string, summarize};
use pass_swipt::{
    alternate, baseline_fixed, baseline_mimo, parse_scenario, parse_scenario_str, revalidate,
    run_sweep, Algorithm, ElementWiseConfig, Error, ExportFormat, PsoConfig, Scenario, SolveRecord,
    SweepParam, SweepSpec, DEFAULT_SCENARIO,
};

#[derive(Parser)]
#[command(
    name = "pass-swipt",
    version,
    about = "Pinching-antenna SWIPT optimizer"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Algo {
    Elementwise,
    Pso,
    Both,
}

impl Algo {
    fn algorithms(self) -> Vec<Algorithm> {
        let mut v = match self {
            Algo::Elementwise => vec![Algorithm::ElementWise],
            Algo::Pso => vec![Algorithm::Pso],
            Algo::Both => vec![Algorithm::ElementWise, Algorithm::Pso],
        };
        v.extend([Algorithm::Mimo, Algorithm::Fixed]);
        v
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum Param {
    GridPoints,
    PowerBudget,
    Antennas,
}

#[derive(clap::Args)]
struct SolverArgs {
    /// Scenario TOML; the bundled reference scenario if omitted.
    #[arg(long)]
    scenario: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "both")]
    algo: Algo,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Write output here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Element-wise grid size D.
    #[arg(long, default_value_t = ElementWiseConfig::default().grid_points)]
    grid_points: usize,
    #[arg(long, default_value_t = PsoConfig::default().max_iters)]
    pso_iters: usize,
    #[arg(long, default_value_t = PsoConfig::default().swarm_size)]
    pso_swarm: usize,
}

impl SolverArgs {
    fn elementwise(&self) -> ElementWiseConfig {
        ElementWiseConfig {
            grid_points: self.grid_points,
            ..ElementWiseConfig::default()
        }
    }

    fn pso(&self) -> PsoConfig {
        PsoConfig {
            max_iters: self.pso_iters,
            swarm_size: self.pso_swarm,
            rng_seed: self.seed,
            ..PsoConfig::default()
        }
    }

    fn scenario(&self) -> pass_swipt::Result<Scenario> {
        match &self.scenario {
            Some(p) => parse_scenario(p).map_err(|e| with_file(p, e)),
            None => parse_scenario_str(DEFAULT_SCENARIO),
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Optimize one scenario and print a JSON report.
    Solve(SolverArgs),
    /// Run a parameter sweep over random receiver drops.
    Sweep {
        #[command(flatten)]
        solver: SolverArgs,
        #[arg(long, value_enum)]
        param: Param,
        /// Comma-separated values (dBm for power-budget).
        #[arg(long, value_delimiter = ',', required = true)]
        values: Vec<f64>,
        #[arg(long, default_value_t = 100)]
        trials: usize,
        #[arg(long, value_enum, default_value = "csv")]
        format: Format,
        /// Include per-row wall time (makes output non-reproducible).
        #[arg(long)]
        timing: bool,
    },
    /// Re-evaluate every solution in a report written by `solve`.
    Validate {
        #[arg(long)]
        report: PathBuf,
    },
}

fn with_file(path: &Path, e: Error) -> Error {
    match e {
        Error::Parse {
            path: field,
            message,
        } => Error::Parse {
            path: format!("{}: {field}", path.display()),
            message,
        },
        other => other,
    }
}

enum Failure {
    Validation(String),
    Solver(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        if e.is_validation() {
            Failure::Validation(e.to_string())
        } else {
            Failure::Solver(e.to_string())
        }
    }
}

fn emit(out: Option<&Path>, text: &str) -> Result<(), Failure> {
    match out {
        Some(p) => std::fs::write(p, text)
            .map_err(|e| Failure::Validation(format!("{}: {e}", p.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn solve(args: &SolverArgs) -> Result<(), Failure> {
    let scenario = args.scenario()?;
    let mut reports = Vec::new();
    for algo in args.algo.algorithms() {
        let report = match algo {
            Algorithm::ElementWise | Algorithm::Pso => {
                let pa = if algo == Algorithm::Pso {
                    PositionAlgorithm::LdwPso(args.pso())
                } else {
                    PositionAlgorithm::ElementWise(args.elementwise())
                };
                let cfg = AlternationConfig {
                    restart_seed: args.seed,
                    ..AlternationConfig::new(pa)
                };
                alternate(&scenario, &cfg)?
            }
            Algorithm::Mimo => baseline_mimo(&scenario)?,
            Algorithm::Fixed => baseline_fixed(&scenario)?,
        };
        match report.objective {
            Some(obj) => eprintln!(
                "{:>12}: {:.6e} W after {} outer iterations",
                report.algorithm, obj, report.outer_iterations
            ),
            None => eprintln!("{:>12}: infeasible", report.algorithm),
        }
        reports.push(report);
    }
    let any_feasible = reports.iter().any(|r| r.is_feasible());
    let record = SolveRecord { scenario, reports };
    let mut text = serde_json::to_string_pretty(&record).expect("report serializes");
    text.push('\n');
    emit(args.out.as_deref(), &text)?;
    if any_feasible {
        Ok(())
    } else {
        Err(Failure::Solver(
            "no algorithm found a feasible solution".into(),
        ))
    }
}

fn sweep(
    solver: &SolverArgs,
    param: Param,
    values: Vec<f64>,
    trials: usize,
    format: Format,
    timing: bool,
) -> Result<(), Failure> {
    let scenario = solver.scenario()?;
    let param = match param {
        Param::GridPoints => SweepParam::GridPoints,
        Param::PowerBudget => SweepParam::PowerBudget,
        Param::Antennas => SweepParam::Antennas,
    };
    let spec = SweepSpec {
        trials,
        seed_base: solver.seed,
        algorithms: solver.algo.algorithms(),
        elementwise: solver.elementwise(),
        pso: solver.pso(),
        record_timing: timing,
        ..SweepSpec::new(param, values)
    };
    let rows = run_sweep(&spec, &scenario)?;
    eprint!("{}", summarize(&rows, &spec.algorithms));
    let format = match format {
        Format::Csv => ExportFormat::Csv,
        Format::Json => ExportFormat::Json,
    };
    emit(solver.out.as_deref(), &export_string(&rows, format))
}

fn validate(report: &Path) -> Result<(), Failure> {
    let text = std::fs::read_to_string(report)
        .map_err(|e| Failure::Validation(format!("{}: {e}", report.display())))?;
    let record: SolveRecord = serde_json::from_str(&text)
        .map_err(|e| Failure::Validation(format!("{}: {e}", report.display())))?;
    record.scenario.validate()?;
    for r in &record.reports {
        if !r.is_feasible() {
            println!("{:>12}: infeasible (nothing to check)", r.algorithm);
            continue;
        }
        let state = revalidate(&record.scenario, r)?;
        println!("{:>12}: ok, {:.6e} W", r.algorithm, state.objective);
    }
    Ok(())
}

fn main() -> ExitCode {
    // Usage errors are input errors: exit 1, keeping 2 for solver failures.
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    let result = match cli.command {
        Command::Solve(args) => solve(&args),
        Command::Sweep {
            solver,
            param,
            values,
            trials,
            format,
            timing,
        } => sweep(&solver, param, values, trials, format, timing),
        Command::Validate { report } => validate(&report),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Validation(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Solver(msg)) => {
            eprintln!("solver failure: {msg}");
            ExitCode::from(2)
        }
    }
}
