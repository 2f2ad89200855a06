//! Parameter sweeps over random receiver drops, and their CSV/JSON export.

use std::fmt::Write as _;
use std::path::Path;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::value::RawValue;

use crate::config::sample_receivers;
use crate::driver::{
    alternate, baseline_fixed, baseline_mimo, derive_seed, AlternationConfig, PositionAlgorithm,
    SolveReport, SolveStatus,
};
use crate::error::{Error, Result};
use crate::position::{ElementWiseConfig, PsoConfig};
use crate::system::{dbm_to_watts, watts_to_dbm, Scenario};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SweepParam {
    /// Element-wise grid size `D`.
    GridPoints,
    /// Power budget `P_B`, dBm.
    PowerBudget,
    /// Number of antennas `M`.
    Antennas,
}

impl SweepParam {
    pub fn label(self) -> &'static str {
        match self {
            SweepParam::GridPoints => "grid-points",
            SweepParam::PowerBudget => "power-budget",
            SweepParam::Antennas => "antennas",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Algorithm {
    #[serde(rename = "elementwise")]
    ElementWise,
    Pso,
    Mimo,
    Fixed,
}

impl Algorithm {
    pub fn label(self) -> &'static str {
        match self {
            Algorithm::ElementWise => "elementwise",
            Algorithm::Pso => "pso",
            Algorithm::Mimo => "mimo",
            Algorithm::Fixed => "fixed",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        [
            Algorithm::ElementWise,
            Algorithm::Pso,
            Algorithm::Mimo,
            Algorithm::Fixed,
        ]
        .into_iter()
        .find(|a| a.label() == s)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepSpec {
    pub param: SweepParam,
    pub values: Vec<f64>,
    pub trials: usize,
    pub seed_base: u64,
    pub algorithms: Vec<Algorithm>,
    pub elementwise: ElementWiseConfig,
    pub pso: PsoConfig,
    pub max_outer_iters: usize,
    pub rel_tol: f64,
    /// Record wall time per row. Off by default so exports are reproducible
    /// byte for byte.
    pub record_timing: bool,
}

impl SweepSpec {
    pub fn new(param: SweepParam, values: Vec<f64>) -> Self {
        let alt = AlternationConfig::elementwise();
        Self {
            param,
            values,
            trials: 100,
            seed_base: 0,
            algorithms: vec![
                Algorithm::ElementWise,
                Algorithm::Pso,
                Algorithm::Mimo,
                Algorithm::Fixed,
            ],
            elementwise: ElementWiseConfig::default(),
            pso: PsoConfig::default(),
            max_outer_iters: alt.max_outer_iters,
            rel_tol: alt.rel_tol,
            record_timing: false,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.values.is_empty() {
            return Err(Error::InvalidConfig(
                "sweep needs at least one value".into(),
            ));
        }
        if self.trials < 1 {
            return Err(Error::InvalidConfig("trials must be at least 1".into()));
        }
        if self.algorithms.is_empty() {
            return Err(Error::InvalidConfig(
                "sweep needs at least one algorithm".into(),
            ));
        }
        for &v in &self.values {
            if !v.is_finite() {
                return Err(Error::InvalidConfig(format!(
                    "sweep value {v} is not finite"
                )));
            }
            if matches!(self.param, SweepParam::GridPoints | SweepParam::Antennas)
                && (v < 1.0 || v.fract() != 0.0)
            {
                return Err(Error::InvalidConfig(format!(
                    "{} values must be positive integers, got {v}",
                    self.param.label()
                )));
            }
        }
        self.elementwise.validate()?;
        self.pso.validate()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResultRow {
    pub sweep_value: f64,
    pub algorithm: Algorithm,
    pub trial: usize,
    /// Seed of the receiver drop; shared by every sweep value of a trial.
    pub drop_seed: u64,
    /// Seed of the optimizer randomness for this (value, trial).
    pub trial_seed: u64,
    pub status: SolveStatus,
    pub objective_w: Option<f64>,
    pub objective_dbm: Option<f64>,
    pub outer_iterations: usize,
    pub wall_time_s: Option<f64>,
}

pub fn drop_seed(seed_base: u64, trial: usize) -> u64 {
    derive_seed(seed_base, &[trial as u64])
}

pub fn trial_seed(seed_base: u64, value: f64, trial: usize) -> u64 {
    derive_seed(seed_base, &[value.to_bits(), trial as u64])
}

/// The scenario for one (value, trial): `base` with fresh receivers drawn
/// from the drop seed and the swept parameter applied.
pub fn trial_scenario(
    spec: &SweepSpec,
    base: &Scenario,
    value: f64,
    trial: usize,
) -> Result<Scenario> {
    let (irs, ers) = sample_receivers(
        base.region_x,
        base.region_y,
        base.num_irs(),
        base.num_ers(),
        drop_seed(spec.seed_base, trial),
    );
    let mut s = Scenario {
        irs,
        ers,
        ..base.clone()
    };
    match spec.param {
        SweepParam::GridPoints => {}
        SweepParam::PowerBudget => s.power_budget = dbm_to_watts(value),
        SweepParam::Antennas => s.num_antennas = value as usize,
    }
    s.validate()?;
    Ok(s)
}

/// Restart layouts come from the drop seed so that feasibility of the start
/// does not vary along the sweep; PSO randomness comes from the trial seed.
fn alternation(
    spec: &SweepSpec,
    value: f64,
    trial: usize,
    algorithm: Algorithm,
) -> AlternationConfig {
    let seed = trial_seed(spec.seed_base, value, trial);
    let position_algorithm = match algorithm {
        Algorithm::Pso => PositionAlgorithm::LdwPso(PsoConfig {
            rng_seed: derive_seed(seed, &[1]),
            ..spec.pso
        }),
        _ => {
            let mut cfg = spec.elementwise;
            if spec.param == SweepParam::GridPoints {
                cfg.grid_points = value as usize;
            }
            PositionAlgorithm::ElementWise(cfg)
        }
    };
    AlternationConfig {
        max_outer_iters: spec.max_outer_iters,
        rel_tol: spec.rel_tol,
        restart_seed: derive_seed(drop_seed(spec.seed_base, trial), &[2]),
        ..AlternationConfig::new(position_algorithm)
    }
}

/// Runs one algorithm on one (value, trial) cell.
pub fn run_cell(
    spec: &SweepSpec,
    base: &Scenario,
    value: f64,
    trial: usize,
    algorithm: Algorithm,
) -> Result<SolveReport> {
    let scenario = trial_scenario(spec, base, value, trial)?;
    match algorithm {
        Algorithm::ElementWise | Algorithm::Pso => {
            alternate(&scenario, &alternation(spec, value, trial, algorithm))
        }
        Algorithm::Mimo => baseline_mimo(&scenario),
        Algorithm::Fixed => baseline_fixed(&scenario),
    }
}

fn to_row(
    spec: &SweepSpec,
    value: f64,
    trial: usize,
    algorithm: Algorithm,
    report: &SolveReport,
) -> ResultRow {
    ResultRow {
        sweep_value: value,
        algorithm,
        trial,
        drop_seed: drop_seed(spec.seed_base, trial),
        trial_seed: trial_seed(spec.seed_base, value, trial),
        status: report.status,
        objective_w: report.objective,
        objective_dbm: report.objective.map(watts_to_dbm),
        outer_iterations: report.outer_iterations,
        wall_time_s: spec.record_timing.then_some(report.wall_time_s),
    }
}

/// Every (value, trial, algorithm) cell, in that nesting order. Trials run
/// in parallel; the output order is fixed.
pub fn run_sweep(spec: &SweepSpec, base: &Scenario) -> Result<Vec<ResultRow>> {
    spec.validate()?;
    base.validate()?;
    let cells: Vec<(f64, usize)> = spec
        .values
        .iter()
        .flat_map(|&v| (0..spec.trials).map(move |t| (v, t)))
        .collect();
    let rows: Result<Vec<Vec<ResultRow>>> = cells
        .par_iter()
        .map(|&(value, trial)| {
            spec.algorithms
                .iter()
                .map(|&a| {
                    Ok(to_row(
                        spec,
                        value,
                        trial,
                        a,
                        &run_cell(spec, base, value, trial, a)?,
                    ))
                })
                .collect()
        })
        .collect();
    Ok(rows?.into_iter().flatten().collect())
}

/// Re-runs the cell behind `row` and returns the fresh report.
pub fn replay_row(spec: &SweepSpec, base: &Scenario, row: &ResultRow) -> Result<SolveReport> {
    run_cell(spec, base, row.sweep_value, row.trial, row.algorithm)
}

/// Mean feasible objective (watts) per sweep value for one algorithm.
/// Infeasible trials are skipped.
pub fn mean_objective(rows: &[ResultRow], algorithm: Algorithm) -> Vec<(f64, f64)> {
    let mut out: Vec<(f64, f64, usize)> = Vec::new();
    for r in rows.iter().filter(|r| r.algorithm == algorithm) {
        let Some(obj) = r.objective_w else { continue };
        match out.iter_mut().find(|e| e.0 == r.sweep_value) {
            Some(e) => {
                e.1 += obj;
                e.2 += 1;
            }
            None => out.push((r.sweep_value, obj, 1)),
        }
    }
    out.into_iter().map(|(v, s, n)| (v, s / n as f64)).collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ExportFormat {
    Csv,
    Json,
}

const COLUMNS: [&str; 10] = [
    "sweep_value",
    "algorithm",
    "trial",
    "drop_seed",
    "trial_seed",
    "status",
    "objective_w",
    "objective_dbm",
    "outer_iterations",
    "wall_time_s",
];

/// 17 significant digits, enough to round-trip any `f64`.
fn num(x: f64) -> String {
    format!("{x:.16e}")
}

fn opt_num(x: Option<f64>) -> String {
    x.map(num).unwrap_or_default()
}

fn status_label(s: SolveStatus) -> &'static str {
    match s {
        SolveStatus::Converged => "converged",
        SolveStatus::IterationCapped => "iteration-capped",
        SolveStatus::Infeasible => "infeasible",
    }
}

fn record(r: &ResultRow) -> [String; 10] {
    [
        num(r.sweep_value),
        r.algorithm.label().to_string(),
        r.trial.to_string(),
        r.drop_seed.to_string(),
        r.trial_seed.to_string(),
        status_label(r.status).to_string(),
        opt_num(r.objective_w),
        opt_num(r.objective_dbm),
        r.outer_iterations.to_string(),
        opt_num(r.wall_time_s),
    ]
}

pub fn to_csv(rows: &[ResultRow]) -> String {
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(Vec::new());
    w.write_record(COLUMNS).expect("in-memory write");
    for r in rows {
        w.write_record(record(r)).expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("csv output is utf-8")
}

#[derive(Serialize)]
struct JsonRow<'a> {
    sweep_value: Box<RawValue>,
    algorithm: &'a str,
    trial: usize,
    drop_seed: u64,
    trial_seed: u64,
    status: SolveStatus,
    objective_w: Option<Box<RawValue>>,
    objective_dbm: Option<Box<RawValue>>,
    outer_iterations: usize,
    wall_time_s: Option<Box<RawValue>>,
}

fn raw(x: f64) -> Box<RawValue> {
    RawValue::from_string(num(x)).expect("formatted float is valid json")
}

pub fn to_json(rows: &[ResultRow]) -> String {
    let out: Vec<JsonRow<'_>> = rows
        .iter()
        .map(|r| JsonRow {
            sweep_value: raw(r.sweep_value),
            algorithm: r.algorithm.label(),
            trial: r.trial,
            drop_seed: r.drop_seed,
            trial_seed: r.trial_seed,
            status: r.status,
            objective_w: r.objective_w.map(raw),
            objective_dbm: r.objective_dbm.map(raw),
            outer_iterations: r.outer_iterations,
            wall_time_s: r.wall_time_s.map(raw),
        })
        .collect();
    let mut s = serde_json::to_string_pretty(&out).expect("rows serialize");
    s.push('\n');
    s
}

pub fn export_string(rows: &[ResultRow], format: ExportFormat) -> String {
    match format {
        ExportFormat::Csv => to_csv(rows),
        ExportFormat::Json => to_json(rows),
    }
}

pub fn export(rows: &[ResultRow], format: ExportFormat, path: &Path) -> Result<()> {
    std::fs::write(path, export_string(rows, format)).map_err(|e| Error::io(path, e))
}

fn parse_err(message: impl Into<String>) -> Error {
    Error::Parse {
        path: "<rows>".into(),
        message: message.into(),
    }
}

pub fn parse_csv(text: &str) -> Result<Vec<ResultRow>> {
    let mut rd = csv::Reader::from_reader(text.as_bytes());
    let header = rd.headers().map_err(|e| parse_err(e.to_string()))?;
    if header.iter().ne(COLUMNS) {
        return Err(parse_err(format!("unexpected header {header:?}")));
    }
    let mut rows = Vec::new();
    for (i, rec) in rd.records().enumerate() {
        let rec = rec.map_err(|e| parse_err(e.to_string()))?;
        let line = i + 2;
        let field = |k: usize| rec.get(k).unwrap_or("");
        let f = |k: usize| -> Result<f64> {
            field(k)
                .parse()
                .map_err(|_| parse_err(format!("line {line}: bad {} {:?}", COLUMNS[k], field(k))))
        };
        let of = |k: usize| -> Result<Option<f64>> {
            if field(k).is_empty() {
                Ok(None)
            } else {
                f(k).map(Some)
            }
        };
        let int = |k: usize| -> Result<u64> {
            field(k)
                .parse()
                .map_err(|_| parse_err(format!("line {line}: bad {} {:?}", COLUMNS[k], field(k))))
        };
        let status = match field(5) {
            "converged" => SolveStatus::Converged,
            "iteration-capped" => SolveStatus::IterationCapped,
            "infeasible" => SolveStatus::Infeasible,
            other => return Err(parse_err(format!("line {line}: bad status {other:?}"))),
        };
        rows.push(ResultRow {
            sweep_value: f(0)?,
            algorithm: Algorithm::parse(field(1))
                .ok_or_else(|| parse_err(format!("line {line}: bad algorithm {:?}", field(1))))?,
            trial: int(2)? as usize,
            drop_seed: int(3)?,
            trial_seed: int(4)?,
            status,
            objective_w: of(6)?,
            objective_dbm: of(7)?,
            outer_iterations: int(8)? as usize,
            wall_time_s: of(9)?,
        });
    }
    Ok(rows)
}

pub fn parse_json(text: &str) -> Result<Vec<ResultRow>> {
    serde_json::from_str(text).map_err(|e| parse_err(e.to_string()))
}

/// One-line summary of per-value means, for logs and examples.
pub fn summarize(rows: &[ResultRow], algorithms: &[Algorithm]) -> String {
    let mut s = String::new();
    for &a in algorithms {
        let _ = write!(s, "{:>12}", a.label());
        for (v, m) in mean_objective(rows, a) {
            let _ = write!(s, "  {v}: {:.3} dBm", watts_to_dbm(m));
        }
        s.push('\n');
    }
    s
}
