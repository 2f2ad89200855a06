//! Pinching-antenna assisted simultaneous wireless information and power
//! transfer (SWIPT).
//!
//! A single dielectric waveguide carries a NOMA superposition of the
//! information signals; `M` pinching antennas placed anywhere along it
//! radiate that signal to information receivers (IRs), which decode with
//! successive interference cancellation, and to energy receivers (ERs),
//! which harvest it. The crate maximizes total harvested power subject to
//! per-IR SINR floors, per-ER energy floors, a transmit power budget and a
//! minimum antenna spacing by alternating between
//!
//! * an exact linear program over the power allocation ([`power`]), and
//! * a position search at fixed powers, either element-wise grid search or
//!   linearly-decreasing-weight PSO ([`position`]).
//!
//! [`driver`] runs the alternation and the fixed-antenna baselines,
//! [`config`] reads scenario files and [`sweep`] runs parameter sweeps.
//!
//! Costs: one element-wise position step is `O(L·D·M)` candidate
//! evaluations (sweeps × grid points × antennas); one PSO step is
//! `O(P·M·t_max)`.

// `!(x >= a)` checks are meant to reject NaN as well.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod channel;
pub mod config;
pub mod driver;
pub mod error;
pub mod position;
pub mod power;
pub mod sweep;
pub mod system;

pub use channel::{aggregate_gain, channel_gain, distance, ChannelGain, PhysicalConstants, Point3};
pub use config::{
    parse_scenario, parse_scenario_str, scenario_to_toml, ScenarioFile, DEFAULT_SCENARIO,
};
pub use driver::{
    alternate, baseline_fixed, baseline_mimo, nominal_allocation, revalidate, AlternationConfig,
    SolveRecord, SolveReport, SolveStatus,
};
pub use error::{Error, Result};
pub use position::{
    elementwise_optimize, pso_optimize, ElementWiseConfig, PositionProblem, PsoConfig,
};
pub use power::{build_lp, optimize_powers, solve_lp, LpInstance, LpSolution, LpStatus};
pub use sweep::{run_sweep, Algorithm, ExportFormat, ResultRow, SweepParam, SweepSpec};
pub use system::{
    decoding_order, evaluate, harvested_power, sinr, DecodingOrder, PaLayout, PowerAllocation,
    Scenario, SystemState,
};
