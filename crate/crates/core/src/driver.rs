//! Alternating optimization of powers and positions, plus the two
//! fixed-antenna reference systems.

use std::time::Instant;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::position::repair::repair_spacing;
use crate::position::{
    elementwise_optimize, pso_optimize, ElementWiseConfig, PositionProblem, PsoConfig, UnitDraw,
};
use crate::power::optimize_powers;
use crate::system::{
    decoding_order, evaluate, DecodingOrder, PaLayout, PowerAllocation, Scenario, SystemState,
    REL_TOL,
};

/// SplitMix64 finalizer folded over `parts`; gives independent, replayable
/// sub-seeds.
pub fn derive_seed(base: u64, parts: &[u64]) -> u64 {
    fn mix(mut z: u64) -> u64 {
        z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
        z ^ (z >> 31)
    }
    parts
        .iter()
        .fold(mix(base), |acc, &p| mix(acc.rotate_left(23) ^ mix(p)))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum PositionAlgorithm {
    ElementWise(ElementWiseConfig),
    LdwPso(PsoConfig),
}

impl PositionAlgorithm {
    pub fn label(&self) -> &'static str {
        match self {
            PositionAlgorithm::ElementWise(_) => "elementwise",
            PositionAlgorithm::LdwPso(_) => "pso",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum InitStrategy {
    Uniform,
    Random { seed: u64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AlternationConfig {
    pub max_outer_iters: usize,
    pub rel_tol: f64,
    pub position_algorithm: PositionAlgorithm,
    pub init_strategy: InitStrategy,
    /// Random re-initializations tried when the first power subproblem is
    /// infeasible.
    pub restarts: usize,
    pub restart_seed: u64,
}

impl AlternationConfig {
    pub fn new(position_algorithm: PositionAlgorithm) -> Self {
        Self {
            max_outer_iters: 20,
            rel_tol: 1e-4,
            position_algorithm,
            init_strategy: InitStrategy::Uniform,
            restarts: 5,
            restart_seed: 0,
        }
    }

    pub fn elementwise() -> Self {
        Self::new(PositionAlgorithm::ElementWise(ElementWiseConfig::default()))
    }

    pub fn pso() -> Self {
        Self::new(PositionAlgorithm::LdwPso(PsoConfig::default()))
    }

    pub fn validate(&self) -> Result<()> {
        if self.max_outer_iters < 1 {
            return Err(Error::InvalidConfig(
                "max_outer_iters must be at least 1".into(),
            ));
        }
        if !(self.rel_tol > 0.0) {
            return Err(Error::InvalidConfig("rel_tol must be > 0".into()));
        }
        match &self.position_algorithm {
            PositionAlgorithm::ElementWise(c) => c.validate(),
            PositionAlgorithm::LdwPso(c) => c.validate(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SolveStatus {
    Converged,
    IterationCapped,
    Infeasible,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolveReport {
    /// `elementwise`, `pso`, `mimo` or `fixed`.
    pub algorithm: String,
    pub status: SolveStatus,
    pub layout: Option<PaLayout>,
    pub allocation: Option<PowerAllocation>,
    /// Σ_j E_j of the final pair, watts.
    pub objective: Option<f64>,
    /// Objective after the initial power allocation and after every
    /// accepted outer iteration.
    pub trajectory: Vec<f64>,
    pub outer_iterations: usize,
    pub sinr: Vec<f64>,
    pub harvested: Vec<f64>,
    pub wall_time_s: f64,
}

impl SolveReport {
    fn infeasible(algorithm: &str, started: Instant) -> Self {
        Self {
            algorithm: algorithm.to_string(),
            status: SolveStatus::Infeasible,
            layout: None,
            allocation: None,
            objective: None,
            trajectory: Vec::new(),
            outer_iterations: 0,
            sinr: Vec::new(),
            harvested: Vec::new(),
            wall_time_s: started.elapsed().as_secs_f64(),
        }
    }

    fn finish(
        algorithm: &str,
        status: SolveStatus,
        layout: PaLayout,
        alloc: PowerAllocation,
        state: SystemState,
        trajectory: Vec<f64>,
        started: Instant,
    ) -> Self {
        Self {
            algorithm: algorithm.to_string(),
            status,
            outer_iterations: trajectory.len().saturating_sub(1),
            objective: Some(state.objective),
            sinr: state.sinr,
            harvested: state.harvested,
            layout: Some(layout),
            allocation: Some(alloc),
            trajectory,
            wall_time_s: started.elapsed().as_secs_f64(),
        }
    }

    pub fn is_feasible(&self) -> bool {
        self.status != SolveStatus::Infeasible
    }
}

/// Sorted uniform draw on the waveguide, projected onto the spacing
/// constraint.
pub fn random_layout<R: UnitDraw + ?Sized>(scenario: &Scenario, rng: &mut R) -> PaLayout {
    let d_w = scenario.waveguide_length;
    let mut xs: Vec<f64> = (0..scenario.num_antennas)
        .map(|_| rng.draw() * d_w)
        .collect();
    xs.sort_by(f64::total_cmp);
    repair_spacing(&mut xs, scenario.min_spacing, d_w);
    PaLayout::new(xs)
}

fn initial_layouts(scenario: &Scenario, cfg: &AlternationConfig) -> Vec<PaLayout> {
    let mut out = Vec::with_capacity(cfg.restarts + 1);
    out.push(match cfg.init_strategy {
        InitStrategy::Uniform => scenario.uniform_layout(),
        InitStrategy::Random { seed } => {
            random_layout(scenario, &mut ChaCha8Rng::seed_from_u64(seed))
        }
    });
    for r in 0..cfg.restarts {
        let seed = derive_seed(cfg.restart_seed, &[0x5245_5354, r as u64]);
        out.push(random_layout(
            scenario,
            &mut ChaCha8Rng::seed_from_u64(seed),
        ));
    }
    out
}

fn position_step(
    problem: &PositionProblem<'_>,
    layout: &PaLayout,
    algorithm: &PositionAlgorithm,
    outer_iter: usize,
) -> Result<PaLayout> {
    Ok(match algorithm {
        PositionAlgorithm::ElementWise(cfg) => elementwise_optimize(problem, layout, cfg)?.layout,
        PositionAlgorithm::LdwPso(cfg) => {
            let cfg = PsoConfig {
                rng_seed: derive_seed(cfg.rng_seed, &[outer_iter as u64]),
                ..*cfg
            };
            pso_optimize(problem, &cfg, Some(layout))?.layout
        }
    })
}

/// A full-budget allocation that meets every SINR floor with a factor-two
/// margin once the channels are strong enough to beat the noise: the
/// receiver decoded last gets weight 1 and each earlier one `2γ` times the
/// weight of everything decoded after it.
pub fn nominal_allocation(scenario: &Scenario, order: &DecodingOrder) -> PowerAllocation {
    let mut p = vec![0.0; scenario.num_irs()];
    let mut later = 0.0;
    for &i in order.iter().rev() {
        p[i] = if later == 0.0 {
            1.0
        } else {
            2.0 * scenario.sinr_floor * later
        };
        later += p[i];
    }
    let scale = scenario.per_antenna_budget() / later;
    PowerAllocation::new(p.into_iter().map(|x| x * scale).collect())
}

/// Runs the position search at [`nominal_allocation`] from `layout`; its
/// fitness ranks infeasible layouts by total violation, so the search
/// walks toward a layout where the QoS floors hold. Returns the pair if
/// the LP is feasible there.
fn restore_feasibility(
    scenario: &Scenario,
    layout: &PaLayout,
    algorithm: &PositionAlgorithm,
) -> Result<Option<(PaLayout, PowerAllocation)>> {
    let order = decoding_order(scenario, layout)?;
    let alloc = nominal_allocation(scenario, &order);
    let problem = PositionProblem::new(scenario, &alloc, order);
    let candidate = position_step(&problem, layout, algorithm, 0)?;
    Ok(optimize_powers(scenario, &candidate)?
        .allocation
        .map(|a| (candidate, a)))
}

/// Alternates the power LP and the position search until the relative
/// objective gain of an outer iteration drops below `rel_tol`.
///
/// The start is the first of the configured initial layout and the random
/// restarts at which the LP is feasible. If there is none, one position
/// search at [`nominal_allocation`] from the initial layout tries to reach
/// a feasible layout before the run is declared infeasible.
///
/// Each outer iteration freezes the decoding order of the current layout,
/// moves the antennas at the current powers, and re-solves the LP at the
/// new layout. An iteration whose result is worse or infeasible is
/// discarded and the loop stops, so the trajectory never decreases.
pub fn alternate(scenario: &Scenario, cfg: &AlternationConfig) -> Result<SolveReport> {
    let started = Instant::now();
    scenario.validate()?;
    cfg.validate()?;
    let label = cfg.position_algorithm.label();

    let starts = initial_layouts(scenario, cfg);
    let mut start = None;
    for layout in &starts {
        if let Some(alloc) = optimize_powers(scenario, layout)?.allocation {
            start = Some((layout.clone(), alloc));
            break;
        }
    }
    if start.is_none() {
        start = restore_feasibility(scenario, &starts[0], &cfg.position_algorithm)?;
    }
    let Some((mut layout, mut alloc)) = start else {
        return Ok(SolveReport::infeasible(label, started));
    };
    let mut state = evaluate(scenario, &layout, &alloc)?;
    let mut trajectory = vec![state.objective];
    let mut status = SolveStatus::IterationCapped;

    for iter in 1..=cfg.max_outer_iters {
        let problem = PositionProblem::at_layout(scenario, &alloc, &layout)?;
        let next_layout = position_step(&problem, &layout, &cfg.position_algorithm, iter)?;
        let lp = optimize_powers(scenario, &next_layout)?;
        let Some(next_alloc) = lp.allocation else {
            status = SolveStatus::Converged;
            break;
        };
        let next_state = evaluate(scenario, &next_layout, &next_alloc)?;
        if !next_state.feasible() || next_state.objective < state.objective {
            status = SolveStatus::Converged;
            break;
        }
        let gain =
            (next_state.objective - state.objective) / state.objective.abs().max(f64::MIN_POSITIVE);
        layout = next_layout;
        alloc = next_alloc;
        state = next_state;
        trajectory.push(state.objective);
        if gain < cfg.rel_tol {
            status = SolveStatus::Converged;
            break;
        }
    }

    Ok(SolveReport::finish(
        label, status, layout, alloc, state, trajectory, started,
    ))
}

fn single_lp_report(
    label: &str,
    scenario: &Scenario,
    layout: PaLayout,
    started: Instant,
) -> Result<SolveReport> {
    layout.check(scenario)?;
    let lp = optimize_powers(scenario, &layout)?;
    let Some(alloc) = lp.allocation else {
        return Ok(SolveReport::infeasible(label, started));
    };
    let state = evaluate(scenario, &layout, &alloc)?;
    Ok(SolveReport::finish(
        label,
        SolveStatus::Converged,
        layout,
        alloc,
        state.clone(),
        vec![state.objective],
        started,
    ))
}

/// `M` antennas frozen at `Δ` spacing next to the feed point; only the
/// powers are optimized.
pub fn baseline_mimo(scenario: &Scenario) -> Result<SolveReport> {
    let started = Instant::now();
    scenario.validate()?;
    single_lp_report("mimo", scenario, scenario.feed_cluster_layout(), started)
}

/// The single-antenna scenario used by [`baseline_fixed`].
pub fn fixed_antenna_scenario(scenario: &Scenario) -> Scenario {
    Scenario {
        num_antennas: 1,
        ..scenario.clone()
    }
}

/// One antenna at the feed point carrying the whole budget.
pub fn baseline_fixed(scenario: &Scenario) -> Result<SolveReport> {
    let started = Instant::now();
    scenario.validate()?;
    let single = fixed_antenna_scenario(scenario);
    single_lp_report(
        "fixed",
        &single,
        PaLayout::new(vec![scenario.feed_x]),
        started,
    )
}

/// What `solve` writes and `validate` reads back: the scenario plus one
/// report per algorithm.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolveRecord {
    pub scenario: Scenario,
    pub reports: Vec<SolveReport>,
}

/// Re-evaluates a report's (layout, allocation) from scratch. Fails if the
/// pair violates a constraint or the recomputed objective differs from the
/// reported one by more than the relative tolerance.
pub fn revalidate(scenario: &Scenario, report: &SolveReport) -> Result<SystemState> {
    let (Some(layout), Some(alloc), Some(objective)) =
        (&report.layout, &report.allocation, report.objective)
    else {
        return Err(Error::InvalidLayout(format!(
            "{} report carries no solution",
            report.algorithm
        )));
    };
    let scenario = if report.algorithm == "fixed" {
        fixed_antenna_scenario(scenario)
    } else {
        scenario.clone()
    };
    layout.check(&scenario)?;
    let state = evaluate(&scenario, layout, alloc)?;
    if !state.feasible() {
        return Err(Error::InvalidLayout(format!(
            "{} solution violates constraints: {:?}",
            report.algorithm, state.flags
        )));
    }
    if (state.objective - objective).abs() > REL_TOL * objective.abs().max(state.objective.abs()) {
        return Err(Error::InvalidLayout(format!(
            "{} objective {} does not match re-evaluated {}",
            report.algorithm, objective, state.objective
        )));
    }
    Ok(state)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn derived_seeds_differ_per_part() {
        let a = derive_seed(7, &[1, 2]);
        assert_eq!(a, derive_seed(7, &[1, 2]));
        assert_ne!(a, derive_seed(7, &[2, 1]));
        assert_ne!(a, derive_seed(8, &[1, 2]));
    }

    #[test]
    fn zero_rel_tol_rejected() {
        let mut cfg = AlternationConfig::elementwise();
        cfg.rel_tol = 0.0;
        assert!(cfg.validate().is_err());
    }
}
