use serde::{Deserialize, Serialize};

use super::{FitnessValue, PositionProblem};
use crate::channel::{ChannelGain, Point3};
use crate::error::{Error, Result};
use crate::system::{ChannelPowers, PaLayout, ABS_TOL_M};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ElementWiseConfig {
    /// `D`, number of uniformly spaced candidate positions on `[0, D_w]`.
    pub grid_points: usize,
    /// `L`, cap on full coordinate sweeps.
    pub max_sweeps: usize,
    /// Stop once a sweep changes the objective by less than this, relatively.
    pub convergence_tol: f64,
}

impl Default for ElementWiseConfig {
    fn default() -> Self {
        Self {
            grid_points: 4096,
            max_sweeps: 20,
            convergence_tol: 1e-6,
        }
    }
}

impl ElementWiseConfig {
    pub fn validate(&self) -> Result<()> {
        if self.grid_points < 2 {
            return Err(Error::InvalidConfig(
                "grid_points must be at least 2".into(),
            ));
        }
        if self.max_sweeps < 1 {
            return Err(Error::InvalidConfig("max_sweeps must be at least 1".into()));
        }
        if !(self.convergence_tol >= 0.0) {
            return Err(Error::InvalidConfig("convergence_tol must be >= 0".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ElementWiseOutcome {
    pub layout: PaLayout,
    /// Σ_j E_j at `layout`, watts.
    pub objective: f64,
    pub fitness: FitnessValue,
    /// Objective before the first sweep and after each sweep.
    pub trajectory: Vec<f64>,
    pub sweeps: usize,
}

/// Per-antenna gains to every receiver (ERs first, then IRs), so that moving
/// one antenna only needs fresh gains for that antenna. Aggregates are
/// summed in antenna order, matching [`crate::system::evaluate`] bit for
/// bit.
struct GainCache {
    receivers: Vec<Point3>,
    n_er: usize,
    /// `gains[r][m]`.
    gains: Vec<Vec<ChannelGain>>,
}

impl GainCache {
    fn new(problem: &PositionProblem<'_>, layout: &[f64]) -> Result<Self> {
        let s = problem.scenario;
        let wg = s.waveguide();
        let receivers: Vec<Point3> = s.ers.iter().chain(&s.irs).copied().collect();
        let gains = receivers
            .iter()
            .map(|&r| {
                layout
                    .iter()
                    .map(|&x| wg.gain(x, r))
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<_>>()?;
        Ok(Self {
            receivers,
            n_er: s.num_ers(),
            gains,
        })
    }

    fn set(&mut self, problem: &PositionProblem<'_>, k: usize, x: f64) -> Result<()> {
        let wg = problem.scenario.waveguide();
        for (r, row) in self.receivers.iter().zip(self.gains.iter_mut()) {
            row[k] = wg.gain(x, *r)?;
        }
        Ok(())
    }

    fn powers_with(
        &self,
        problem: &PositionProblem<'_>,
        k: usize,
        x: f64,
    ) -> Result<ChannelPowers> {
        let wg = problem.scenario.waveguide();
        let mut all = Vec::with_capacity(self.receivers.len());
        for (r, row) in self.receivers.iter().zip(&self.gains) {
            let hk = wg.gain(x, *r)?;
            let sum: ChannelGain = row
                .iter()
                .enumerate()
                .map(|(m, &h)| if m == k { hk } else { h })
                .sum();
            all.push(sum.power());
        }
        let ir = all.split_off(self.n_er);
        Ok(ChannelPowers { er: all, ir })
    }
}

/// Coordinate-wise exhaustive grid search.
///
/// Antennas are visited in index order; each is moved to the best grid
/// point `k·D_w/(D−1)` that keeps `Δ` to every other antenna, holding the
/// rest fixed. A move is taken only if it strictly improves fitness, so
/// the objective never decreases. Sweeps repeat until the relative change
/// drops below the tolerance or `max_sweeps` is reached.
pub fn elementwise_optimize(
    problem: &PositionProblem<'_>,
    init: &PaLayout,
    cfg: &ElementWiseConfig,
) -> Result<ElementWiseOutcome> {
    cfg.validate()?;
    let s = problem.scenario;
    init.check(s)?;

    let d_w = s.waveguide_length;
    let delta = s.min_spacing;
    let denom = (cfg.grid_points - 1) as f64;
    let grid: Vec<f64> = (0..cfg.grid_points)
        .map(|k| k as f64 * d_w / denom)
        .collect();

    let mut layout = init.clone();
    let mut cache = GainCache::new(problem, &layout)?;
    let mut current = problem.fitness(&layout)?;
    let mut trajectory = vec![current.objective];
    let mut sweeps = 0;

    while sweeps < cfg.max_sweeps {
        sweeps += 1;
        let before = current;
        let mut moved = false;
        for k in 0..layout.len() {
            let mut best: Option<(f64, FitnessValue)> = None;
            for &x in &grid {
                let clash = layout
                    .iter()
                    .enumerate()
                    .any(|(m, &xm)| m != k && (x - xm).abs() < delta - ABS_TOL_M);
                if clash {
                    continue;
                }
                let powers = cache.powers_with(problem, k, x)?;
                let f = FitnessValue::from_qos(&problem.qos(&powers));
                let incumbent = best.map_or(current, |b| b.1);
                if f.better_than(&incumbent) {
                    best = Some((x, f));
                }
            }
            if let Some((x, f)) = best {
                layout.as_mut_slice()[k] = x;
                cache.set(problem, k, x)?;
                current = f;
                moved = true;
            }
        }
        trajectory.push(current.objective);
        if !moved {
            break;
        }
        if before.feasible && current.feasible {
            let scale = before.objective.abs().max(f64::MIN_POSITIVE);
            if (current.objective - before.objective) / scale < cfg.convergence_tol {
                break;
            }
        }
    }

    Ok(ElementWiseOutcome {
        objective: current.objective,
        fitness: current,
        layout,
        trajectory,
        sweeps,
    })
}
