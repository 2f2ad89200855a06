//! Power allocation at a fixed antenna layout.
//!
//! With positions frozen every channel gain is a constant, and the SINR
//! floor `p_i g_i / (g_i Σ_{later} p_l + σ_i²) ≥ γ_min` can be multiplied
//! out into the affine row
//!
//! ```text
//! g_i p_i − γ_min g_i Σ_{later} p_l ≥ γ_min σ_i²
//! ```
//!
//! The energy floors `(Σ_i p_i) G_j ≥ E_min`, the budget `M Σ_i p_i ≤ P_B`
//! and the objective `Σ_i p_i Σ_j G_j` are affine too, so the subproblem is
//! an exact linear program solved here with a small simplex.

pub mod simplex;

use serde::{Deserialize, Serialize};

pub use simplex::Sense;

use crate::error::{Error, Result};
use crate::system::{DecodingOrder, PaLayout, PowerAllocation, Scenario};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum RowKind {
    Sinr { ir: usize },
    Energy { er: usize },
    Budget,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LpRow {
    pub kind: RowKind,
    pub coeffs: Vec<f64>,
    pub sense: Sense,
    pub rhs: f64,
}

impl LpRow {
    fn activity(&self, p: &[f64]) -> f64 {
        self.coeffs.iter().zip(p).map(|(a, x)| a * x).sum()
    }

    /// Scale used for relative feasibility and binding checks.
    fn magnitude(&self, p: &[f64]) -> f64 {
        let terms: f64 = self.coeffs.iter().zip(p).map(|(a, x)| (a * x).abs()).sum();
        terms.max(self.rhs.abs()).max(f64::MIN_POSITIVE)
    }

    fn slack(&self, p: &[f64]) -> f64 {
        let act = self.activity(p);
        match self.sense {
            Sense::Ge => act - self.rhs,
            Sense::Le => self.rhs - act,
            Sense::Eq => -(act - self.rhs).abs(),
        }
    }
}

/// The power-allocation LP: one variable per IR, rows in SINR (decoding
/// order), energy, budget order.
#[derive(Debug, Clone, PartialEq)]
pub struct LpInstance {
    pub objective: Vec<f64>,
    pub rows: Vec<LpRow>,
    pub order: DecodingOrder,
}

impl LpInstance {
    pub fn num_vars(&self) -> usize {
        self.objective.len()
    }

    pub fn row(&self, kind: RowKind) -> Option<&LpRow> {
        self.rows.iter().find(|r| r.kind == kind)
    }

    pub fn objective_value(&self, p: &[f64]) -> f64 {
        self.objective.iter().zip(p).map(|(c, x)| c * x).sum()
    }

    /// True when `p ≥ 0` and every row holds to relative slack `rel_tol`.
    pub fn is_feasible(&self, p: &[f64], rel_tol: f64) -> bool {
        p.iter().all(|&x| x >= 0.0)
            && self
                .rows
                .iter()
                .all(|r| r.slack(p) >= -rel_tol * r.magnitude(p))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum LpStatus {
    Optimal,
    Infeasible,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LpSolution {
    pub status: LpStatus,
    /// `None` when infeasible.
    pub allocation: Option<PowerAllocation>,
    /// `cᵀp` at the optimum, watts.
    pub objective: Option<f64>,
    /// Rows holding with equality at the optimum.
    pub binding: Vec<RowKind>,
}

impl LpSolution {
    pub fn is_optimal(&self) -> bool {
        self.status == LpStatus::Optimal
    }

    fn infeasible() -> Self {
        Self {
            status: LpStatus::Infeasible,
            allocation: None,
            objective: None,
            binding: Vec::new(),
        }
    }
}

pub fn build_lp(scenario: &Scenario, layout: &PaLayout) -> Result<LpInstance> {
    let powers = scenario.channel_powers(layout)?;
    let order = DecodingOrder::from_gains(&powers.ir);
    let k = scenario.num_irs();
    let gamma = scenario.sinr_floor;

    let mut rows = Vec::with_capacity(k + scenario.num_ers() + 1);
    for (pos, &u) in order.iter().enumerate() {
        let g = powers.ir[u];
        let mut coeffs = vec![0.0; k];
        coeffs[u] = g;
        for &l in &order[pos + 1..] {
            coeffs[l] = -gamma * g;
        }
        rows.push(LpRow {
            kind: RowKind::Sinr { ir: u },
            coeffs,
            sense: Sense::Ge,
            rhs: gamma * scenario.noise_power[u],
        });
    }
    for (j, &g) in powers.er.iter().enumerate() {
        rows.push(LpRow {
            kind: RowKind::Energy { er: j },
            coeffs: vec![g; k],
            sense: Sense::Ge,
            rhs: scenario.energy_floor,
        });
    }
    rows.push(LpRow {
        kind: RowKind::Budget,
        coeffs: vec![scenario.num_antennas as f64; k],
        sense: Sense::Le,
        rhs: scenario.power_budget,
    });

    let harvest_per_watt: f64 = powers.er.iter().sum();
    Ok(LpInstance {
        objective: vec![harvest_per_watt; k],
        rows,
        order,
    })
}

/// Relative slack a returned vertex may show before it is reported as a
/// numerical failure rather than an optimum.
const VERIFY_TOL: f64 = 1e-9;
const BINDING_TOL: f64 = 1e-9;

pub fn solve_lp(instance: &LpInstance) -> Result<LpSolution> {
    let rows: Vec<_> = instance
        .rows
        .iter()
        .map(|r| (r.coeffs.clone(), r.sense, r.rhs))
        .collect();
    let x = match simplex::maximize(&instance.objective, &rows)? {
        simplex::Outcome::Infeasible => return Ok(LpSolution::infeasible()),
        simplex::Outcome::Optimal(x) => x,
    };
    if !instance.is_feasible(&x, VERIFY_TOL) {
        return Err(Error::LpNumerical(format!(
            "simplex vertex {x:?} violates the constraints beyond tolerance"
        )));
    }
    let binding = instance
        .rows
        .iter()
        .filter(|r| r.slack(&x).abs() <= BINDING_TOL * r.magnitude(&x))
        .map(|r| r.kind)
        .collect();
    Ok(LpSolution {
        status: LpStatus::Optimal,
        objective: Some(instance.objective_value(&x)),
        allocation: Some(PowerAllocation::new(x)),
        binding,
    })
}

pub fn optimize_powers(scenario: &Scenario, layout: &PaLayout) -> Result<LpSolution> {
    solve_lp(&build_lp(scenario, layout)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel::Point3;
    use crate::system::evaluate;

    fn scenario() -> Scenario {
        Scenario::reference(
            vec![Point3::ground(2.0, 1.0), Point3::ground(7.5, 4.0)],
            vec![Point3::ground(4.0, 2.0), Point3::ground(6.0, 5.0)],
        )
    }

    fn single_user(g: f64, sigma2: f64, gamma: f64, budget: f64) -> LpInstance {
        LpInstance {
            objective: vec![1e-7],
            rows: vec![
                LpRow {
                    kind: RowKind::Sinr { ir: 0 },
                    coeffs: vec![g],
                    sense: Sense::Ge,
                    rhs: gamma * sigma2,
                },
                LpRow {
                    kind: RowKind::Energy { er: 0 },
                    coeffs: vec![1e-7],
                    sense: Sense::Ge,
                    rhs: 0.0,
                },
                LpRow {
                    kind: RowKind::Budget,
                    coeffs: vec![1.0],
                    sense: Sense::Le,
                    rhs: budget,
                },
            ],
            order: DecodingOrder::new(vec![0]),
        }
    }

    #[test]
    fn single_user_takes_the_whole_budget() {
        let sol = solve_lp(&single_user(1e-7, 1e-12, 31.62, 2.5)).unwrap();
        assert!(sol.is_optimal());
        let p = sol.allocation.unwrap();
        assert!((p[0] - 2.5).abs() < 1e-12);
        assert!(sol.binding.contains(&RowKind::Budget));
    }

    #[test]
    fn unattainable_sinr_is_infeasible() {
        let sol = solve_lp(&single_user(1e-7, 1e-12, 1e10, 2.5)).unwrap();
        assert_eq!(sol.status, LpStatus::Infeasible);
        assert!(sol.allocation.is_none());
    }

    #[test]
    fn single_ir_row_has_no_interference_term() {
        let mut s = scenario();
        s.irs.truncate(1);
        s.noise_power.truncate(1);
        let lp = build_lp(&s, &s.uniform_layout()).unwrap();
        let row = lp.row(RowKind::Sinr { ir: 0 }).unwrap();
        assert_eq!(row.coeffs.len(), 1);
        assert!(row.coeffs[0] > 0.0);
        assert_eq!(row.rhs, s.sinr_floor * s.noise_power[0]);
    }

    #[test]
    fn first_decoded_row_carries_interference() {
        let s = scenario();
        let lp = build_lp(&s, &s.uniform_layout()).unwrap();
        assert_eq!(lp.rows.len(), 2 + 2 + 1);
        let (first, second) = (lp.order[0], lp.order[1]);
        let row = &lp.rows[0];
        assert_eq!(row.kind, RowKind::Sinr { ir: first });
        assert_eq!(row.coeffs[second], -s.sinr_floor * row.coeffs[first]);
        let last = &lp.rows[1];
        assert_eq!(last.coeffs[first], 0.0);
    }

    #[test]
    fn optimum_is_feasible_and_matches_evaluate() {
        let s = scenario();
        let layout = s.uniform_layout();
        let sol = optimize_powers(&s, &layout).unwrap();
        let alloc = sol.allocation.unwrap();
        let st = evaluate(&s, &layout, &alloc).unwrap();
        assert!(st.feasible(), "{:?}", st.flags);
        let obj = sol.objective.unwrap();
        assert!((obj - st.objective).abs() <= 1e-12 * obj);
    }
}
