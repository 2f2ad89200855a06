//! Antenna position optimization at a fixed power allocation.
//!
//! Both searches maximize `Σ_j E_j` over layouts that keep the antennas on
//! the waveguide, at least `Δ` apart, every IR above its SINR floor, every
//! ER above its energy floor, and the IR gains ordered as the decoding
//! order frozen at the start of the call.

mod elementwise;
mod pso;
pub mod repair;

use std::cmp::Ordering;

use serde::{Deserialize, Serialize};

pub use elementwise::{elementwise_optimize, ElementWiseConfig, ElementWiseOutcome};
pub use pso::{
    inertia_schedule, pso_optimize, pso_velocity_update, weight_draw, Particle, PsoConfig,
    PsoOutcome, Swarm, UnitDraw,
};

use crate::error::Result;
use crate::system::{
    qos_state, ChannelPowers, DecodingOrder, PaLayout, PowerAllocation, QosState, Scenario,
};

/// Fitness of a candidate layout. Every feasible value ranks above every
/// infeasible one; feasible values rank by objective, infeasible ones by
/// total relative constraint violation (smaller is better).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FitnessValue {
    /// Σ_j E_j, watts.
    pub objective: f64,
    pub feasible: bool,
    pub violation: f64,
}

impl FitnessValue {
    pub const WORST: FitnessValue = FitnessValue {
        objective: f64::NEG_INFINITY,
        feasible: false,
        violation: f64::INFINITY,
    };

    fn from_qos(q: &QosState) -> Self {
        Self {
            objective: q.objective,
            feasible: q.feasible(),
            violation: q.violation,
        }
    }

    pub fn rank(&self, other: &Self) -> Ordering {
        match (self.feasible, other.feasible) {
            (true, false) => Ordering::Greater,
            (false, true) => Ordering::Less,
            (true, true) => self.objective.total_cmp(&other.objective),
            (false, false) => other
                .violation
                .total_cmp(&self.violation)
                .then(self.objective.total_cmp(&other.objective)),
        }
    }

    pub fn better_than(&self, other: &Self) -> bool {
        self.rank(other) == Ordering::Greater
    }
}

/// Position subproblem: scenario plus the frozen allocation and decoding
/// order.
#[derive(Debug, Clone)]
pub struct PositionProblem<'a> {
    pub scenario: &'a Scenario,
    pub alloc: &'a PowerAllocation,
    pub order: DecodingOrder,
}

impl<'a> PositionProblem<'a> {
    pub fn new(scenario: &'a Scenario, alloc: &'a PowerAllocation, order: DecodingOrder) -> Self {
        Self {
            scenario,
            alloc,
            order,
        }
    }

    /// Freezes the decoding order induced by `layout`.
    pub fn at_layout(
        scenario: &'a Scenario,
        alloc: &'a PowerAllocation,
        layout: &PaLayout,
    ) -> Result<Self> {
        let order = crate::system::decoding_order(scenario, layout)?;
        Ok(Self::new(scenario, alloc, order))
    }

    fn qos(&self, powers: &ChannelPowers) -> QosState {
        qos_state(self.scenario, self.alloc, &self.order, powers)
    }

    /// Fitness of a layout that already satisfies spacing and bounds.
    pub fn fitness(&self, layout: &PaLayout) -> Result<FitnessValue> {
        let powers = self.scenario.channel_powers(layout)?;
        Ok(FitnessValue::from_qos(&self.qos(&powers)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fv(objective: f64, feasible: bool, violation: f64) -> FitnessValue {
        FitnessValue {
            objective,
            feasible,
            violation,
        }
    }

    #[test]
    fn feasible_beats_infeasible() {
        assert!(fv(1e-9, true, 0.0).better_than(&fv(1.0, false, 0.01)));
        assert!(!fv(1.0, false, 0.0).better_than(&fv(1e-9, true, 0.0)));
    }

    #[test]
    fn infeasible_ranked_by_violation() {
        assert!(fv(0.0, false, 0.1).better_than(&fv(5.0, false, 0.2)));
    }

    #[test]
    fn feasible_ranked_by_objective() {
        assert!(fv(2.0, true, 0.0).better_than(&fv(1.0, true, 0.0)));
        assert!(!fv(1.0, true, 0.0).better_than(&fv(1.0, true, 0.0)));
    }
}
