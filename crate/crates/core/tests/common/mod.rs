#![allow(dead_code)]

use pass_swipt::config::sample_receivers;
use pass_swipt::{optimize_powers, PaLayout, PowerAllocation, Scenario};

/// Reference scenario with `m` antennas and receivers dropped from `seed`.
pub fn scenario(seed: u64, m: usize) -> Scenario {
    let (irs, ers) = sample_receivers(10.0, 6.0, 2, 2, seed);
    Scenario {
        num_antennas: m,
        ..Scenario::reference(irs, ers)
    }
}

/// Same as [`scenario`] with the QoS floors relaxed far enough that every
/// drop is feasible.
pub fn loose_scenario(seed: u64, m: usize) -> Scenario {
    Scenario {
        sinr_floor: 1.0,
        energy_floor: 1e-12,
        ..scenario(seed, m)
    }
}

/// The LP optimum at the uniform layout, if any.
pub fn uniform_start(s: &Scenario) -> Option<(PaLayout, PowerAllocation)> {
    let layout = s.uniform_layout();
    let alloc = optimize_powers(s, &layout).unwrap().allocation?;
    Some((layout, alloc))
}

pub fn rel_close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * a.abs().max(b.abs())
}
