//! One LDW-PSO position step at fixed powers, printing the global-best
//! history.
//!
//! cargo run --release --example ldw_pso -- [seed]

use pass_swipt::system::watts_to_dbm;
use pass_swipt::{
    decoding_order, nominal_allocation, optimize_powers, parse_scenario_str, pso_optimize,
    PositionProblem, PsoConfig, DEFAULT_SCENARIO,
};

fn main() -> pass_swipt::Result<()> {
    let seed = std::env::args()
        .nth(1)
        .and_then(|a| a.parse().ok())
        .unwrap_or(0);
    let scenario = parse_scenario_str(DEFAULT_SCENARIO)?;
    let start = scenario.uniform_layout();
    // The LP optimum when the start admits one, else the order-aware
    // nominal split used for feasibility restoration.
    let alloc = match optimize_powers(&scenario, &start)?.allocation {
        Some(a) => a,
        None => nominal_allocation(&scenario, &decoding_order(&scenario, &start)?),
    };
    let problem = PositionProblem::at_layout(&scenario, &alloc, &start)?;
    let cfg = PsoConfig {
        rng_seed: seed,
        ..PsoConfig::default()
    };
    let out = pso_optimize(&problem, &cfg, Some(&start))?;
    for (t, f) in out.history.iter().enumerate().step_by(50) {
        println!(
            "t = {t:>3}: {:.4} dBm (feasible: {})",
            watts_to_dbm(f.objective),
            f.feasible
        );
    }
    println!(
        "final {:.4} dBm at {:?}",
        watts_to_dbm(out.objective),
        &out.layout[..]
    );
    Ok(())
}
