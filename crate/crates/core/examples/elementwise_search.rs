//! One element-wise position step at fixed powers.
//!
//! cargo run --release --example elementwise_search -- [grid_points]

use pass_swipt::system::watts_to_dbm;
use pass_swipt::{
    decoding_order, elementwise_optimize, nominal_allocation, optimize_powers, parse_scenario_str,
    ElementWiseConfig, PositionProblem, DEFAULT_SCENARIO,
};

fn main() -> pass_swipt::Result<()> {
    let grid_points = std::env::args()
        .nth(1)
        .and_then(|a| a.parse().ok())
        .unwrap_or(4096);
    let scenario = parse_scenario_str(DEFAULT_SCENARIO)?;
    let start = scenario.uniform_layout();
    // The LP optimum when the start admits one, else the order-aware
    // nominal split used for feasibility restoration.
    let alloc = match optimize_powers(&scenario, &start)?.allocation {
        Some(a) => a,
        None => nominal_allocation(&scenario, &decoding_order(&scenario, &start)?),
    };
    let problem = PositionProblem::at_layout(&scenario, &alloc, &start)?;
    let cfg = ElementWiseConfig {
        grid_points,
        ..ElementWiseConfig::default()
    };
    let out = elementwise_optimize(&problem, &start, &cfg)?;
    println!("D = {grid_points}, {} sweeps", out.sweeps);
    for (i, obj) in out.trajectory.iter().enumerate() {
        println!("  after sweep {i}: {:.4} dBm", watts_to_dbm(*obj));
    }
    println!("layout {:?}", &out.layout[..]);
    Ok(())
}
