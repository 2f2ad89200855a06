//! Full alternating optimization with both position algorithms, followed
//! by an independent re-check of each result.
//!
//! cargo run --release --example alternating_solve -- [scenario.toml]

use pass_swipt::system::watts_to_dbm;
use pass_swipt::{
    alternate, parse_scenario, parse_scenario_str, revalidate, AlternationConfig, DEFAULT_SCENARIO,
};

fn main() -> pass_swipt::Result<()> {
    let scenario = match std::env::args().nth(1) {
        Some(path) => parse_scenario(path.as_ref())?,
        None => parse_scenario_str(DEFAULT_SCENARIO)?,
    };
    for cfg in [AlternationConfig::elementwise(), AlternationConfig::pso()] {
        let report = alternate(&scenario, &cfg)?;
        let Some(objective) = report.objective else {
            println!("{}: infeasible", report.algorithm);
            continue;
        };
        let dbm: Vec<String> = report
            .trajectory
            .iter()
            .map(|w| format!("{:.3}", watts_to_dbm(*w)))
            .collect();
        println!(
            "{} ({:?}, {:.3} s)",
            report.algorithm, report.status, report.wall_time_s
        );
        println!("  trajectory [{}] dBm", dbm.join(", "));
        println!("  layout {:?}", &report.layout.as_ref().unwrap()[..]);
        println!(
            "  powers {:?} W, SINRs {:?}",
            &report.allocation.as_ref().unwrap()[..],
            report.sinr
        );
        let state = revalidate(&scenario, &report)?;
        println!(
            "  re-evaluated objective {objective:.6e} W, flags {:?}",
            state.flags
        );
    }
    Ok(())
}
