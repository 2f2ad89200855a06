//! Reading, printing and re-reading scenario files.
//!
//! cargo run --example scenario_file -- [scenario.toml]

use pass_swipt::{parse_scenario, parse_scenario_str, scenario_to_toml, DEFAULT_SCENARIO};

fn main() -> pass_swipt::Result<()> {
    let scenario = match std::env::args().nth(1) {
        Some(path) => parse_scenario(path.as_ref())?,
        None => parse_scenario_str(DEFAULT_SCENARIO)?,
    };
    println!(
        "M = {}, P_B = {} W, γ_min = {}, E_min = {} W, Δ = {} m",
        scenario.num_antennas,
        scenario.power_budget,
        scenario.sinr_floor,
        scenario.energy_floor,
        scenario.min_spacing
    );
    let text = scenario_to_toml(&scenario);
    println!("--- serialized with explicit receivers ---\n{text}");
    assert_eq!(parse_scenario_str(&text)?, scenario);
    println!("round trip reproduces the scenario exactly");

    let broken = DEFAULT_SCENARIO.replace("num_irs = 2", "num_irs = \"two\"");
    println!(
        "a malformed file reports: {}",
        parse_scenario_str(&broken).unwrap_err()
    );
    Ok(())
}
