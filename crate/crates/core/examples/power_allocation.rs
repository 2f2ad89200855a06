//! The power-allocation LP at a fixed layout: rows, optimum and which
//! constraints bind.
//!
//! cargo run --example power_allocation

use pass_swipt::system::watts_to_dbm;
use pass_swipt::{build_lp, evaluate, parse_scenario_str, solve_lp, DEFAULT_SCENARIO};

fn main() -> pass_swipt::Result<()> {
    let scenario = parse_scenario_str(DEFAULT_SCENARIO)?;
    let layout = scenario.uniform_layout();
    let lp = build_lp(&scenario, &layout)?;
    println!(
        "layout {:?}, decoding order {:?}",
        &layout[..],
        &lp.order[..]
    );
    println!("objective coefficients {:?}", lp.objective);
    for row in &lp.rows {
        println!(
            "  {:?}: {:?} {:?} {:e}",
            row.kind, row.coeffs, row.sense, row.rhs
        );
    }
    let sol = solve_lp(&lp)?;
    match &sol.allocation {
        Some(alloc) => {
            let state = evaluate(&scenario, &layout, alloc)?;
            println!("p = {:?} W", &alloc[..]);
            println!(
                "sum harvested power {:.4} dBm, SINRs {:?}",
                watts_to_dbm(state.objective),
                state.sinr
            );
            println!("binding rows {:?}", sol.binding);
        }
        None => println!("LP infeasible at this layout"),
    }
    Ok(())
}
