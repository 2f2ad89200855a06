//! Optimized layouts against the two static-antenna systems on a few
//! random receiver drops.
//!
//! cargo run --release --example baselines

use pass_swipt::config::sample_receivers;
use pass_swipt::system::watts_to_dbm;
use pass_swipt::{alternate, baseline_fixed, baseline_mimo, AlternationConfig, Scenario};

fn show(objective: Option<f64>) -> String {
    objective.map_or("infeasible".to_string(), |w| {
        format!("{:.3} dBm", watts_to_dbm(w))
    })
}

fn main() -> pass_swipt::Result<()> {
    println!(
        "{:>4} {:>16} {:>16} {:>16}",
        "drop", "elementwise", "mimo", "fixed"
    );
    for seed in 0..8 {
        let (irs, ers) = sample_receivers(10.0, 6.0, 2, 2, seed);
        let scenario = Scenario::reference(irs, ers);
        let pass = alternate(&scenario, &AlternationConfig::elementwise())?;
        let mimo = baseline_mimo(&scenario)?;
        let fixed = baseline_fixed(&scenario)?;
        println!(
            "{seed:>4} {:>16} {:>16} {:>16}",
            show(pass.objective),
            show(mimo.objective),
            show(fixed.objective)
        );
    }
    Ok(())
}
