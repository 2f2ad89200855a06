//! Mean harvested power versus the swept parameter, over random receiver
//! drops. Writes all rows as CSV when given a path.
//!
//! cargo run --release --example sweep_antennas -- [trials] [out.csv]

use pass_swipt::sweep::{export, summarize};
use pass_swipt::{
    parse_scenario_str, run_sweep, ExportFormat, SweepParam, SweepSpec, DEFAULT_SCENARIO,
};

fn main() -> pass_swipt::Result<()> {
    let mut args = std::env::args().skip(1);
    let trials = args.next().and_then(|a| a.parse().ok()).unwrap_or(20);
    let mut spec = SweepSpec::new(SweepParam::Antennas, vec![2.0, 4.0, 6.0, 8.0]);
    spec.trials = trials;
    let rows = run_sweep(&spec, &parse_scenario_str(DEFAULT_SCENARIO)?)?;
    print!("{}", summarize(&rows, &spec.algorithms));
    if let Some(path) = args.next() {
        export(&rows, ExportFormat::Csv, path.as_ref())?;
        println!("wrote {} rows to {path}", rows.len());
    }
    Ok(())
}
