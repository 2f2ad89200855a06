//! Per-antenna and aggregate channel gains for one layout.
//!
//! cargo run --example channel_gains

use pass_swipt::{aggregate_gain, channel_gain, distance, PhysicalConstants, Point3};

fn main() -> pass_swipt::Result<()> {
    let consts = PhysicalConstants::default();
    let (height, feed) = (3.0, 0.0);
    let receiver = Point3::ground(4.2, 2.7);
    let layout = [1.25, 3.5, 6.125, 8.75];

    println!(
        "λ = {:.4} mm, λ_g = {:.4} mm, η = {:.6e}",
        consts.wavelength() * 1e3,
        consts.guided_wavelength() * 1e3,
        consts.eta()
    );
    for &x in &layout {
        let h = channel_gain(x, feed, receiver, height, &consts)?;
        let r = distance(Point3::new(x, 0.0, height), receiver);
        println!(
            "antenna at {x:>6.3} m: r = {r:.4} m, |h| = {:.6e} (η/r = {:.6e}), arg h = {:+.4} rad",
            h.magnitude(),
            consts.eta() / r,
            h.0.arg()
        );
    }
    let agg = aggregate_gain(&layout, feed, receiver, height, &consts)?;
    let incoherent: f64 = layout
        .iter()
        .map(|&x| channel_gain(x, feed, receiver, height, &consts).map(|h| h.magnitude()))
        .sum::<pass_swipt::Result<f64>>()?;
    println!(
        "aggregate |Σh| = {:.6e}, coherent bound Σ|h| = {incoherent:.6e}",
        agg.magnitude()
    );
    Ok(())
}
