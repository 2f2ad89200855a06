//! Near-field channel between pinching antennas and ground receivers.
//!
//! Every antenna radiates the same guided signal, so the gain from antenna
//! `m` to a receiver is the free-space spherical-wave term times the phase
//! the signal accumulated travelling inside the waveguide from the feed
//! point to the antenna:
//!
//! ```text
//! h = η / r · exp(-j 2π r / λ) · exp(-j 2π |x_feed - x_m| / λ_g)
//! ```
//!
//! with `η = c / (4π f_c)`, `λ = c / f_c` and `λ_g = λ / n_neff`. The same
//! expression serves energy and information receivers.

use std::f64::consts::PI;
use std::iter::Sum;
use std::ops::Add;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Distances below this are rejected instead of clamped.
pub const MIN_DISTANCE: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Point3 {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl Point3 {
    pub const fn new(x: f64, y: f64, z: f64) -> Self {
        Self { x, y, z }
    }

    /// A receiver on the ground plane.
    pub const fn ground(x: f64, y: f64) -> Self {
        Self { x, y, z: 0.0 }
    }

    pub fn is_finite(&self) -> bool {
        self.x.is_finite() && self.y.is_finite() && self.z.is_finite()
    }
}

pub fn distance(a: Point3, b: Point3) -> f64 {
    let (dx, dy, dz) = (a.x - b.x, a.y - b.y, a.z - b.z);
    (dx * dx + dy * dy + dz * dz).sqrt()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhysicalConstants {
    /// Carrier frequency in Hz.
    pub carrier_frequency: f64,
    /// Free-space propagation speed in m/s.
    pub propagation_speed: f64,
    pub effective_refractive_index: f64,
}

impl Default for PhysicalConstants {
    fn default() -> Self {
        Self {
            carrier_frequency: 28e9,
            propagation_speed: 3e8,
            effective_refractive_index: 1.4,
        }
    }
}

impl PhysicalConstants {
    pub fn wavelength(&self) -> f64 {
        self.propagation_speed / self.carrier_frequency
    }

    pub fn guided_wavelength(&self) -> f64 {
        self.wavelength() / self.effective_refractive_index
    }

    /// `η = c / (4π f_c)`.
    pub fn eta(&self) -> f64 {
        self.propagation_speed / (4.0 * PI * self.carrier_frequency)
    }

    pub fn validate(&self) -> Result<()> {
        let c = self;
        if !(c.carrier_frequency.is_finite() && c.carrier_frequency > 0.0) {
            return Err(Error::scenario(
                "consts.carrier_frequency",
                "must be finite and > 0",
            ));
        }
        if !(c.propagation_speed.is_finite() && c.propagation_speed > 0.0) {
            return Err(Error::scenario(
                "consts.propagation_speed",
                "must be finite and > 0",
            ));
        }
        if !(c.effective_refractive_index.is_finite() && c.effective_refractive_index >= 1.0) {
            return Err(Error::scenario(
                "consts.effective_refractive_index",
                "must be finite and >= 1",
            ));
        }
        Ok(())
    }
}

/// Complex amplitude of one antenna-to-receiver link (or a coherent sum of
/// several).
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct ChannelGain(pub Complex64);

impl ChannelGain {
    pub const ZERO: ChannelGain = ChannelGain(Complex64::new(0.0, 0.0));

    pub fn re(&self) -> f64 {
        self.0.re
    }

    pub fn im(&self) -> f64 {
        self.0.im
    }

    pub fn magnitude(&self) -> f64 {
        self.0.norm()
    }

    /// `|h|²`, the power gain.
    pub fn power(&self) -> f64 {
        self.0.norm_sqr()
    }
}

impl Add for ChannelGain {
    type Output = ChannelGain;

    fn add(self, rhs: ChannelGain) -> ChannelGain {
        ChannelGain(self.0 + rhs.0)
    }
}

impl Sum for ChannelGain {
    fn sum<I: Iterator<Item = ChannelGain>>(iter: I) -> Self {
        iter.fold(ChannelGain::ZERO, Add::add)
    }
}

/// Fractional part of a phase expressed in cycles. Reducing each term in
/// cycles before multiplying by 2π keeps the argument of sin/cos small even
/// when `r / λ` is in the thousands.
fn frac_cycles(cycles: f64) -> f64 {
    cycles - cycles.floor()
}

/// Precomputed per-waveguide quantities for hot loops.
#[derive(Debug, Clone, Copy)]
pub struct Waveguide {
    eta: f64,
    inv_wavelength: f64,
    inv_guided_wavelength: f64,
    height: f64,
    feed_x: f64,
}

impl Waveguide {
    pub fn new(consts: &PhysicalConstants, height: f64, feed_x: f64) -> Self {
        Self {
            eta: consts.eta(),
            inv_wavelength: consts.carrier_frequency / consts.propagation_speed,
            inv_guided_wavelength: consts.effective_refractive_index * consts.carrier_frequency
                / consts.propagation_speed,
            height,
            feed_x,
        }
    }

    pub fn antenna_point(&self, pa_x: f64) -> Point3 {
        Point3::new(pa_x, 0.0, self.height)
    }

    /// `exp(-j 2π |x_feed - x| / λ_g)`; exactly 1 at the feed point.
    pub fn waveguide_phase(&self, pa_x: f64) -> Complex64 {
        let cycles = frac_cycles((self.feed_x - pa_x).abs() * self.inv_guided_wavelength);
        Complex64::from_polar(1.0, -2.0 * PI * cycles)
    }

    pub fn gain(&self, pa_x: f64, receiver: Point3) -> Result<ChannelGain> {
        let r = distance(self.antenna_point(pa_x), receiver);
        if !(r >= MIN_DISTANCE) {
            return Err(Error::DegenerateGeometry { distance: r });
        }
        let free = frac_cycles(r * self.inv_wavelength);
        let guided = frac_cycles((self.feed_x - pa_x).abs() * self.inv_guided_wavelength);
        Ok(ChannelGain(Complex64::from_polar(
            self.eta / r,
            -2.0 * PI * (free + guided),
        )))
    }

    pub fn aggregate(&self, layout: &[f64], receiver: Point3) -> Result<ChannelGain> {
        if layout.is_empty() {
            return Err(Error::InvalidLayout("layout has no antennas".into()));
        }
        layout.iter().map(|&x| self.gain(x, receiver)).sum()
    }
}

/// Gain from a pinching antenna at `pa_x` on a waveguide at height
/// `waveguide_height` fed at `feed_x`.
pub fn channel_gain(
    pa_x: f64,
    feed_x: f64,
    receiver: Point3,
    waveguide_height: f64,
    consts: &PhysicalConstants,
) -> Result<ChannelGain> {
    Waveguide::new(consts, waveguide_height, feed_x).gain(pa_x, receiver)
}

/// Coherent sum of the gains of every antenna in `layout`.
pub fn aggregate_gain(
    layout: &[f64],
    feed_x: f64,
    receiver: Point3,
    waveguide_height: f64,
    consts: &PhysicalConstants,
) -> Result<ChannelGain> {
    Waveguide::new(consts, waveguide_height, feed_x).aggregate(layout, receiver)
}
