//! SWIPT system semantics: harvested power, SIC decoding order, SINR and the
//! full constraint check of the joint sum-power problem.
//!
//! Powers are per-antenna: with the equal-power model each of the `M`
//! antennas radiates `p_i` for information receiver `i`, so the budget reads
//! `M · Σ p_i ≤ P_B`.

use std::ops::Deref;

use serde::{Deserialize, Serialize};

use crate::channel::{PhysicalConstants, Point3, Waveguide};
use crate::error::{Error, Result};

/// Relative slack on the SINR, energy and budget checks.
pub const REL_TOL: f64 = 1e-9;
/// Absolute slack in meters on the spacing and bounds checks.
pub const ABS_TOL_M: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Scenario {
    pub consts: PhysicalConstants,
    /// `D_w`, meters.
    pub waveguide_length: f64,
    /// `d`, meters.
    pub waveguide_height: f64,
    pub region_x: f64,
    pub region_y: f64,
    /// `Δ`, meters.
    pub min_spacing: f64,
    pub num_antennas: usize,
    pub feed_x: f64,
    pub irs: Vec<Point3>,
    pub ers: Vec<Point3>,
    /// `P_B`, watts.
    pub power_budget: f64,
    /// `σ²_i` per information receiver, watts.
    pub noise_power: Vec<f64>,
    /// `γ_min`, linear.
    pub sinr_floor: f64,
    /// `E_min`, watts.
    pub energy_floor: f64,
}

pub fn dbm_to_watts(dbm: f64) -> f64 {
    10f64.powf((dbm - 30.0) / 10.0)
}

pub fn watts_to_dbm(watts: f64) -> f64 {
    10.0 * watts.log10() + 30.0
}

pub fn db_to_linear(db: f64) -> f64 {
    10f64.powf(db / 10.0)
}

pub fn linear_to_db(lin: f64) -> f64 {
    10.0 * lin.log10()
}

impl Scenario {
    /// The reference parameter set (M = 4, 28 GHz, `Δ = λ/2`, 10 m
    /// waveguide at 3 m height, 10 × 6 m region, `P_B` = 40 dBm, σ² = −90
    /// dBm, `γ_min` = 15 dB, `E_min` = 0.1 µW) with the given receivers.
    pub fn reference(irs: Vec<Point3>, ers: Vec<Point3>) -> Self {
        let consts = PhysicalConstants::default();
        let n_ir = irs.len();
        Self {
            consts,
            waveguide_length: 10.0,
            waveguide_height: 3.0,
            region_x: 10.0,
            region_y: 6.0,
            min_spacing: consts.wavelength() / 2.0,
            num_antennas: 4,
            feed_x: 0.0,
            irs,
            ers,
            power_budget: dbm_to_watts(40.0),
            noise_power: vec![dbm_to_watts(-90.0); n_ir],
            sinr_floor: db_to_linear(15.0),
            energy_floor: 0.1e-6,
        }
    }

    pub fn num_irs(&self) -> usize {
        self.irs.len()
    }

    pub fn num_ers(&self) -> usize {
        self.ers.len()
    }

    pub fn waveguide(&self) -> Waveguide {
        Waveguide::new(&self.consts, self.waveguide_height, self.feed_x)
    }

    /// Largest per-antenna total power, `P_B / M`.
    pub fn per_antenna_budget(&self) -> f64 {
        self.power_budget / self.num_antennas as f64
    }

    pub fn validate(&self) -> Result<()> {
        self.consts.validate()?;
        let pos_finite = |v: f64| v.is_finite() && v > 0.0;
        if !pos_finite(self.waveguide_length) {
            return Err(Error::scenario(
                "waveguide_length",
                "must be finite and > 0",
            ));
        }
        if !pos_finite(self.waveguide_height) {
            return Err(Error::scenario(
                "waveguide_height",
                "must be finite and > 0",
            ));
        }
        if !pos_finite(self.region_x) || !pos_finite(self.region_y) {
            return Err(Error::scenario(
                "region",
                "side lengths must be finite and > 0",
            ));
        }
        if self.num_antennas < 1 {
            return Err(Error::scenario("num_antennas", "must be at least 1"));
        }
        if !pos_finite(self.min_spacing) {
            return Err(Error::scenario("min_spacing", "must be finite and > 0"));
        }
        if self.num_antennas as f64 * self.min_spacing > self.waveguide_length {
            return Err(Error::scenario(
                "min_spacing",
                format!(
                    "{} antennas at spacing {} m do not fit on a {} m waveguide",
                    self.num_antennas, self.min_spacing, self.waveguide_length
                ),
            ));
        }
        if !(self.feed_x.is_finite() && (0.0..=self.waveguide_length).contains(&self.feed_x)) {
            return Err(Error::scenario("feed_x", "must lie on the waveguide"));
        }
        if self.irs.is_empty() {
            return Err(Error::scenario(
                "irs",
                "at least one information receiver is required",
            ));
        }
        if self.ers.is_empty() {
            return Err(Error::scenario(
                "ers",
                "at least one energy receiver is required",
            ));
        }
        for (kind, list) in [("irs", &self.irs), ("ers", &self.ers)] {
            for (i, p) in list.iter().enumerate() {
                let inside = p.is_finite()
                    && (0.0..=self.region_x).contains(&p.x)
                    && (0.0..=self.region_y).contains(&p.y)
                    && p.z == 0.0;
                if !inside {
                    return Err(Error::scenario(
                        format!("{kind}[{i}]"),
                        format!("({}, {}, {}) is outside the service region", p.x, p.y, p.z),
                    ));
                }
            }
        }
        if !pos_finite(self.power_budget) {
            return Err(Error::scenario("power_budget", "must be finite and > 0"));
        }
        if self.noise_power.len() != self.irs.len() {
            return Err(Error::scenario(
                "noise_power",
                format!(
                    "expected {} entries, got {}",
                    self.irs.len(),
                    self.noise_power.len()
                ),
            ));
        }
        if let Some(i) = self
            .noise_power
            .iter()
            .position(|s| !(s.is_finite() && *s >= 0.0))
        {
            return Err(Error::scenario(
                format!("noise_power[{i}]"),
                "must be finite and >= 0",
            ));
        }
        if !pos_finite(self.sinr_floor) {
            return Err(Error::scenario("sinr_floor", "must be finite and > 0"));
        }
        if !(self.energy_floor.is_finite() && self.energy_floor >= 0.0) {
            return Err(Error::scenario("energy_floor", "must be finite and >= 0"));
        }
        Ok(())
    }

    /// Antennas evenly spread over the whole waveguide, endpoints included.
    pub fn uniform_layout(&self) -> PaLayout {
        let m = self.num_antennas;
        if m == 1 {
            return PaLayout::new(vec![self.waveguide_length / 2.0]);
        }
        let step = self.waveguide_length / (m - 1) as f64;
        PaLayout::new((0..m).map(|k| k as f64 * step).collect())
    }

    /// Antennas packed at spacing `Δ` starting at the feed point.
    pub fn feed_cluster_layout(&self) -> PaLayout {
        PaLayout::new(
            (0..self.num_antennas)
                .map(|k| self.feed_x + k as f64 * self.min_spacing)
                .collect(),
        )
    }

    /// `|Σ_m h|²` for every energy receiver, then every information receiver.
    pub fn channel_powers(&self, layout: &PaLayout) -> Result<ChannelPowers> {
        let wg = self.waveguide();
        let er = self
            .ers
            .iter()
            .map(|&p| wg.aggregate(layout, p).map(|h| h.power()))
            .collect::<Result<_>>()?;
        let ir = self
            .irs
            .iter()
            .map(|&p| wg.aggregate(layout, p).map(|h| h.power()))
            .collect::<Result<_>>()?;
        Ok(ChannelPowers { er, ir })
    }
}

/// Pinching-antenna x-coordinates on the waveguide.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct PaLayout(Vec<f64>);

impl PaLayout {
    pub fn new(xs: Vec<f64>) -> Self {
        Self(xs)
    }

    pub fn into_inner(self) -> Vec<f64> {
        self.0
    }

    pub fn as_mut_slice(&mut self) -> &mut [f64] {
        &mut self.0
    }

    /// Smallest pairwise distance, `∞` for a single antenna.
    pub fn min_gap(&self) -> f64 {
        let mut xs = self.0.clone();
        xs.sort_by(f64::total_cmp);
        xs.windows(2)
            .map(|w| w[1] - w[0])
            .fold(f64::INFINITY, f64::min)
    }

    pub fn spacing_ok(&self, min_spacing: f64) -> bool {
        self.min_gap() >= min_spacing - ABS_TOL_M
    }

    pub fn bounds_ok(&self, length: f64) -> bool {
        self.0
            .iter()
            .all(|&x| x.is_finite() && x >= -ABS_TOL_M && x <= length + ABS_TOL_M)
    }

    /// Checks the spacing and bounds constraints and the antenna count.
    pub fn check(&self, scenario: &Scenario) -> Result<()> {
        if self.len() != scenario.num_antennas {
            return Err(Error::InvalidLayout(format!(
                "expected {} antennas, got {}",
                scenario.num_antennas,
                self.len()
            )));
        }
        if !self.bounds_ok(scenario.waveguide_length) {
            return Err(Error::InvalidLayout(format!(
                "positions {:?} leave [0, {}]",
                self.0, scenario.waveguide_length
            )));
        }
        if !self.spacing_ok(scenario.min_spacing) {
            return Err(Error::InvalidLayout(format!(
                "minimum gap {} m is below the required {} m",
                self.min_gap(),
                scenario.min_spacing
            )));
        }
        Ok(())
    }
}

impl Deref for PaLayout {
    type Target = [f64];

    fn deref(&self) -> &[f64] {
        &self.0
    }
}

/// Per-antenna transmit power for each information receiver, watts.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct PowerAllocation(Vec<f64>);

impl PowerAllocation {
    pub fn new(p: Vec<f64>) -> Self {
        Self(p)
    }

    /// Equal split of the whole budget, `P_B / (M K_I)` each.
    pub fn equal_split(scenario: &Scenario) -> Self {
        let k = scenario.num_irs();
        Self(vec![scenario.per_antenna_budget() / k as f64; k])
    }

    pub fn total(&self) -> f64 {
        self.0.iter().sum()
    }

    pub fn scaled(&self, alpha: f64) -> Self {
        Self(self.0.iter().map(|p| p * alpha).collect())
    }

    pub fn into_inner(self) -> Vec<f64> {
        self.0
    }
}

impl Deref for PowerAllocation {
    type Target = [f64];

    fn deref(&self) -> &[f64] {
        &self.0
    }
}

/// SIC decoding order: IR indices, weakest aggregate channel first.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct DecodingOrder(Vec<usize>);

impl DecodingOrder {
    /// Sorts by gain ascending, lower index first on ties.
    pub fn from_gains(ir_gains: &[f64]) -> Self {
        let mut idx: Vec<usize> = (0..ir_gains.len()).collect();
        idx.sort_by(|&a, &b| ir_gains[a].total_cmp(&ir_gains[b]).then(a.cmp(&b)));
        Self(idx)
    }

    pub fn new(order: Vec<usize>) -> Self {
        Self(order)
    }

    /// True when `ir_gains` are non-decreasing along this order (relative
    /// slack [`REL_TOL`]).
    pub fn is_respected_by(&self, ir_gains: &[f64]) -> bool {
        self.0
            .windows(2)
            .all(|w| ir_gains[w[0]] <= ir_gains[w[1]] * (1.0 + REL_TOL))
    }
}

impl Deref for DecodingOrder {
    type Target = [usize];

    fn deref(&self) -> &[usize] {
        &self.0
    }
}

/// Aggregate channel power gains `|Σ_m h|²` for one layout.
#[derive(Debug, Clone, PartialEq)]
pub struct ChannelPowers {
    pub er: Vec<f64>,
    pub ir: Vec<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConstraintFlags {
    pub sinr: bool,
    pub energy: bool,
    pub budget: bool,
    pub spacing: bool,
    pub bounds: bool,
    pub order: bool,
}

impl ConstraintFlags {
    pub fn all(&self) -> bool {
        self.sinr && self.energy && self.budget && self.spacing && self.bounds && self.order
    }
}

/// SINRs, harvested powers and the QoS part of the constraint check at a
/// fixed allocation and decoding order.
#[derive(Debug, Clone, PartialEq)]
pub struct QosState {
    /// Indexed by IR.
    pub sinr: Vec<f64>,
    /// Indexed by ER.
    pub harvested: Vec<f64>,
    pub objective: f64,
    pub sinr_ok: bool,
    pub energy_ok: bool,
    pub order_ok: bool,
    /// Sum of relative shortfalls over the SINR, energy and order
    /// constraints; zero iff all three hold exactly.
    pub violation: f64,
}

impl QosState {
    pub fn feasible(&self) -> bool {
        self.sinr_ok && self.energy_ok && self.order_ok
    }
}

/// SINR of the receiver at position `pos` of `order`: only receivers decoded
/// later interfere.
pub(crate) fn sinr_in_order(
    p: &[f64],
    order: &[usize],
    ir_gains: &[f64],
    noise: &[f64],
    pos: usize,
) -> f64 {
    let u = order[pos];
    let g = ir_gains[u];
    let interference: f64 = order[pos + 1..].iter().map(|&l| p[l]).sum();
    p[u] * g / (g * interference + noise[u])
}

pub(crate) fn qos_state(
    scenario: &Scenario,
    alloc: &[f64],
    order: &[usize],
    powers: &ChannelPowers,
) -> QosState {
    let gamma = scenario.sinr_floor;
    let e_min = scenario.energy_floor;
    let mut sinr = vec![0.0; alloc.len()];
    let mut violation = 0.0;
    let mut sinr_ok = true;
    for pos in 0..order.len() {
        let s = sinr_in_order(alloc, order, &powers.ir, &scenario.noise_power, pos);
        sinr[order[pos]] = s;
        if !(s >= gamma * (1.0 - REL_TOL)) {
            sinr_ok = false;
        }
        violation += ((gamma - s) / gamma).max(0.0);
    }

    let total = alloc.iter().sum::<f64>();
    let harvested: Vec<f64> = powers.er.iter().map(|g| total * g).collect();
    let objective = harvested.iter().sum();
    let mut energy_ok = true;
    for &e in &harvested {
        if !(e >= e_min * (1.0 - REL_TOL)) {
            energy_ok = false;
        }
        if e_min > 0.0 {
            violation += ((e_min - e) / e_min).max(0.0);
        }
    }

    let mut order_ok = true;
    for w in order.windows(2) {
        let (a, b) = (powers.ir[w[0]], powers.ir[w[1]]);
        if !(a <= b * (1.0 + REL_TOL)) {
            order_ok = false;
        }
        if b > 0.0 {
            violation += ((a - b) / b).max(0.0);
        }
    }

    QosState {
        sinr,
        harvested,
        objective,
        sinr_ok,
        energy_ok,
        order_ok,
        violation,
    }
}

/// Full evaluation of one (layout, allocation) pair.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SystemState {
    pub order: DecodingOrder,
    /// `|Σ_m h_{I,i,m}|²` per IR.
    pub ir_gains: Vec<f64>,
    /// `|Σ_m h_{E,j,m}|²` per ER.
    pub er_gains: Vec<f64>,
    pub sinr: Vec<f64>,
    pub harvested: Vec<f64>,
    /// Σ_j E_j, watts.
    pub objective: f64,
    pub flags: ConstraintFlags,
}

impl SystemState {
    pub fn feasible(&self) -> bool {
        self.flags.all()
    }
}

/// `E_j = (Σ_i p_i) · |Σ_m h_{E,j,m}|²`. Receiver noise does not count
/// toward harvested power.
pub fn harvested_power(
    scenario: &Scenario,
    layout: &PaLayout,
    alloc: &PowerAllocation,
    er_index: usize,
) -> Result<f64> {
    let er = *scenario
        .ers
        .get(er_index)
        .ok_or_else(|| Error::InvalidConfig(format!("no energy receiver {er_index}")))?;
    let g = scenario.waveguide().aggregate(layout, er)?.power();
    Ok(alloc.total() * g)
}

pub fn decoding_order(scenario: &Scenario, layout: &PaLayout) -> Result<DecodingOrder> {
    let powers = scenario.channel_powers(layout)?;
    Ok(DecodingOrder::from_gains(&powers.ir))
}

/// SINR of the IR at position `pos` of `order`;
/// `γ = p g / (g Σ_{later} p_l + σ²)`.
pub fn sinr(
    scenario: &Scenario,
    layout: &PaLayout,
    alloc: &PowerAllocation,
    order: &DecodingOrder,
    pos: usize,
) -> Result<f64> {
    if pos >= order.len() {
        return Err(Error::InvalidConfig(format!(
            "order position {pos} out of range"
        )));
    }
    let powers = scenario.channel_powers(layout)?;
    Ok(sinr_in_order(
        alloc,
        order,
        &powers.ir,
        &scenario.noise_power,
        pos,
    ))
}

/// Evaluates objective and every constraint using the decoding order the
/// layout itself induces.
pub fn evaluate(
    scenario: &Scenario,
    layout: &PaLayout,
    alloc: &PowerAllocation,
) -> Result<SystemState> {
    let powers = scenario.channel_powers(layout)?;
    let order = DecodingOrder::from_gains(&powers.ir);
    Ok(assemble(scenario, layout, alloc, order, powers))
}

/// Like [`evaluate`] but decodes in a caller-supplied order; the `order`
/// flag then reports whether the layout's gains respect it.
pub fn evaluate_with_order(
    scenario: &Scenario,
    layout: &PaLayout,
    alloc: &PowerAllocation,
    order: &DecodingOrder,
) -> Result<SystemState> {
    let powers = scenario.channel_powers(layout)?;
    Ok(assemble(scenario, layout, alloc, order.clone(), powers))
}

fn assemble(
    scenario: &Scenario,
    layout: &PaLayout,
    alloc: &PowerAllocation,
    order: DecodingOrder,
    powers: ChannelPowers,
) -> SystemState {
    let qos = qos_state(scenario, alloc, &order, &powers);
    let budget_used = scenario.num_antennas as f64 * alloc.total();
    let flags = ConstraintFlags {
        sinr: qos.sinr_ok,
        energy: qos.energy_ok,
        budget: alloc.iter().all(|&p| p >= 0.0)
            && budget_used <= scenario.power_budget * (1.0 + REL_TOL),
        spacing: layout.len() == scenario.num_antennas && layout.spacing_ok(scenario.min_spacing),
        bounds: layout.bounds_ok(scenario.waveguide_length),
        order: qos.order_ok,
    };
    SystemState {
        order,
        ir_gains: powers.ir,
        er_gains: powers.er,
        sinr: qos.sinr,
        harvested: qos.harvested,
        objective: qos.objective,
        flags,
    }
}
