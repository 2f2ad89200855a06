//! Scenario files.
//!
//! Scenarios are TOML with unit-suffixed keys. Every physical quantity can be
//! given in its customary unit (`power_budget_dbm`, `sinr_floor_db`,
//! `energy_floor_uw`, ...) or in SI (`power_budget_w`, `sinr_floor_linear`,
//! `energy_floor_w`, ...), but not both. Receivers are either listed
//! explicitly as `[x, y]` ground coordinates or sampled uniformly over the
//! service region from a seed:
//!
//! ```toml
//! num_antennas = 4
//! carrier_frequency_ghz = 28.0
//! effective_refractive_index = 1.4
//! waveguide_length_m = 10.0
//! waveguide_height_m = 3.0
//! region_x_m = 10.0
//! region_y_m = 6.0
//! min_spacing_wavelengths = 0.5
//! power_budget_dbm = 40.0
//! noise_power_dbm = -90.0
//! sinr_floor_db = 15.0
//! energy_floor_uw = 0.1
//!
//! [receivers.sample]
//! num_irs = 2
//! num_ers = 2
//! seed = 1
//! ```

use std::path::Path;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::channel::{PhysicalConstants, Point3};
use crate::error::{Error, Result};
use crate::position::UnitDraw;
use crate::system::{db_to_linear, dbm_to_watts, linear_to_db, watts_to_dbm, Scenario};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum OneOrMany {
    One(f64),
    Many(Vec<f64>),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Sampler {
    pub num_irs: usize,
    pub num_ers: usize,
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ReceiversFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub irs: Option<Vec<[f64; 2]>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ers: Option<Vec<[f64; 2]>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sample: Option<Sampler>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioFile {
    pub num_antennas: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub carrier_frequency_ghz: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub carrier_frequency_hz: Option<f64>,
    #[serde(default = "default_speed")]
    pub propagation_speed_m_per_s: f64,
    pub effective_refractive_index: f64,
    pub waveguide_length_m: f64,
    pub waveguide_height_m: f64,
    pub region_x_m: f64,
    pub region_y_m: f64,
    #[serde(default)]
    pub feed_x_m: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub min_spacing_m: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub min_spacing_wavelengths: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub power_budget_dbm: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub power_budget_w: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub noise_power_dbm: Option<OneOrMany>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub noise_power_w: Option<OneOrMany>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sinr_floor_db: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sinr_floor_linear: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub energy_floor_uw: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub energy_floor_w: Option<f64>,
    pub receivers: ReceiversFile,
}

fn default_speed() -> f64 {
    3e8
}

fn invalid(field: &str, reason: impl Into<String>) -> Error {
    Error::scenario(field, reason)
}

/// Resolves a quantity given in exactly one of two units.
fn pick(
    primary: (&str, Option<f64>),
    alternate: (&str, Option<f64>),
    convert: impl Fn(f64) -> f64,
) -> Result<f64> {
    match (primary.1, alternate.1) {
        (Some(v), None) => {
            if !v.is_finite() {
                return Err(invalid(primary.0, "must be finite"));
            }
            Ok(convert(v))
        }
        (None, Some(v)) => {
            if !v.is_finite() {
                return Err(invalid(alternate.0, "must be finite"));
            }
            Ok(v)
        }
        (Some(_), Some(_)) => Err(invalid(
            primary.0,
            format!("conflicts with `{}`; give only one", alternate.0),
        )),
        (None, None) => Err(invalid(
            primary.0,
            format!("missing (or give `{}`)", alternate.0),
        )),
    }
}

/// Uniform receiver drop over `[0, D_x] × [0, D_y]`: IRs first, each as an
/// `x` then `y` draw, then ERs.
pub fn sample_receivers(
    region_x: f64,
    region_y: f64,
    num_irs: usize,
    num_ers: usize,
    seed: u64,
) -> (Vec<Point3>, Vec<Point3>) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut draw = |n: usize| -> Vec<Point3> {
        (0..n)
            .map(|_| {
                let x = rng.draw() * region_x;
                let y = rng.draw() * region_y;
                Point3::ground(x, y)
            })
            .collect()
    };
    let irs = draw(num_irs);
    let ers = draw(num_ers);
    (irs, ers)
}

impl ScenarioFile {
    pub fn to_scenario(&self) -> Result<Scenario> {
        let carrier_frequency = pick(
            ("carrier_frequency_ghz", self.carrier_frequency_ghz),
            ("carrier_frequency_hz", self.carrier_frequency_hz),
            |ghz| ghz * 1e9,
        )?;
        let consts = PhysicalConstants {
            carrier_frequency,
            propagation_speed: self.propagation_speed_m_per_s,
            effective_refractive_index: self.effective_refractive_index,
        };
        consts.validate()?;
        let wavelength = consts.wavelength();
        let min_spacing = pick(
            ("min_spacing_wavelengths", self.min_spacing_wavelengths),
            ("min_spacing_m", self.min_spacing_m),
            |w| w * wavelength,
        )?;
        let power_budget = pick(
            ("power_budget_dbm", self.power_budget_dbm),
            ("power_budget_w", self.power_budget_w),
            dbm_to_watts,
        )?;
        let sinr_floor = pick(
            ("sinr_floor_db", self.sinr_floor_db),
            ("sinr_floor_linear", self.sinr_floor_linear),
            db_to_linear,
        )?;
        let energy_floor = pick(
            ("energy_floor_uw", self.energy_floor_uw),
            ("energy_floor_w", self.energy_floor_w),
            |uw| uw * 1e-6,
        )?;

        let (irs, ers) = match (
            &self.receivers.irs,
            &self.receivers.ers,
            &self.receivers.sample,
        ) {
            (Some(irs), Some(ers), None) => {
                let to_points =
                    |v: &Vec<[f64; 2]>| v.iter().map(|p| Point3::ground(p[0], p[1])).collect();
                (to_points(irs), to_points(ers))
            }
            (None, None, Some(s)) => sample_receivers(
                self.region_x_m,
                self.region_y_m,
                s.num_irs,
                s.num_ers,
                s.seed,
            ),
            (_, _, Some(_)) => {
                return Err(invalid(
                    "receivers",
                    "give either `irs` and `ers` or `sample`, not both",
                ));
            }
            _ => {
                return Err(invalid(
                    "receivers",
                    "need both `irs` and `ers`, or a `sample` table",
                ))
            }
        };

        let n_ir = irs.len();
        let noise_power = match (&self.noise_power_dbm, &self.noise_power_w) {
            (Some(_), Some(_)) => {
                return Err(invalid(
                    "noise_power_dbm",
                    "conflicts with `noise_power_w`; give only one",
                ));
            }
            (None, None) => {
                return Err(invalid(
                    "noise_power_dbm",
                    "missing (or give `noise_power_w`)",
                ))
            }
            (Some(v), None) => expand(v, n_ir, "noise_power_dbm")?
                .into_iter()
                .map(dbm_to_watts)
                .collect(),
            (None, Some(v)) => expand(v, n_ir, "noise_power_w")?,
        };

        let scenario = Scenario {
            consts,
            waveguide_length: self.waveguide_length_m,
            waveguide_height: self.waveguide_height_m,
            region_x: self.region_x_m,
            region_y: self.region_y_m,
            min_spacing,
            num_antennas: self.num_antennas,
            feed_x: self.feed_x_m,
            irs,
            ers,
            power_budget,
            noise_power,
            sinr_floor,
            energy_floor,
        };
        scenario.validate()?;
        Ok(scenario)
    }

    /// Inverse of [`ScenarioFile::to_scenario`] with explicit receivers.
    /// Each quantity is written in its customary unit when that converts
    /// back bit-exactly, otherwise in SI, so parsing the result reproduces
    /// `scenario` exactly.
    pub fn from_scenario(scenario: &Scenario) -> Self {
        fn choose(
            value: f64,
            to_unit: impl Fn(f64) -> f64,
            from_unit: impl Fn(f64) -> f64,
        ) -> (Option<f64>, Option<f64>) {
            let u = to_unit(value);
            if u.is_finite() && from_unit(u) == value {
                (Some(u), None)
            } else {
                (None, Some(value))
            }
        }
        let c = &scenario.consts;
        let (ghz, hz) = choose(c.carrier_frequency, |hz| hz / 1e9, |ghz| ghz * 1e9);
        let wl = c.wavelength();
        let (spacing_wl, spacing_m) = choose(scenario.min_spacing, |m| m / wl, |w| w * wl);
        let (pb_dbm, pb_w) = choose(scenario.power_budget, watts_to_dbm, dbm_to_watts);
        let (sinr_db, sinr_lin) = choose(scenario.sinr_floor, linear_to_db, db_to_linear);
        let (e_uw, e_w) = choose(scenario.energy_floor, |w| w * 1e6, |uw| uw * 1e-6);

        let noise_dbm: Option<Vec<f64>> = scenario
            .noise_power
            .iter()
            .map(|&w| {
                let d = watts_to_dbm(w);
                (d.is_finite() && dbm_to_watts(d) == w).then_some(d)
            })
            .collect();
        let collapse = |v: Vec<f64>| {
            if v.len() > 1 && v.iter().all(|x| *x == v[0]) {
                OneOrMany::One(v[0])
            } else {
                OneOrMany::Many(v)
            }
        };
        let (noise_power_dbm, noise_power_w) = match noise_dbm {
            Some(d) => (Some(collapse(d)), None),
            None => (None, Some(collapse(scenario.noise_power.clone()))),
        };
        let pts = |v: &[Point3]| v.iter().map(|p| [p.x, p.y]).collect();

        Self {
            num_antennas: scenario.num_antennas,
            carrier_frequency_ghz: ghz,
            carrier_frequency_hz: hz,
            propagation_speed_m_per_s: c.propagation_speed,
            effective_refractive_index: c.effective_refractive_index,
            waveguide_length_m: scenario.waveguide_length,
            waveguide_height_m: scenario.waveguide_height,
            region_x_m: scenario.region_x,
            region_y_m: scenario.region_y,
            feed_x_m: scenario.feed_x,
            min_spacing_m: spacing_m,
            min_spacing_wavelengths: spacing_wl,
            power_budget_dbm: pb_dbm,
            power_budget_w: pb_w,
            noise_power_dbm,
            noise_power_w,
            sinr_floor_db: sinr_db,
            sinr_floor_linear: sinr_lin,
            energy_floor_uw: e_uw,
            energy_floor_w: e_w,
            receivers: ReceiversFile {
                irs: Some(pts(&scenario.irs)),
                ers: Some(pts(&scenario.ers)),
                sample: None,
            },
        }
    }
}

fn expand(v: &OneOrMany, n: usize, field: &str) -> Result<Vec<f64>> {
    match v {
        OneOrMany::One(x) => Ok(vec![*x; n]),
        OneOrMany::Many(xs) if xs.len() == n => Ok(xs.clone()),
        OneOrMany::Many(xs) => Err(invalid(
            field,
            format!("expected 1 or {n} values, got {}", xs.len()),
        )),
    }
}

/// Parses scenario TOML. Syntax and schema errors carry the dotted path of
/// the offending key.
pub fn parse_scenario_str(text: &str) -> Result<Scenario> {
    parse_scenario_file(text)?.to_scenario()
}

pub fn parse_scenario_file(text: &str) -> Result<ScenarioFile> {
    let de = toml::Deserializer::parse(text).map_err(|e| Error::Parse {
        path: "<toml>".into(),
        message: e.to_string(),
    })?;
    serde_path_to_error::deserialize(de).map_err(|e| {
        let path = e.path().to_string();
        Error::Parse {
            path: if path == "." { "<root>".into() } else { path },
            message: e.into_inner().to_string().trim().to_string(),
        }
    })
}

pub fn parse_scenario(path: &Path) -> Result<Scenario> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_scenario_str(&text)
}

pub fn scenario_to_toml(scenario: &Scenario) -> String {
    toml::to_string(&ScenarioFile::from_scenario(scenario)).expect("scenario file serializes")
}

/// The bundled reference scenario.
pub const DEFAULT_SCENARIO: &str = include_str!("../scenarios/default.toml");
