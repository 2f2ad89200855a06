mod common;

use pass_swipt::config::{parse_scenario_file, ScenarioFile};
use pass_swipt::system::{db_to_linear, dbm_to_watts};
use pass_swipt::{
    parse_scenario, parse_scenario_str, scenario_to_toml, Error, Point3, Scenario, DEFAULT_SCENARIO,
};
use proptest::prelude::*;

const EXPLICIT: &str = r#"
num_antennas = 2
carrier_frequency_hz = 2.8e10
effective_refractive_index = 1.4
waveguide_length_m = 10.0
waveguide_height_m = 3.0
region_x_m = 10.0
region_y_m = 6.0
min_spacing_m = 0.01
power_budget_w = 5.0
noise_power_w = [1e-12, 2e-12]
sinr_floor_linear = 10.0
energy_floor_w = 1e-8

[receivers]
irs = [[1.0, 2.0], [3.0, 4.0]]
ers = [[5.0, 1.5]]
"#;

#[test]
fn unit_conversions() {
    assert!((dbm_to_watts(40.0) - 10.0).abs() < 1e-12);
    assert!((db_to_linear(15.0) - 31.6228).abs() < 1e-4);
    assert!((dbm_to_watts(-90.0) - 1e-12).abs() < 1e-24);
}

#[test]
fn explicit_receivers_and_si_units() {
    let s = parse_scenario_str(EXPLICIT).unwrap();
    assert_eq!(
        s.irs,
        vec![Point3::ground(1.0, 2.0), Point3::ground(3.0, 4.0)]
    );
    assert_eq!(s.ers, vec![Point3::ground(5.0, 1.5)]);
    assert_eq!(s.noise_power, vec![1e-12, 2e-12]);
    assert_eq!(
        (s.power_budget, s.sinr_floor, s.energy_floor, s.min_spacing),
        (5.0, 10.0, 1e-8, 0.01)
    );
    assert_eq!(s.consts.carrier_frequency, 2.8e10);
    assert_eq!(s.consts.propagation_speed, 3e8);
}

#[test]
fn bundled_file_matches_builtin_reference() {
    let parsed = parse_scenario_str(DEFAULT_SCENARIO).unwrap();
    let reference = Scenario::reference(parsed.irs.clone(), parsed.ers.clone());
    assert_eq!(parsed, reference);
}

#[test]
fn reads_from_disk_and_reports_missing_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("s.toml");
    std::fs::write(&path, EXPLICIT).unwrap();
    assert_eq!(
        parse_scenario(&path).unwrap(),
        parse_scenario_str(EXPLICIT).unwrap()
    );
    let missing = dir.path().join("nope.toml");
    match parse_scenario(&missing).unwrap_err() {
        Error::Io { path, .. } => assert_eq!(path, missing),
        other => panic!("{other:?}"),
    }
}

fn parse_error(text: &str) -> (String, String) {
    match parse_scenario_str(text).unwrap_err() {
        Error::Parse { path, message } => (path, message),
        other => panic!("expected a parse error, got {other:?}"),
    }
}

#[test]
fn unknown_top_level_field() {
    let (path, message) = parse_error(&format!("colour = 1\n{EXPLICIT}"));
    assert!(
        path.contains("colour") || message.contains("colour"),
        "{path}: {message}"
    );
}

#[test]
fn wrong_type_names_nested_path() {
    let text = EXPLICIT.replace("ers = [[5.0, 1.5]]", "ers = [[5.0, \"x\"]]");
    let (path, _) = parse_error(&text);
    assert!(path.starts_with("receivers.ers"), "{path}");
}

#[test]
fn missing_field() {
    let text = EXPLICIT.replace("region_y_m = 6.0\n", "");
    let (_, message) = parse_error(&text);
    assert!(message.contains("region_y_m"), "{message}");
}

#[test]
fn unit_violations_name_the_field() {
    let cases = [
        (
            EXPLICIT.replace("power_budget_w = 5.0", "power_budget_w = -5.0"),
            "power_budget",
        ),
        (
            EXPLICIT.replace("noise_power_w = [1e-12, 2e-12]", "noise_power_w = [1e-12]"),
            "noise_power_w",
        ),
        (
            EXPLICIT.replace("irs = [[1.0, 2.0],", "irs = [[11.0, 2.0],"),
            "irs",
        ),
        (
            EXPLICIT.replace("min_spacing_m = 0.01", "min_spacing_m = 6.0"),
            "min_spacing",
        ),
        (
            EXPLICIT.replace(
                "sinr_floor_linear = 10.0",
                "sinr_floor_linear = 10.0\nsinr_floor_db = 10.0",
            ),
            "sinr_floor",
        ),
    ];
    for (text, field) in cases {
        let err = parse_scenario_str(&text).unwrap_err();
        assert!(matches!(err, Error::InvalidScenario { .. }), "{err:?}");
        assert!(err.to_string().contains(field), "{field}: {err}");
    }
}

#[test]
fn sampled_and_listed_receivers_conflict() {
    let text = format!("{EXPLICIT}\n[receivers.sample]\nnum_irs = 1\nnum_ers = 1\nseed = 0\n");
    assert!(parse_scenario_str(&text).is_err());
}

#[test]
fn serialized_default_round_trips() {
    let s = parse_scenario_str(DEFAULT_SCENARIO).unwrap();
    let text = scenario_to_toml(&s);
    assert_eq!(parse_scenario_str(&text).unwrap(), s);
    let file = parse_scenario_file(&text).unwrap();
    assert_eq!(file.power_budget_dbm, Some(40.0));
    assert_eq!(file.sinr_floor_db, Some(15.0));
}

proptest! {
    #[test]
    fn any_scenario_round_trips_exactly(
        seed in any::<u64>(),
        m in 1usize..9,
        pb_dbm in 20.0..50.0f64,
        noise_dbm in -110.0..-70.0f64,
        floor_db in -5.0..30.0f64,
        e_uw in 0.0..10.0f64,
        n_ir in 1usize..4,
        n_er in 1usize..4,
        feed in 0.0..10.0f64,
    ) {
        let (irs, ers) = pass_swipt::config::sample_receivers(10.0, 6.0, n_ir, n_er, seed);
        let s = Scenario {
            num_antennas: m,
            feed_x: feed,
            power_budget: dbm_to_watts(pb_dbm),
            noise_power: (0..n_ir).map(|i| dbm_to_watts(noise_dbm - i as f64)).collect(),
            sinr_floor: db_to_linear(floor_db),
            energy_floor: e_uw * 1e-6,
            ..Scenario::reference(irs, ers)
        };
        let text = scenario_to_toml(&s);
        prop_assert_eq!(parse_scenario_str(&text).unwrap(), s.clone());
        let file: ScenarioFile = toml::from_str(&text).unwrap();
        prop_assert_eq!(file, ScenarioFile::from_scenario(&s));
    }
}
