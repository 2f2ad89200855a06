use pass_swipt::sweep::{parse_csv, parse_json, replay_row, to_csv, to_json, trial_scenario};
use pass_swipt::{
    parse_scenario_str, run_sweep, Algorithm, Scenario, SolveStatus, SweepParam, SweepSpec,
    DEFAULT_SCENARIO,
};

fn base() -> Scenario {
    parse_scenario_str(DEFAULT_SCENARIO).unwrap()
}

fn small(param: SweepParam, values: Vec<f64>, trials: usize) -> SweepSpec {
    let mut spec = SweepSpec::new(param, values);
    spec.trials = trials;
    spec.seed_base = 17;
    spec.elementwise.grid_points = 256;
    spec.pso.max_iters = 40;
    spec
}

#[test]
fn one_row_per_algorithm_per_cell() {
    let spec = small(SweepParam::PowerBudget, vec![40.0], 1);
    let rows = run_sweep(&spec, &base()).unwrap();
    assert_eq!(rows.len(), spec.algorithms.len());
    let spec = small(SweepParam::Antennas, vec![2.0, 3.0], 3);
    let rows = run_sweep(&spec, &base()).unwrap();
    assert_eq!(rows.len(), 2 * 3 * spec.algorithms.len());
    assert!(rows
        .windows(2)
        .all(|w| (w[0].sweep_value, w[0].trial) <= (w[1].sweep_value, w[1].trial)));
}

#[test]
fn repeated_sweep_is_byte_identical() {
    let spec = small(SweepParam::GridPoints, vec![128.0, 256.0], 3);
    let a = run_sweep(&spec, &base()).unwrap();
    let b = run_sweep(&spec, &base()).unwrap();
    assert_eq!(to_csv(&a), to_csv(&b));
    assert_eq!(to_json(&a), to_json(&b));
    assert!(a.iter().all(|r| r.wall_time_s.is_none()));
}

#[test]
fn exports_round_trip() {
    let mut spec = small(SweepParam::PowerBudget, vec![30.0, 40.0], 2);
    spec.record_timing = true;
    let rows = run_sweep(&spec, &base()).unwrap();
    assert_eq!(parse_csv(&to_csv(&rows)).unwrap(), rows);
    assert_eq!(parse_json(&to_json(&rows)).unwrap(), rows);
}

#[test]
fn rows_replay_from_their_seeds() {
    let spec = small(SweepParam::PowerBudget, vec![36.0, 40.0], 2);
    let b = base();
    for row in run_sweep(&spec, &b).unwrap() {
        let again = replay_row(&spec, &b, &row).unwrap();
        assert_eq!(again.objective, row.objective_w, "{row:?}");
        assert_eq!(again.status, row.status);
    }
}

#[test]
fn drops_are_shared_across_sweep_values() {
    let spec = small(SweepParam::PowerBudget, vec![30.0, 40.0], 2);
    let b = base();
    let lo = trial_scenario(&spec, &b, 30.0, 1).unwrap();
    let hi = trial_scenario(&spec, &b, 40.0, 1).unwrap();
    assert_eq!((lo.irs.clone(), lo.ers.clone()), (hi.irs, hi.ers));
    assert!(hi.power_budget > lo.power_budget);
    let other = trial_scenario(&spec, &b, 30.0, 0).unwrap();
    assert_ne!(other.irs, lo.irs);
}

#[test]
fn infeasible_trials_are_recorded_not_fatal() {
    let spec = small(SweepParam::Antennas, vec![2.0], 2);
    let hopeless = Scenario {
        energy_floor: 1.0,
        ..base()
    };
    let rows = run_sweep(&spec, &hopeless).unwrap();
    assert_eq!(rows.len(), 2 * spec.algorithms.len());
    assert!(rows
        .iter()
        .all(|r| r.status == SolveStatus::Infeasible && r.objective_w.is_none()));
    let csv = to_csv(&rows);
    assert!(csv.lines().skip(1).all(|l| l.contains(",infeasible,,,")));
}

#[test]
fn grid_sweep_only_changes_elementwise() {
    let mut spec = small(SweepParam::GridPoints, vec![64.0, 512.0], 1);
    spec.algorithms = vec![Algorithm::Pso, Algorithm::Fixed];
    let rows = run_sweep(&spec, &base()).unwrap();
    let fixed: Vec<_> = rows
        .iter()
        .filter(|r| r.algorithm == Algorithm::Fixed)
        .map(|r| r.objective_w)
        .collect();
    assert_eq!(fixed[0], fixed[1]);
}

#[test]
fn invalid_specs_rejected() {
    let b = base();
    assert!(run_sweep(&small(SweepParam::Antennas, vec![2.5], 1), &b).is_err());
    assert!(run_sweep(&small(SweepParam::GridPoints, vec![], 1), &b).is_err());
    let mut spec = small(SweepParam::PowerBudget, vec![40.0], 1);
    spec.algorithms.clear();
    assert!(run_sweep(&spec, &b).is_err());
}
