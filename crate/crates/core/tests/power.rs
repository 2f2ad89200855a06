mod common;

use pass_swipt::power::{RowKind, Sense};
use pass_swipt::{
    build_lp, evaluate, optimize_powers, solve_lp, LpStatus, PaLayout, PowerAllocation, Scenario,
};
use proptest::prelude::*;

use common::{loose_scenario, rel_close, scenario};

/// Brute force over the power grid with step `P_B/(M·steps)`: the
/// objective only depends on Σp, so for each p0 the largest feasible p1
/// is the one that counts.
fn grid_optimum(s: &Scenario, layout: &PaLayout, steps: usize) -> Option<f64> {
    let cap = s.per_antenna_budget();
    let h = cap / steps as f64;
    let mut best: Option<f64> = None;
    for i in 0..=steps {
        let p0 = i as f64 * h;
        for j in (0..=steps - i).rev() {
            let alloc = PowerAllocation::new(vec![p0, j as f64 * h]);
            let st = evaluate(s, layout, &alloc).unwrap();
            if st.flags.sinr && st.flags.energy && st.flags.budget {
                best = Some(best.map_or(st.objective, |b: f64| b.max(st.objective)));
                break;
            }
        }
    }
    best
}

#[test]
fn lp_agrees_with_grid_search() {
    let mut checked = 0;
    for seed in 0..6 {
        let s = scenario(seed, 4);
        let layout = s.uniform_layout();
        let lp = optimize_powers(&s, &layout).unwrap();
        let grid = grid_optimum(&s, &layout, 1000);
        match (lp.objective, grid) {
            (Some(a), Some(b)) => {
                assert!(a >= b * (1.0 - 1e-12));
                assert!(rel_close(a, b, 2e-2), "seed {seed}: lp {a} grid {b}");
                checked += 1;
            }
            (None, None) => {}
            other => panic!("seed {seed}: status mismatch {other:?}"),
        }
    }
    assert!(checked > 0);
}

#[test]
fn lp_rows_follow_decoding_order() {
    let s = loose_scenario(3, 4);
    let layout = s.uniform_layout();
    let lp = build_lp(&s, &layout).unwrap();
    assert_eq!(lp.num_vars(), 2);
    assert_eq!(lp.rows.len(), 2 + 2 + 1);
    let first = lp.order[0];
    let row = lp.row(RowKind::Sinr { ir: first }).unwrap();
    assert_eq!(row.sense, Sense::Ge);
    assert!(
        row.coeffs[lp.order[1]] < 0.0,
        "interference enters with a negative sign"
    );
    let last = lp.row(RowKind::Sinr { ir: lp.order[1] }).unwrap();
    assert_eq!(last.coeffs[first], 0.0);
    let budget = lp.row(RowKind::Budget).unwrap();
    assert_eq!((budget.sense, budget.rhs), (Sense::Le, s.power_budget));
}

#[test]
fn unreachable_energy_floor_is_infeasible() {
    let s = Scenario {
        energy_floor: 1.0,
        ..scenario(1, 4)
    };
    let sol = optimize_powers(&s, &s.uniform_layout()).unwrap();
    assert_eq!(sol.status, LpStatus::Infeasible);
    assert!(sol.allocation.is_none() && sol.objective.is_none());
}

#[test]
fn optimum_validates_and_is_reported_binding() {
    let s = loose_scenario(5, 4);
    let layout = s.uniform_layout();
    let inst = build_lp(&s, &layout).unwrap();
    let sol = solve_lp(&inst).unwrap();
    let alloc = sol.allocation.clone().unwrap();
    let state = evaluate(&s, &layout, &alloc).unwrap();
    assert!(state.feasible());
    assert!(rel_close(state.objective, sol.objective.unwrap(), 1e-12));
    assert!(sol.binding.contains(&RowKind::Budget));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn budget_is_tight_at_the_optimum(seed in 0u64..10_000, m in 1usize..7) {
        let s = loose_scenario(seed, m);
        let sol = optimize_powers(&s, &s.uniform_layout()).unwrap();
        let alloc = sol.allocation.unwrap();
        prop_assert!(m as f64 * alloc.total() >= (1.0 - 1e-9) * s.power_budget);
    }

    #[test]
    fn objective_grows_with_budget(seed in 0u64..10_000, extra_db in 0.1..10.0f64) {
        let s = loose_scenario(seed, 4);
        let richer = Scenario { power_budget: s.power_budget * 10f64.powf(extra_db / 10.0), ..s.clone() };
        let layout = s.uniform_layout();
        let a = optimize_powers(&s, &layout).unwrap().objective.unwrap();
        let b = optimize_powers(&richer, &layout).unwrap().objective.unwrap();
        prop_assert!(b > a);
    }

    #[test]
    fn objective_never_grows_with_sinr_floor(seed in 0u64..10_000, floor_db in -10.0..20.0f64, step_db in 0.0..10.0f64) {
        let s = Scenario { sinr_floor: 10f64.powf(floor_db / 10.0), energy_floor: 0.0, ..scenario(seed, 4) };
        let harder = Scenario { sinr_floor: s.sinr_floor * 10f64.powf(step_db / 10.0), ..s.clone() };
        let layout = s.uniform_layout();
        let a = optimize_powers(&s, &layout).unwrap().objective;
        let b = optimize_powers(&harder, &layout).unwrap().objective;
        match (a, b) {
            (Some(a), Some(b)) => prop_assert!(b <= a * (1.0 + 1e-9)),
            (None, Some(_)) => prop_assert!(false, "relaxing the floor lost feasibility"),
            _ => {}
        }
    }
}
