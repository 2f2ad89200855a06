use std::path::Path;
use std::process::{Command, Output};

use pass_swipt::{parse_scenario_str, SolveRecord, DEFAULT_SCENARIO};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_pass-swipt"))
        .args(args)
        .output()
        .unwrap()
}

fn code(out: &Output) -> i32 {
    out.status.code().unwrap()
}

fn p(path: &Path) -> &str {
    path.to_str().unwrap()
}

#[test]
fn solve_then_validate() {
    let dir = tempfile::tempdir().unwrap();
    let report = dir.path().join("r.json");
    let out = run(&[
        "solve",
        "--algo",
        "both",
        "--grid-points",
        "512",
        "--pso-iters",
        "50",
        "--out",
        p(&report),
    ]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let record: SolveRecord =
        serde_json::from_str(&std::fs::read_to_string(&report).unwrap()).unwrap();
    let algos: Vec<_> = record
        .reports
        .iter()
        .map(|r| r.algorithm.as_str())
        .collect();
    assert_eq!(algos, ["elementwise", "pso", "mimo", "fixed"]);
    assert_eq!(
        record.scenario,
        parse_scenario_str(DEFAULT_SCENARIO).unwrap()
    );

    let out = run(&["validate", "--report", p(&report)]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));

    let mut tampered = record.clone();
    let layout = tampered.reports[0].layout.as_mut().unwrap();
    layout.as_mut_slice()[1] = layout[0];
    std::fs::write(&report, serde_json::to_string(&tampered).unwrap()).unwrap();
    assert_eq!(code(&run(&["validate", "--report", p(&report)])), 1);
}

#[test]
fn bad_scenario_exits_one_with_field_path() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.toml");
    std::fs::write(
        &path,
        DEFAULT_SCENARIO.replace("seed = 1", "seed = \"one\""),
    )
    .unwrap();
    let out = run(&["solve", "--scenario", p(&path)]);
    assert_eq!(code(&out), 1);
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("receivers.sample.seed"), "{err}");
    assert_eq!(
        code(&run(&[
            "solve",
            "--scenario",
            p(&dir.path().join("missing.toml"))
        ])),
        1
    );
}

#[test]
fn infeasible_scenario_exits_two() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("hard.toml");
    std::fs::write(
        &path,
        DEFAULT_SCENARIO.replace("energy_floor_uw = 0.1", "energy_floor_uw = 1e6"),
    )
    .unwrap();
    let out = run(&[
        "solve",
        "--scenario",
        p(&path),
        "--grid-points",
        "64",
        "--pso-iters",
        "5",
    ]);
    assert_eq!(code(&out), 2, "{}", String::from_utf8_lossy(&out.stderr));
}

#[test]
fn sweep_output_is_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    let args = |out: &str, fmt: &str| -> Vec<String> {
        [
            "sweep",
            "--param",
            "power-budget",
            "--values",
            "34,40",
            "--trials",
            "3",
            "--seed",
            "5",
            "--grid-points",
            "256",
            "--pso-iters",
            "30",
            "--format",
            fmt,
            "--out",
            out,
        ]
        .map(String::from)
        .to_vec()
    };
    for fmt in ["csv", "json"] {
        let a = dir.path().join(format!("a.{fmt}"));
        let b = dir.path().join(format!("b.{fmt}"));
        for f in [&a, &b] {
            let argv = args(p(f), fmt);
            let out = run(&argv.iter().map(String::as_str).collect::<Vec<_>>());
            assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
        }
        assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
    }
}

#[test]
fn usage_errors_exit_one() {
    let out = run(&["sweep", "--param", "nonsense", "--values", "1"]);
    assert_eq!(code(&out), 1);
    assert_eq!(code(&run(&["--help"])), 0);
}
