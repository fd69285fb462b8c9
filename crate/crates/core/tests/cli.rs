use std::path::Path;
use std::process::{Command, Output};

use loadshed::cli::PlanFile;
use loadshed::model::{CostCoefficients, ProblemInstance, ZoneCategory, ZoneSpec};
use loadshed::scenario::small_instance;

fn loadshed(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_loadshed")).args(args).output().expect("run loadshed")
}

fn write_instance(dir: &Path, instance: &ProblemInstance) -> String {
    let path = dir.join("instance.json");
    std::fs::write(&path, instance.to_json().unwrap()).unwrap();
    path.to_str().unwrap().to_string()
}

fn feasible_small(dir: &Path) -> String {
    let seed = (0..100)
        .find(|&s| loadshed::pipeline::optimize(&small_instance(s), &Default::default()).is_ok())
        .expect("a feasible small instance");
    write_instance(dir, &small_instance(seed))
}

#[test]
fn solve_then_calendar_from_plan_file() {
    let dir = tempfile::tempdir().unwrap();
    let instance = feasible_small(dir.path());
    let out = dir.path().join("run");
    let out = out.to_str().unwrap();

    let solved = loadshed(&["solve", "--instance", &instance, "--out", out]);
    assert_eq!(solved.status.code(), Some(0), "{}", String::from_utf8_lossy(&solved.stderr));
    let plan_path = dir.path().join("run/plan.json");
    let plan: PlanFile = serde_json::from_str(&std::fs::read_to_string(&plan_path).unwrap()).unwrap();
    assert!(plan.plan().is_consistent());

    let cal_out = dir.path().join("cal");
    let cal = loadshed(&[
        "calendar",
        "--instance",
        &instance,
        "--plan",
        plan_path.to_str().unwrap(),
        "--out",
        cal_out.to_str().unwrap(),
    ]);
    assert_eq!(cal.status.code(), Some(0), "{}", String::from_utf8_lossy(&cal.stderr));
    for f in ["calendar.csv", "cap_report.csv", "zones/zone_01.csv", "zones/zone_01.txt"] {
        assert!(cal_out.join(f).is_file(), "missing {f}");
    }
}

#[test]
fn unreachable_shortfall_exits_two() {
    let dir = tempfile::tempdir().unwrap();
    let zone = ZoneSpec {
        id: 1,
        category: ZoneCategory::Industrial,
        p_avg: 100.0,
        coeffs: CostCoefficients::new(1.0, 1.0, 1.0),
        k_max: 2,
        d_min_slots: 4,
        d_max_slots: 4,
    };
    let instance = ProblemInstance::new(vec![zone], 1_000.0, 100.0, 1).unwrap();
    let path = write_instance(dir.path(), &instance);
    let out = loadshed(&["solve", "--instance", &path]);
    assert_eq!(out.status.code(), Some(2), "{}", String::from_utf8_lossy(&out.stderr));
}

#[test]
fn exhausted_node_budget_exits_three() {
    let out = loadshed(&["solve", "--node-budget", "5"]);
    assert_eq!(out.status.code(), Some(3), "{}", String::from_utf8_lossy(&out.stderr));
    assert!(String::from_utf8_lossy(&out.stderr).contains("node budget"));
}

#[test]
fn bad_flag_exits_one() {
    assert_eq!(loadshed(&["solve", "--no-such-flag"]).status.code(), Some(1));
    assert_eq!(loadshed(&["solve", "--instance", "/nonexistent/instance.json"]).status.code(), Some(1));
}

#[test]
fn repeated_runs_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let instance = feasible_small(dir.path());
    let runs: Vec<_> = ["a", "b"]
        .iter()
        .map(|tag| {
            let out = dir.path().join(tag);
            let o = loadshed(&["compare", "--instance", &instance, "--out", out.to_str().unwrap()]);
            assert_eq!(o.status.code(), Some(0));
            (o.stdout, std::fs::read(out.join("compare.csv")).unwrap(), std::fs::read(out.join("compare.json")).unwrap())
        })
        .collect();
    assert_eq!(runs[0], runs[1]);
}

#[test]
fn synth_profiles_and_export_lp() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().to_str().unwrap();
    assert_eq!(loadshed(&["synth-profiles", "--seed", "3", "--out", out]).status.code(), Some(0));
    assert!(dir.path().join("profiles.csv").is_file());
    assert!(dir.path().join("total_demand.csv").is_file());

    let lp = loadshed(&["export-lp", "--c-delta", "250"]);
    assert_eq!(lp.status.code(), Some(0));
    let text = String::from_utf8(lp.stdout).unwrap();
    assert!(text.contains("Minimize") || text.contains("minimize"));
    assert!(text.contains("fair_up_1"));
}
