//! End-to-end tests of the command-line interface and its exit-code
//! contract, driving the compiled binary.

use std::path::Path;
use std::process::{Command, Output};

const VALID_CONFIG: &str = r#"{
  "configurations": [
    {"name": "ENV1", "control_points": [[12,0],[10,8],[6,10],[0,11]], "q_a": 2.0, "q_d": 2.0}
  ],
  "tolerances": {"p_a": 1.0, "p_d": 1.0},
  "costs": {"c_a": 2.0, "c_d": 1.0}
}"#;

fn write(dir: &Path, name: &str, text: &str) -> String {
    let path = dir.join(name);
    std::fs::write(&path, text).unwrap();
    path.to_string_lossy().into_owned()
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_runway-planner"))
        .args(args)
        .env_remove("RUNWAY_PLANNER_SEED")
        .output()
        .expect("binary runs")
}

fn stdout(output: &Output) -> String {
    String::from_utf8_lossy(&output.stdout).into_owned()
}

fn exit_code(output: &Output) -> i32 {
    output.status.code().expect("no signal")
}

#[test]
fn validate_reports_summary() {
    let dir = tempfile::tempdir().unwrap();
    let config = write(dir.path(), "config.json", VALID_CONFIG);
    let out = run(&["validate", &config]);
    assert_eq!(exit_code(&out), 0);
    let text = stdout(&out);
    assert!(text.contains("ENV1: J=3 mu_a_max=12.000000 mu_d_max=11.000000"));
    assert!(text.contains("OK: 1 configuration(s) valid"));
}

#[test]
fn validate_rejects_bad_endpoint_with_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    let config = write(
        dir.path(),
        "config.json",
        r#"{
          "configurations": [{"name": "BAD", "control_points": [[12,1],[0,11]], "q_a": 2.0, "q_d": 2.0}],
          "tolerances": {"p_a": 1.0, "p_d": 1.0},
          "costs": {"c_a": 1.0, "c_d": 1.0}
        }"#,
    );
    let out = run(&["validate", &config]);
    assert_eq!(exit_code(&out), 2);
}

#[test]
fn validate_rejects_malformed_json_with_exit_3() {
    let dir = tempfile::tempdir().unwrap();
    let config = write(dir.path(), "config.json", "{ not json");
    let out = run(&["validate", &config]);
    assert_eq!(exit_code(&out), 3);
}

#[test]
fn optimize_slot_prints_worked_example() {
    let dir = tempfile::tempdir().unwrap();
    let config = write(dir.path(), "config.json", VALID_CONFIG);
    let out = run(&["optimize-slot", &config, "--lambda-a", "2", "--lambda-d", "2"]);
    assert_eq!(exit_code(&out), 0);
    assert!(stdout(&out).contains("mu_a=10.000000 mu_d=8.000000 cost=0.833333"));
}

#[test]
fn optimize_slot_zero_demand_costs_nothing() {
    let dir = tempfile::tempdir().unwrap();
    let config = write(dir.path(), "config.json", VALID_CONFIG);
    let out = run(&["optimize-slot", &config, "--lambda-a", "0", "--lambda-d", "0"]);
    assert_eq!(exit_code(&out), 0);
    assert!(stdout(&out).contains("cost=0.000000"));
}

#[test]
fn optimize_slot_infeasible_exits_4() {
    let dir = tempfile::tempdir().unwrap();
    let config = write(dir.path(), "config.json", VALID_CONFIG);
    let out = run(&["optimize-slot", &config, "--lambda-a", "11.9", "--lambda-d", "0"]);
    assert_eq!(exit_code(&out), 4);
}

#[test]
fn domains_writes_polyline_files() {
    let dir = tempfile::tempdir().unwrap();
    let config = write(dir.path(), "config.json", VALID_CONFIG);
    let out_dir = dir.path().join("domains");
    let out = run(&[
        "domains",
        &config,
        "--lambda-a",
        "2",
        "--lambda-d",
        "2",
        "--out",
        out_dir.to_str().unwrap(),
    ]);
    assert_eq!(exit_code(&out), 0);
    assert!(stdout(&out).contains("mu_a_cong=3.000000 mu_d_cong=3.000000"));
    assert!(stdout(&out).contains("verdict: sustainable policy exists"));

    let delay = std::fs::read_to_string(out_dir.join("delay_policy.csv")).unwrap();
    assert_eq!(
        delay,
        "x,y\n0.108108,1.000000\n0.125000,0.166667\n0.250000,0.125000\n1.000000,0.117647\n"
    );
    let envelope = std::fs::read_to_string(out_dir.join("envelope.csv")).unwrap();
    assert!(envelope.starts_with("x,y\n12.000000,0.000000\n"));
    let secondary = std::fs::read_to_string(out_dir.join("secondary_demand.csv")).unwrap();
    assert!(secondary.contains("10.750000,0.000000"));
    assert!(out_dir.join("sustainable_policy.csv").exists());
}

#[test]
fn domains_without_sustainable_policy_exits_4_but_writes_envelope() {
    let dir = tempfile::tempdir().unwrap();
    let config = write(dir.path(), "config.json", VALID_CONFIG);
    let out_dir = dir.path().join("domains");
    let out = run(&[
        "domains",
        &config,
        "--lambda-a",
        "11.9",
        "--lambda-d",
        "0",
        "--out",
        out_dir.to_str().unwrap(),
    ]);
    assert_eq!(exit_code(&out), 4);
    assert!(stdout(&out).contains("verdict: no sustainable policy"));
    assert!(out_dir.join("envelope.csv").exists());
    assert!(out_dir.join("secondary_demand.csv").exists());
    assert!(!out_dir.join("delay_policy.csv").exists());
}

#[test]
fn plan_day_writes_worked_plan() {
    let dir = tempfile::tempdir().unwrap();
    let config = write(dir.path(), "config.json", VALID_CONFIG);
    let schedule = write(
        dir.path(),
        "schedule.json",
        r#"{"slots": [
            {"lambda_a": 11.0, "lambda_d": 0.0, "config": "ENV1"},
            {"lambda_a": 8.0, "lambda_d": 0.0, "config": "ENV1"}
        ]}"#,
    );
    let plan_path = dir.path().join("plan.json");
    let out = run(&[
        "plan-day",
        &config,
        &schedule,
        "--out",
        plan_path.to_str().unwrap(),
        "--transfer-cost-a",
        "1",
        "--transfer-cost-d",
        "1",
    ]);
    assert_eq!(exit_code(&out), 0);

    let plan: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&plan_path).unwrap()).unwrap();
    let s_a: Vec<f64> = plan["transfers"]["s_a"]
        .as_array()
        .unwrap()
        .iter()
        .map(|v| v.as_f64().unwrap())
        .collect();
    assert_eq!(s_a.len(), 2);
    assert!((s_a[0] - 0.25).abs() < 1e-9);
    assert_eq!(s_a[1], 0.0);
    assert!((plan["total_transfer_cost"].as_f64().unwrap() - 0.25).abs() < 1e-9);
    // slot 1 ends on the demand vertex (10.75, 0): extreme policy (11.75, 1)
    assert!((plan["policies"][0]["mu_a"].as_f64().unwrap() - 11.75).abs() < 1e-9);
    assert_eq!(plan["rounded_transfers"]["s_a"][0].as_f64().unwrap(), 0.0);
}

#[test]
fn plan_day_feasible_schedule_has_zero_transfers() {
    let dir = tempfile::tempdir().unwrap();
    let config = write(dir.path(), "config.json", VALID_CONFIG);
    let schedule = write(
        dir.path(),
        "schedule.json",
        r#"{"slots": [{"lambda_a": 5.0, "lambda_d": 5.0, "config": "ENV1"}]}"#,
    );
    let plan_path = dir.path().join("plan.json");
    let out = run(&["plan-day", &config, &schedule, "--out", plan_path.to_str().unwrap()]);
    assert_eq!(exit_code(&out), 0);
    assert!(stdout(&out).contains("transfer_cost=0.000000"));
}

#[test]
fn plan_day_impossible_schedule_exits_5() {
    let dir = tempfile::tempdir().unwrap();
    let config = write(dir.path(), "config.json", VALID_CONFIG);
    let schedule = write(
        dir.path(),
        "schedule.json",
        r#"{"slots": [
            {"lambda_a": 5.0, "lambda_d": 0.0, "config": "ENV1"},
            {"lambda_a": 11.0, "lambda_d": 0.0, "config": "ENV1"}
        ]}"#,
    );
    let plan_path = dir.path().join("plan.json");
    let out = run(&["plan-day", &config, &schedule, "--out", plan_path.to_str().unwrap()]);
    assert_eq!(exit_code(&out), 5);
    assert!(!plan_path.exists());
}

#[test]
fn simulate_reports_gap_and_respects_seed() {
    let args = [
        "simulate", "--lambda", "1", "--mu", "2", "--qc", "2", "--qs", "2", "--n", "50000",
        "--seed", "7",
    ];
    let first = run(&args);
    assert_eq!(exit_code(&first), 0);
    assert!(stdout(&first).contains("formula_z=1.000000"));
    let second = run(&args);
    assert_eq!(stdout(&first), stdout(&second), "same seed must reproduce bytes");

    let other = run(&[
        "simulate", "--lambda", "1", "--mu", "2", "--qc", "2", "--qs", "2", "--n", "50000",
        "--seed", "8",
    ]);
    assert_ne!(stdout(&first), stdout(&other));
}

#[test]
fn simulate_seed_env_var_is_used() {
    let out = Command::new(env!("CARGO_BIN_EXE_runway-planner"))
        .args(["simulate", "--lambda", "1", "--mu", "2", "--qc", "2", "--qs", "2", "--n", "1000"])
        .env("RUNWAY_PLANNER_SEED", "123")
        .output()
        .unwrap();
    assert!(stdout(&out).contains("seed=123"));
}

#[test]
fn simulate_unstable_exits_4() {
    let out = run(&["simulate", "--lambda", "3", "--mu", "2", "--qc", "2", "--qs", "2", "--n", "1000"]);
    assert_eq!(exit_code(&out), 4);
}

#[test]
fn deterministic_cli_example_q1() {
    // D/D/1: zero gap, exactly.
    let out = run(&[
        "simulate", "--lambda", "1", "--mu", "2", "--qc", "1", "--qs", "1", "--n", "10000",
    ]);
    assert_eq!(exit_code(&out), 0);
    assert!(stdout(&out).contains("relative_gap=0.000000"));
}
