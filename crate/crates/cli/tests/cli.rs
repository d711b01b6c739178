use std::path::PathBuf;
use std::process::Command;

use ivhs_lab::util::strip_timing;
use serde_json::Value;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_ivhs-lab"))
}

fn scenario_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("scenarios")
}

fn write_scenario(name: &str, body: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("ivhs-lab-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join(name);
    std::fs::write(&path, body).unwrap();
    path
}

fn run(args: &[&str]) -> (i32, Value) {
    let out = bin().args(args).output().expect("binary runs");
    let report = serde_json::from_slice(&out.stdout).unwrap_or_else(|e| {
        panic!("stdout is not JSON ({e}): {}", String::from_utf8_lossy(&out.stdout))
    });
    (out.status.code().expect("exit code"), report)
}

fn task<'a>(report: &'a Value, name: &str, class: Option<&str>) -> &'a Value {
    report["tasks"]
        .as_array()
        .unwrap()
        .iter()
        .find(|t| t["task"] == name && class.map_or(true, |c| t["class"] == c))
        .unwrap_or_else(|| panic!("no {name} task"))
}

#[test]
fn shipped_scenarios_succeed() {
    for entry in std::fs::read_dir(scenario_dir()).unwrap() {
        let path = entry.unwrap().path();
        let (code, report) = run(&["run", path.to_str().unwrap()]);
        assert_eq!(code, 0, "{}: {report}", path.display());
        assert_eq!(report["schema"], "ivhs-lab-report/1");
    }
}

#[test]
fn sextic_info_and_schiffer_stratum() {
    let path = scenario_dir().join("fermat_sextic.toml");
    let (code, report) = run(&["run", path.to_str().unwrap()]);
    assert_eq!(code, 0);
    let info = &task(&report, "info", None)["result"];
    assert_eq!(info["g"], 10);
    assert_eq!(info["h02K"], 27);
    assert_eq!(info["ic2"], 28);
    let s = &task(&report, "stratify", Some("schiffer"))["result"];
    assert_eq!(s["rank"], 1);
    assert_eq!(s["w_equals_delta_h0"], true);
}

#[test]
fn runs_are_deterministic() {
    let path = scenario_dir().join("long_filtration.toml");
    let (_, a) = run(&["run", path.to_str().unwrap()]);
    let (_, b) = run(&["run", path.to_str().unwrap(), "--threads", "1"]);
    assert_eq!(strip_timing(&a), strip_timing(&b));
}

#[test]
fn seed_override_changes_report() {
    let path = scenario_dir().join("fermat_sextic.toml");
    let (_, a) = run(&["run", path.to_str().unwrap()]);
    let (_, b) = run(&["run", path.to_str().unwrap(), "--seed", "8"]);
    assert_eq!(b["scenario"]["seed"], 8);
    assert_ne!(strip_timing(&a), strip_timing(&b));
}

#[test]
fn malformed_polynomial_is_a_scenario_error() {
    let path = write_scenario("bad_poly.toml", "field = \"Fp:101\"\ncurve = \"x^6+y^6+*z\"\ntasks = [\"info\"]\n");
    let (code, report) = run(&["run", path.to_str().unwrap()]);
    assert_eq!(code, 2);
    assert_eq!(report["error"]["kind"], "ParseError");
    assert!(report["error"]["message"].as_str().unwrap().contains("position"), "{report}");
}

#[test]
fn malformed_toml_is_a_scenario_error() {
    let path = write_scenario("bad_toml.toml", "field = \ntasks = [\"info\"]\n");
    let (code, report) = run(&["run", path.to_str().unwrap()]);
    assert_eq!(code, 2);
    assert_eq!(report["error"]["kind"], "ScenarioError");
}

#[test]
fn singular_curve_is_rejected() {
    let path = write_scenario("singular.toml", "field = \"Fp:101\"\ncurve = \"x^6+y^6+z^6-x^6\"\ntasks = [\"info\"]\n");
    let (code, report) = run(&["run", path.to_str().unwrap()]);
    assert_eq!(code, 3, "{report}");
}

#[test]
fn unsupported_task_over_rationals_is_a_task_failure() {
    let path = write_scenario(
        "ml_over_q.toml",
        "field = \"QQ\"\ncurve = \"x^4+y^4-z^4+x*y*z^2\"\ntasks = [\"selftest\"]\n",
    );
    let (code, report) = run(&["run", path.to_str().unwrap()]);
    assert_eq!(code, 5);
    assert_eq!(task(&report, "selftest", None)["status"], "error");
}

#[test]
fn output_flag_writes_file() {
    let dir = std::env::temp_dir().join(format!("ivhs-lab-out-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let out = dir.join("report.json");
    let path = scenario_dir().join("quintic.toml");
    let status = bin().args(["run", path.to_str().unwrap(), "-o", out.to_str().unwrap()]).status().unwrap();
    assert!(status.success());
    let report: Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(report["exit_code"], 0);
}

#[test]
fn search_with_zero_budget_is_empty() {
    let (code, report) = run(&["search", "--budget", "0"]);
    assert_eq!(code, 0);
    let r = &task(&report, "search", None)["result"];
    assert_eq!(r["findings"].as_array().unwrap().len(), 0);
}

#[test]
fn survey_reports_secant_rows() {
    let (code, report) = run(&["survey", "--per-rank-samples", "2", "--max-secant", "2", "--max-tail-order", "2", "--templates", "scroll"]);
    assert_eq!(code, 0);
    let rows = task(&report, "survey", None)["result"]["rows"].as_array().unwrap().clone();
    let secant1: Vec<_> = rows.iter().filter(|r| r["recipe"] == "secant:1").collect();
    assert_eq!(secant1.len(), 1);
    assert_eq!(secant1[0]["rank"], 1);
    assert!(rows.iter().any(|r| r["recipe"] == "template:scroll"));
}

#[test]
fn selftest_command_passes() {
    let out = bin().args(["selftest"]).output().unwrap();
    assert_eq!(out.status.code(), Some(0));
    let lines = String::from_utf8_lossy(&out.stderr);
    assert_eq!(lines.lines().filter(|l| l.starts_with("PASS")).count(), 11);
}
