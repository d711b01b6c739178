//! The `run` command: executes a scenario and assembles the JSON report.

use std::time::Instant;

use ivhs_core::{Error, Field, FieldSpec, Rationals};
use serde_json::{json, Value};

use crate::lab::{self, ClassRun, Lab, TaskOutput};
use crate::scenario::{Scenario, Task};
use crate::{search, selftest, survey, util};

pub const SCHEMA: &str = "ivhs-lab-report/1";

pub mod exit {
    pub const OK: i32 = 0;
    pub const SCENARIO: i32 = 2;
    pub const CURVE_REJECTED: i32 = 3;
    pub const INVARIANT: i32 = 4;
    pub const TASK_FAILURE: i32 = 5;
}

pub struct Outcome {
    pub report: Value,
    pub code: i32,
}

fn ms(t: Instant) -> Value {
    json!({ "ms": t.elapsed().as_millis() as u64 })
}

/// Exit code for an error raised before any task ran.
pub fn setup_code(e: &Error) -> i32 {
    if e.is_curve_rejection() {
        exit::CURVE_REJECTED
    } else if e.is_invariant_violation() {
        exit::INVARIANT
    } else {
        exit::SCENARIO
    }
}

fn header(scn: &Scenario) -> Value {
    json!({
        "schema": SCHEMA,
        "tool_version": env!("CARGO_PKG_VERSION"),
        "scenario": serde_json::to_value(scn).expect("scenario serializes"),
    })
}

/// Report for a scenario that could not be set up.
pub fn failed(scn: Option<&Scenario>, e: &Error, code: i32) -> Outcome {
    let mut report = scn.map(header).unwrap_or_else(|| json!({ "schema": SCHEMA, "tool_version": env!("CARGO_PKG_VERSION") }));
    report["error"] = util::error(e);
    report["exit_code"] = json!(code);
    Outcome { report, code }
}

pub fn run(scn: &Scenario) -> Outcome {
    match FieldSpec::parse(&scn.field) {
        Ok(FieldSpec::Prime(k)) => run_in(k, scn),
        Ok(FieldSpec::Rational) => run_in(Rationals, scn),
        Err(e) => failed(Some(scn), &e, exit::SCENARIO),
    }
}

fn entry(task: Task, class: Option<&str>, out: Result<TaskOutput, Error>, start: Instant) -> Value {
    let mut v = json!({ "task": task.as_str() });
    if let Some(c) = class {
        v["class"] = json!(c);
    }
    match out {
        Ok((result, checks)) => {
            v["status"] = json!("ok");
            v["result"] = result;
            v["checks"] = Value::Array(checks);
        }
        Err(e) => {
            v["status"] = json!("error");
            v["error"] = util::error(&e);
        }
    }
    v["timing"] = ms(start);
    v
}

/// 4 if an invariant failed anywhere, else 5 if some task errored, else 0.
pub fn exit_code(tasks: &[Value]) -> i32 {
    let mut code = exit::OK;
    for t in tasks {
        if let Some(kind) = t["error"]["kind"].as_str() {
            if matches!(kind, "InvariantViolation" | "DivisionObstruction" | "CertificateFailure") {
                return exit::INVARIANT;
            }
            code = exit::TASK_FAILURE;
        }
        if t["checks"].as_array().is_some_and(|cs| cs.iter().any(|c| c["ok"] == json!(false))) {
            return exit::INVARIANT;
        }
    }
    code
}

fn run_in<K: Field>(k: K, scn: &Scenario) -> Outcome {
    let start = Instant::now();
    let lab = match Lab::new(k, &scn.curve, scn.seed, &scn.points) {
        Ok(l) => l,
        Err(e) => return failed(Some(scn), &e, setup_code(&e)),
    };
    let mut runs: Vec<ClassRun<K>> = scn.ks.iter().enumerate().map(|(i, s)| ClassRun::new(&lab, s, i)).collect();
    let mut tasks = Vec::new();
    for &task in &scn.tasks {
        if task.per_class() {
            for run in runs.iter_mut() {
                let t = Instant::now();
                let out = match task {
                    Task::Stratify => lab::stratify(&lab, run, scn.stratum_query),
                    Task::Filtration => lab::filtration(&lab, run, &scn.phi),
                    Task::Sl2 => lab::sl2(&lab, run, &scn.phi),
                    Task::Quadrics => lab::quadrics(&lab, run, &scn.phi),
                    Task::Gpp => lab::gpp(&lab, run, &scn.phi),
                    _ => unreachable!(),
                };
                tasks.push(entry(task, Some(&run.label), out, t));
            }
            continue;
        }
        let t = Instant::now();
        let out = match task {
            Task::Info => lab::info(&lab),
            Task::Survey => Ok((survey::survey(&lab, &scn.survey, scn.seed), vec![])),
            Task::Search => search::search(&lab, &scn.search, scn.seed),
            Task::Selftest => selftest_task(&lab),
            _ => unreachable!(),
        };
        tasks.push(entry(task, None, out, t));
    }
    let code = exit_code(&tasks);
    let mut report = header(scn);
    report["curve"] = lab.curve_facts();
    report["tasks"] = Value::Array(tasks);
    report["exit_code"] = json!(code);
    report["timing"] = ms(start);
    Outcome { report, code }
}

fn selftest_task<K: Field>(lab: &Lab<K>) -> Result<TaskOutput, Error> {
    let p = match lab.field.order() {
        Some(p) => p,
        None => return Err(Error::Precondition("selftest runs over a prime field".into())),
    };
    let r = selftest::selftest(p, lab.seed)?;
    let checks = r.criteria.iter().map(|c| util::check(&c.name, c.passed)).collect();
    Ok((r.to_json(), checks))
}
