use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn hbtp(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hbtp"))
        .args(args)
        .env_remove("HBTP_LLM_ENDPOINT")
        .env_remove("HBTP_LLM_MODEL")
        .output()
        .expect("binary runs")
}

fn stdout_json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn stderr_json(out: &Output) -> Value {
    serde_json::from_slice(&out.stderr).expect("stderr is JSON")
}

#[test]
fn plan_then_exec_kitchen() {
    let dir = tempfile::tempdir().unwrap();
    let bt = dir.path().join("kitchen.bt.json");
    let bt = bt.to_str().unwrap();
    let out = hbtp(&["plan", "--domain", "kitchen-mini", "--algo", "hbtp-s", "--provider", "oracle", "--out", bt]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let v = stdout_json(&out);
    assert_eq!(v["record"]["outcome"], "solved");
    assert_eq!(v["execution"]["cost"], 4.0);
    assert_eq!(v["execution"]["success"], true);
    assert!(Path::new(bt).exists());

    let out = hbtp(&["exec", "--domain", "kitchen-mini", "--bt", bt]);
    assert!(out.status.success());
    let v = stdout_json(&out);
    assert_eq!(v["steps"], 4);
    assert_eq!(v["actions"][3], "Put_apple_table");

    let out = hbtp(&["exec", "--domain", "kitchen-mini", "--bt", bt, "--disturb", "3:+Near(fridge),-Near(table)"]);
    assert!(out.status.success());
    assert_eq!(stdout_json(&out)["steps"], 5);
}

#[test]
fn exec_failure_is_reported() {
    let dir = tempfile::tempdir().unwrap();
    let bt = dir.path().join("t.json");
    let task = dir.path().join("other.task");
    std::fs::write(&task, "s0: Near(fridge)\ngoal: Holding(apple)\n").unwrap();
    let bt = bt.to_str().unwrap();
    let out = hbtp(&["plan", "--domain", "kitchen-mini", "--algo", "obtea", "--task", task.to_str().unwrap(), "--out", bt]);
    assert!(out.status.success());
    // the tree stops once Holding(apple) holds, short of On(apple,table)
    let out = hbtp(&["exec", "--domain", "kitchen-mini", "--bt", bt]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(stderr_json(&out)["error"], "execution-failed");
}

#[test]
fn oracle_prints_the_optimal_path() {
    let out = hbtp(&["oracle", "--domain", "kitchen-mini"]);
    assert!(out.status.success());
    let v = stdout_json(&out);
    assert_eq!(v["cost"], 4.0);
    assert_eq!(v["path"].as_array().unwrap().len(), 4);
}

#[test]
fn usage_errors_are_json() {
    let out = hbtp(&["plan", "--domain", "kitchen-mini", "--algo", "astar"]);
    assert_eq!(out.status.code(), Some(2));
    let e = stderr_json(&out);
    assert_eq!(e["error"], "usage");
    assert!(e["message"].as_str().unwrap().contains("unknown algorithm `astar`"));

    let out = hbtp(&["plan", "--domain", "household-huge"]);
    assert_eq!(out.status.code(), Some(2));

    let out = hbtp(&["plan", "--domain", "household-small"]);
    assert_eq!(stderr_json(&out)["message"], "--task is required for this domain");
}

#[test]
fn missing_files_and_provider_errors() {
    let out = hbtp(&["plan", "--domain", "/no/such/domain.dom"]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(stderr_json(&out)["error"], "io");

    let out = hbtp(&["plan", "--domain", "kitchen-mini", "--provider", "llm"]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(stderr_json(&out)["error"], "provider:config");

    let out = hbtp(&["plan", "--domain", "kitchen-mini", "--provider", "mock", "--correct-rate", "1.5"]);
    assert_eq!(stderr_json(&out)["error"], "provider:invalid-rate");
}

#[test]
fn feedback_rounds_are_logged() {
    let out = hbtp(&[
        "plan", "--domain", "kitchen-mini", "--provider", "mock", "--correct-rate", "0.5", "--max-feedback", "2",
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let v = stdout_json(&out);
    assert!(!v["rounds"].as_array().unwrap().is_empty());
    assert_eq!(v["execution"]["cost"], 4.0);
}

#[test]
fn gen_then_bench() {
    let dir = tempfile::tempdir().unwrap();
    let data = dir.path().join("tasks.jsonl");
    let out = hbtp(&[
        "gen", "--domain", "household-small", "--count", "2", "--dataset-seed", "5", "--out", data.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    assert_eq!(std::fs::read_to_string(&data).unwrap().lines().count(), 6);

    let results = dir.path().join("results");
    let out = hbtp(&[
        "bench",
        "--domain",
        "household-small",
        "--dataset",
        data.to_str().unwrap(),
        "--algo",
        "obtea,hbtp-s",
        "--mode",
        "pruned",
        "--out",
        results.to_str().unwrap(),
        "--serial",
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let csv = String::from_utf8(out.stdout).unwrap();
    assert!(csv.starts_with("algorithm,runs,solved,"));
    assert_eq!(csv.lines().count(), 3);
    for f in ["runs.jsonl", "trees.jsonl", "report.csv", "timing.csv"] {
        assert!(results.join(f).exists(), "{f}");
    }

    let out = hbtp(&[
        "sweep", "--domain", "household-small", "--dataset", data.to_str().unwrap(), "--correct-rates", "0.5,1",
        "--error-rates", "0",
    ]);
    assert!(out.status.success());
    assert_eq!(String::from_utf8(out.stdout).unwrap().lines().count(), 5);
}
