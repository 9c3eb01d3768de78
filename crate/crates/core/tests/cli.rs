use std::process::{Command, Output};

use serde_json::Value;

fn heilbronn(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_heilbronn")).args(args).output().expect("binary runs")
}

fn json(out: &Output) -> Value {
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("one JSON document")
}

#[test]
fn density_reports_exact_rationals() {
    let v = json(&heilbronn(&["density", "--p", "5", "--n", "3"]));
    assert_eq!(v["C"], serde_json::json!({"num": "8", "den": "25"}));
    assert_eq!(v["E"], serde_json::json!({"num": "4", "den": "625"}));
    assert_eq!(v["A"], "40");
    assert_eq!(v["version"], heilbronn::VERSION);
    assert_eq!(v["config"]["pair_bound"], 20);
}

#[test]
fn check_applies_with_witness() {
    let v = json(&heilbronn(&["check", "--poly", "5,5,0", "--p", "5"]));
    assert_eq!(v["verdict"], "applies");
    assert_eq!(v["witness"]["a"], 2);
    assert_eq!(v["witness"]["b"], 3);
    let v = json(&heilbronn(&["check", "--poly", "-5,5,5", "--p", "5", "--pair-bound", "3"]));
    assert_eq!(v["verdict"], "inconclusive");
}

#[test]
fn decompose_absent_is_success() {
    let v = json(&heilbronn(&["decompose", "7", "2", "3"]));
    assert_eq!(v["found"], false);
    let v = json(&heilbronn(&["decompose", "37", "2", "3"]));
    assert_eq!((v["u"].as_u64(), v["v"].as_u64()), (Some(11), Some(5)));
}

#[test]
fn exit_codes() {
    assert_eq!(heilbronn(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(heilbronn(&["density", "--p", "five", "--n", "3"]).status.code(), Some(2));
    assert_eq!(heilbronn(&["density", "--p", "5", "--n", "3", "--pair-bound", "1"]).status.code(), Some(2));
    assert_eq!(heilbronn(&["check", "--poly", "5,5,1", "--p", "5"]).status.code(), Some(3));
    assert_eq!(heilbronn(&["theorem2", "--p", "5", "--n", "3", "--q1", "2", "--q2", "3"]).status.code(), Some(3));
    let capped = heilbronn(&["survey", "--p", "5", "--n", "3", "--X", "1000", "--enumeration-cap", "10000"]);
    assert_eq!(capped.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&capped.stderr).contains("Monte Carlo"));
}

#[test]
fn survey_csv_has_stable_columns() {
    let out = heilbronn(&["survey", "--p", "5", "--n", "3", "--X", "150", "--pair-bound", "3", "--format", "csv"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines, ["p,n,X,mode,total,applies,delta_num,delta_den,bound", "5,3,150,exhaustive,172800,12800,2,27,2/27"]);
    assert_eq!(heilbronn(&["density", "--p", "5", "--n", "3", "--format", "csv"]).status.code(), Some(2));
}

#[test]
fn config_file_and_out_file() {
    let dir = tempfile::tempdir().unwrap();
    let conf = dir.path().join("run.conf");
    std::fs::write(&conf, "# survey defaults\npair_bound = 3\nmode = mc\nsamples = 2000\nseed = 9\nX = 3000\n").unwrap();
    let out_file = dir.path().join("reports.jsonl");
    let conf = conf.to_str().unwrap();
    let out = out_file.to_str().unwrap();
    for _ in 0..2 {
        let run = heilbronn(&["survey", "--p", "5", "--n", "3", "--config", conf, "--out", out]);
        assert!(run.status.success(), "{}", String::from_utf8_lossy(&run.stderr));
        assert!(run.stdout.is_empty());
    }
    let text = std::fs::read_to_string(&out_file).unwrap();
    let reports: Vec<Value> = text.lines().map(|l| serde_json::from_str(l).unwrap()).collect();
    assert_eq!(reports.len(), 2);
    assert_eq!(reports[0]["config"]["seed"], 9);
    assert_eq!(reports[0]["mode"]["samples"], 2000);
    assert_eq!(reports[0]["applies_count"], reports[1]["applies_count"]);

    std::fs::write(dir.path().join("bad.conf"), "no_such_flag = 1\n").unwrap();
    let bad = dir.path().join("bad.conf");
    assert_eq!(heilbronn(&["bounds", "--p", "5", "--n", "3", "--config", bad.to_str().unwrap()]).status.code(), Some(2));
}

#[test]
fn thread_count_does_not_change_survey() {
    let run = |threads: &str| {
        let out = Command::new(env!("CARGO_BIN_EXE_heilbronn"))
            .args(["survey", "--p", "7", "--n", "4", "--X", "28", "--pair-bound", "5"])
            .env("HEILBRONN_THREADS", threads)
            .output()
            .unwrap();
        let mut v = json(&out);
        v.as_object_mut().unwrap().remove("wall_time_ms");
        v
    };
    assert_eq!(run("1"), run("4"));
    let bad = Command::new(env!("CARGO_BIN_EXE_heilbronn")).args(["verify"]).env("HEILBRONN_THREADS", "zero").output().unwrap();
    assert_eq!(bad.status.code(), Some(2));
}

#[test]
fn count_and_bounds() {
    let v = json(&heilbronn(&["count", "--p", "5", "--n", "3", "--X", "26", "--rootless", "2,3"]));
    assert!(v["exact"].as_u64().is_some());
    assert!(v["error_bound"].is_string());
    let v = json(&heilbronn(&["bounds", "--p", "5", "--n", "3"]));
    assert_eq!(v["bound_t1"], serde_json::json!({"num": "2", "den": "27"}));
}

#[test]
fn verify_passes() {
    let out = heilbronn(&["verify"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["failed"], 0);
    assert!(String::from_utf8_lossy(&out.stderr).lines().all(|l| l.starts_with("PASS ")));
}
