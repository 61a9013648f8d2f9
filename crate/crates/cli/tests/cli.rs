//! Runs the binary on small jobs and checks reports and exit codes.

use serde_json::Value;
use std::io::Write;
use std::process::{Command, Output, Stdio};

fn run(args: &[&str], input: &str, env: &[(&str, &str)]) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_arithdyn"));
    cmd.args(args).stdin(Stdio::piped()).stdout(Stdio::piped()).stderr(Stdio::piped());
    for (k, v) in env {
        cmd.env(k, v);
    }
    let mut child = cmd.spawn().expect("binary runs");
    child.stdin.take().unwrap().write_all(input.as_bytes()).unwrap();
    child.wait_with_output().unwrap()
}

fn report(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&o.stderr)))
}

const HEIGHT_JOB: &str = r#"{
  "systems": { "f": ["0", "1/2", "1"], "g": ["0", "3/8", "1"] },
  "pairs": [ { "system": "f", "point": "1/16" }, { "system": "g", "point": "1/16" } ]
}"#;

const PAIR_JOB: &str = r#"{
  "systems": { "f": ["1", "0", "1"] },
  "pairs": [ { "system": "f", "point": "1" }, { "system": "f", "point": "2" } ],
  "exponents": ["2", "-1"]
}"#;

#[test]
fn height_of_the_two_quadratic_pairs() {
    let o = run(&["height", "--compare"], HEIGHT_JOB, &[]);
    assert_eq!(o.status.code(), Some(0));
    let r = report(&o);
    for item in r["results"].as_array().unwrap() {
        assert_eq!(item["result"]["finite"], serde_json::json!({ "2": "4" }));
    }
}

#[test]
fn short_orbit_is_an_argument_error() {
    let o = run(&["equiv", "--orbit-len", "3"], PAIR_JOB, &[]);
    assert_eq!(o.status.code(), Some(1));
    assert_eq!(report(&o)["results"][0]["error"]["kind"], "argument");
    // the environment mirror has the same effect
    let o = run(&["equiv"], PAIR_JOB, &[("ARITHDYN_ORBIT_LEN", "3")]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn exhausted_budget_is_undecided() {
    let o = run(&["green", "--iter-budget", "0"], PAIR_JOB, &[]);
    assert_eq!(o.status.code(), Some(2));
    assert_eq!(report(&o)["results"][0]["result"]["status"], "UndecidedWithinBudget");
}

#[test]
fn decisive_pair_commands_exit_zero() {
    for cmd in ["equiv", "transcend-bottcher", "height-algebraic", "classify"] {
        let o = run(&[cmd], PAIR_JOB, &[]);
        assert_eq!(o.status.code(), Some(0), "{cmd}: {}", String::from_utf8_lossy(&o.stdout));
    }
}

#[test]
fn parse_errors_report_line_and_column() {
    let o = run(&["height"], "{\n  \"systems\": { \"f\": [\"1\" \"2\"] }\n}", &[]);
    assert_eq!(o.status.code(), Some(1));
    let e: Value = serde_json::from_slice(&o.stderr).unwrap();
    assert!(e["error"]["message"].as_str().unwrap().starts_with("line 2, column"), "{e}");
}

#[test]
fn unknown_keys_are_rejected() {
    let o = run(&["height"], r#"{ "sytems": {} }"#, &[]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn comparison_mode_is_byte_identical() {
    let job = r#"{
      "planes": { "H": { "f1": [[2, 0, "1"], [0, 2, "-1"]], "f2": [[1, 1, "2"]] } },
      "systems": { "f": ["1", "0", "1"] },
      "pairs": [ { "system": "f", "point": "1" }, { "system": "f", "point": "2" } ],
      "nmax": 2
    }"#;
    for cmd in ["plane-census", "geomdata"] {
        let a = run(&[cmd, "--compare"], job, &[]);
        let b = run(&[cmd, "--compare"], job, &[]);
        assert_eq!(a.stdout, b.stdout);
        assert!(report(&a).get("timing_ms").is_none());
    }
    let census = report(&run(&["plane-census", "--compare"], job, &[]));
    assert_eq!(census["results"][0]["result"]["curves"][0]["curve"], "y");
}

#[test]
fn printed_config_round_trips() {
    let job = r#"{ "field": "Q(sqrt( 5 ))", "systems": { "f": ["2/4", "sqrt(5)", "1"] }, "nmax": 3 }"#;
    let once = run(&["height", "--print-config"], job, &[]);
    let text = String::from_utf8(once.stdout).unwrap();
    let twice = run(&["height", "--print-config"], &text, &[]);
    assert_eq!(text, String::from_utf8(twice.stdout).unwrap());
    assert!(text.contains("\"1/2\""));
}

#[test]
fn output_flag_writes_the_report() {
    let path = std::env::temp_dir().join(format!("arithdyn-cli-test-{}.json", std::process::id()));
    let o = run(&["classify", "--output", path.to_str().unwrap()], PAIR_JOB, &[]);
    assert_eq!(o.status.code(), Some(0));
    assert!(o.stdout.is_empty());
    let r: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    std::fs::remove_file(&path).unwrap();
    assert_eq!(r["command"], "classify");
}
