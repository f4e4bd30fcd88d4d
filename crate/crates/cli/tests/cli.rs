use std::io::Write;
use std::process::{Command, Output, Stdio};

use serde_json::Value;

const PRISM_VERTICES: &str = r#"{"n":2,"d":3,"types":[[[1,2,3],[1]],[[2,3],[1,3]],[[2],[1,2,3]]]}"#;

fn tropom(args: &[&str], stdin: &str) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_tropom"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .expect("binary runs");
    child
        .stdin
        .take()
        .unwrap()
        .write_all(stdin.as_bytes())
        .unwrap();
    child.wait_with_output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(o: &Output) -> Value {
    serde_json::from_str(&stdout(o)).unwrap()
}

fn prism_tom() -> String {
    let out = tropom(&["tom", "closure-vertices"], PRISM_VERTICES);
    assert!(out.status.success());
    stdout(&out)
}

#[test]
fn check_accepts_the_prism_closure() {
    let tom = prism_tom();
    assert_eq!(
        json(&tropom(&["tom", "topes"], &tom))["types"]
            .as_array()
            .unwrap()
            .len(),
        6
    );
    let out = tropom(&["tom", "check"], &tom);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["ok"], Value::Bool(true));
}

#[test]
fn check_reports_elimination_failure() {
    let out = tropom(
        &["tom", "check"],
        r#"{"n":2,"d":2,"types":[[[1],[1]],[[2],[2]]]}"#,
    );
    assert_eq!(out.status.code(), Some(1));
    let report = json(&out);
    assert_eq!(report["elimination"]["ok"], Value::Bool(false));
    assert!(!report["elimination"]["violations"]
        .as_array()
        .unwrap()
        .is_empty());
}

#[test]
fn malformed_input_exits_with_two() {
    let out = tropom(&["tom", "check"], "{");
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("error"));
    let out = tropom(&["tom", "check"], r#"{"n":1,"d":2,"types":[[[]]]}"#);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn enumerate_counts_prism_triangulations() {
    let out = tropom(
        &["subdiv", "enumerate", "--n", "2", "--d", "3", "--count"],
        "",
    );
    assert_eq!(stdout(&out).trim(), "6");
}

#[test]
fn enumeration_output_ignores_job_count() {
    let one = tropom(
        &["--jobs", "1", "subdiv", "enumerate", "--n", "3", "--d", "3"],
        "",
    );
    let four = tropom(
        &["--jobs", "4", "subdiv", "enumerate", "--n", "3", "--d", "3"],
        "",
    );
    assert!(one.status.success());
    assert_eq!(one.stdout, four.stdout);
    assert_eq!(json(&one).as_array().unwrap().len(), 108);
}

#[test]
fn subdivision_round_trip_and_rendering() {
    let sub = stdout(&tropom(&["subdiv", "from-tom"], &prism_tom()));
    assert_eq!(
        json(&tropom(&["subdiv", "check", "--triangulation"], &sub))["ok"],
        Value::Bool(true)
    );
    let back = tropom(&["subdiv", "to-tom"], &sub);
    assert_eq!(
        json(&back),
        serde_json::from_str::<Value>(&prism_tom()).unwrap()
    );
    let svg = tropom(&["cayley", "render"], &sub);
    assert!(svg.status.success());
    assert_eq!(stdout(&svg).matches("<polygon").count(), 3);
    assert_eq!(svg.stdout, tropom(&["cayley", "render"], &sub).stdout);
    let rules = tropom(&["cayley", "verify-transitions"], &sub);
    assert_eq!(rules.status.code(), Some(0));
}

#[test]
fn overlapping_cells_fail_the_check() {
    let bad = r#"{"n":2,"d":2,"cells":[[[1,1],[2,1],[2,2]],[[1,1],[1,2],[2,1]]]}"#;
    let out = tropom(&["subdiv", "check", "--triangulation"], bad);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(json(&out)["face_to_face"]["ok"], Value::Bool(false));
    assert_eq!(tropom(&["subdiv", "to-tom"], bad).status.code(), Some(1));
}

#[test]
fn seeded_arrangements_are_reproducible_and_valid() {
    let args = [
        "--seed",
        "11",
        "tom",
        "random-arrangement",
        "--n",
        "3",
        "--d",
        "3",
    ];
    let first = tropom(&args, "");
    assert_eq!(first.stdout, tropom(&args, "").stdout);
    let tom = stdout(&tropom(&["tom", "from-arrangement"], &stdout(&first)));
    assert_eq!(tropom(&["tom", "check"], &tom).status.code(), Some(0));
    for args in [
        ["tom", "delete", "--i", "2"],
        ["tom", "contract", "--j", "1"],
    ] {
        let smaller = stdout(&tropom(&args, &tom));
        assert_eq!(tropom(&["tom", "check"], &smaller).status.code(), Some(0));
    }
    let dual = stdout(&tropom(&["tom", "dual"], &tom));
    assert_eq!(
        json(&tropom(&["tom", "dual"], &dual)),
        serde_json::from_str::<Value>(&tom).unwrap()
    );
}

#[test]
fn arrangement_accepts_fraction_strings() {
    let out = tropom(
        &["tom", "from-arrangement"],
        r#"{"n":2,"d":3,"apexes":[["0","0","0"],["-1","1/1",0]]}"#,
    );
    assert!(out.status.success());
    assert_eq!(json(&out)["types"].as_array().unwrap().len(), 17);
}

#[test]
fn elimination_lookup() {
    let tom = prism_tom();
    let out = tropom(
        &["tom", "eliminate", "--a", "1", "--b", "2", "--pos", "1"],
        &tom,
    );
    assert_eq!(out.status.code(), Some(0));
    assert!(!json(&out)["witnesses"].as_array().unwrap().is_empty());
    assert_eq!(
        tropom(
            &["tom", "eliminate", "--a", "99", "--b", "1", "--pos", "1"],
            &tom
        )
        .status
        .code(),
        Some(2)
    );
}

#[test]
fn conjecture_probe_passes_on_the_prism() {
    let out = tropom(&["conjecture", "probe", "--n", "2", "--d", "3"], "");
    assert_eq!(out.status.code(), Some(0));
    let report = json(&out);
    assert_eq!(report["triangulations"], Value::from(6));
    assert_eq!(report["injective"], Value::Bool(true));
}
