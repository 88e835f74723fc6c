use std::io::Write;
use std::path::Path;
use std::process::{Command, Output, Stdio};

use serde_json::Value;

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_gradedcodes"));
    c.env_remove("GRADEDCODES_ENUM_BUDGET").env_remove("GRADEDCODES_DISTANCE_BUDGET");
    c
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().unwrap()
}

fn run_stdin(args: &[&str], input: &[u8]) -> Output {
    let mut child = bin().args(args).stdin(Stdio::piped()).stdout(Stdio::piped()).stderr(Stdio::piped()).spawn().unwrap();
    child.stdin.take().unwrap().write_all(input).unwrap();
    child.wait_with_output().unwrap()
}

fn json(o: &Output) -> Value {
    assert!(o.status.success(), "stderr: {}", String::from_utf8_lossy(&o.stderr));
    serde_json::from_slice(&o.stdout).unwrap()
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

const SIMPLEX: &str = r#"{"field":"q=2","length":7,"dimension":3,
  "generator":[[0,0,0,1,1,1,1],[0,1,1,0,0,1,1],[1,0,1,0,1,0,1]]}"#;

#[test]
fn counts() {
    let v = json(&run(&["--json", "count", "--weights", "1,2", "--field", "q=5", "--enumerate"]));
    assert_eq!(v["count"], 7);
    assert_eq!(v["enumerated"], 7);
    let text = run(&["count", "--weights", "1,1,1", "--field", "q=4"]);
    assert!(String::from_utf8_lossy(&text.stdout).contains("21"));
}

#[test]
fn surface_count() {
    let v = json(&run(&[
        "--json", "surface", "--weights", "2,4,6,10", "--field", "q=5", "--poly", "x0^10+x1^5+x2^2+x3", "--count",
    ]));
    assert_eq!(v["count"], 112);
    let strict = run(&["surface", "--weights", "2,4,6,10", "--field", "q=5", "--poly", "x0^10+x1^5+x2^2+x3", "--strict"]);
    assert!(!strict.status.success());
}

#[test]
fn exit_codes() {
    assert_eq!(run(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(run(&["count", "--weights", "1,x", "--field", "q=5"]).status.code(), Some(2));
    assert_eq!(run(&["--help"]).status.code(), Some(0));
    let budget = run(&["--enum-budget", "10", "count", "--weights", "1,2,3", "--field", "q=5", "--enumerate"]);
    assert_eq!(budget.status.code(), Some(3));
    let env = bin()
        .env("GRADEDCODES_ENUM_BUDGET", "10")
        .args(["count", "--weights", "1,2,3", "--field", "q=5", "--enumerate"])
        .output()
        .unwrap();
    assert_eq!(env.status.code(), Some(3));

    let dir = tempfile::tempdir().unwrap();
    assert_eq!(run(&["fixtures", "--dir", path(dir.path())]).status.code(), Some(2));

    // a points file whose stored orbit size was tampered with
    let pts = dir.path().join("p.json");
    assert!(run(&["points", "--weights", "1,2", "--field", "q=3", "--out", path(&pts)]).status.success());
    let mut v: Value = serde_json::from_str(&std::fs::read_to_string(&pts).unwrap()).unwrap();
    v["points"][0]["orbit"] = Value::from(99);
    std::fs::write(&pts, v.to_string()).unwrap();
    assert_eq!(run(&["chain", "filter", path(&pts), "--thresholds", "1,inf"]).status.code(), Some(4));
}

#[test]
fn toric_through_a_pipe() {
    let toric = run(&["chain", "toric", "--L", "3"]);
    assert!(toric.status.success());
    let v = json(&run_stdin(&["--json", "chain", "code", "--degree", "1"], &toric.stdout));
    assert_eq!((v["n"].as_u64(), v["k"].as_u64()), (Some(18), Some(2)));
    assert_eq!(v["distance"]["kind"], "exact");
    assert_eq!(v["distance"]["value"], 3);

    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("t.json");
    std::fs::write(&file, &toric.stdout).unwrap();
    let h = json(&run(&["--json", "chain", "homology", path(&file)]));
    assert_eq!(h["betti"], serde_json::json!({"0": 1, "1": 2, "2": 1}));
}

#[test]
fn broken_complex_is_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("x.json");
    let bad = r#"{"field":"q=2","degrees":[0,2],"dims":{"0":1,"1":1,"2":1},"diff":{"1":[[1]],"2":[[1]]}}"#;
    std::fs::write(&file, bad).unwrap();
    let o = run(&["chain", "validate", path(&file)]);
    assert!(!o.status.success());
    assert!(String::from_utf8_lossy(&o.stderr).contains("error"));
}

#[test]
fn steane_pipeline() {
    let dir = tempfile::tempdir().unwrap();
    let code = dir.path().join("simplex.json");
    let css = dir.path().join("steane.json");
    std::fs::write(&code, SIMPLEX).unwrap();
    let a = json(&run(&["--json", "code", "analyze", path(&code)]));
    assert_eq!(a["self_orthogonal"], true);
    assert_eq!(a["distance"]["value"], 4);
    assert!(run(&["css", "lift", path(&code), "--out", path(&css)]).status.success());
    let d = json(&run(&["--json", "css", "distance", path(&css)]));
    assert_eq!(d["distance"]["value"], 3);
    let b = json(&run(&["--json", "bound", "--css", path(&css), "--epsilon", "1/2"]));
    assert_eq!(b["plain"], "4");
    assert_eq!(b["refined"], "15/4");
    assert_eq!(b["satisfies_plain"], true);
}

#[test]
fn output_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let code = dir.path().join("c.json");
    let build = run(&["code", "build", "--weights", "1,1,2", "--field", "q=5", "--degree", "4", "--out", path(&code)]);
    assert!(build.status.success());
    let args = ["--json", "code", "analyze", path(&code)];
    let outs: Vec<Vec<u8>> = ["1", "4", "1", "8"]
        .iter()
        .map(|t| {
            let o = bin().env("RAYON_NUM_THREADS", t).args(args).output().unwrap();
            assert!(o.status.success());
            o.stdout
        })
        .collect();
    assert!(outs.windows(2).all(|w| w[0] == w[1]));

    let pts = |t: &str| {
        bin().env("RAYON_NUM_THREADS", t).args(["--json", "census", "--weights", "2,3,6", "--field", "q=7"]).output().unwrap().stdout
    };
    assert_eq!(pts("1"), pts("6"));
}

#[test]
fn fixture_corpus_replays() {
    let o = run(&["--json", "fixtures"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stdout));
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    let outcomes = v.as_array().unwrap();
    assert!(outcomes.len() >= 11);
    assert!(outcomes.iter().all(|o| o["status"] != "FAIL"), "{v:#}");
}
