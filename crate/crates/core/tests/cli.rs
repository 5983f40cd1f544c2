use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hquat")).args(args).output().expect("binary runs")
}

fn report(args: &[&str]) -> (i32, Value) {
    let out = run(args);
    let v = serde_json::from_slice(&out.stdout).unwrap_or_else(|e| panic!("{args:?}: {e}\n{}", String::from_utf8_lossy(&out.stdout)));
    (out.status.code().unwrap(), v)
}

fn scratch(name: &str, contents: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("hquat-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join(name);
    std::fs::write(&path, contents).unwrap();
    path
}

fn dims(v: &Value) -> Vec<u64> {
    v.as_array().unwrap().iter().map(|x| x.as_u64().unwrap()).collect()
}

#[test]
fn tensor_of_y_with_itself() {
    let (code, v) = report(&["tensor", "--left", "y", "--right", "y"]);
    assert_eq!(code, 0);
    assert_eq!(v["status"], "ok");
    assert_eq!(dims(&v["result"]["dims"]), [12, 7]);
    assert_eq!(v["inputs"]["y"], "builtin");
}

#[test]
fn fueter_kernel_dimension() {
    let (code, v) = report(&["fueter", "dim", "-k", "3"]);
    assert_eq!(code, 0);
    assert_eq!(v["result"]["dim"], 40);
}

#[test]
fn cone_equations() {
    let (code, v) = report(&["variety", "emit", "--family", "eh", "--lambda", "0,0,0,0,0"]);
    assert_eq!(code, 0);
    let eqs: Vec<&str> = v["result"]["equations"].as_array().unwrap().iter().map(|e| e.as_str().unwrap()).collect();
    assert_eq!(
        eqs,
        [
            "v1_1*v1_1 + v1_2*v1_2 + v1_3*v1_3 - v3_1*v3_1 - v3_2*v3_2 - v3_3*v3_3",
            "v1_1*v2_1 + v1_2*v2_2 + v1_3*v2_3",
            "v1_1*v3_1 + v1_2*v3_2 + v1_3*v3_3",
            "v2_1*v2_1 + v2_2*v2_2 + v2_3*v2_3 - v3_1*v3_1 - v3_2*v3_2 - v3_3*v3_3",
            "v2_1*v3_1 + v2_2*v3_2 + v2_3*v3_3",
        ]
    );
    let (_, m) = report(&["variety", "member", "--point", "1,0,0,0,1,0,0,0,1"]);
    assert_eq!(m["result"]["member"], true);
}

#[test]
fn output_is_deterministic_and_round_trips() {
    let args = ["--seed", "7", "stability", "--module", "random:2,1"];
    let a = run(&args);
    let b = run(&args);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let v: Value = serde_json::from_slice(&a.stdout).unwrap();
    let again: Value = serde_json::from_str(&serde_json::to_string(&v).unwrap()).unwrap();
    assert_eq!(again, v);
    assert!(v.get("runtime_ms").is_none());
}

#[test]
fn module_files_round_trip() {
    let (_, v) = report(&["module", "--module", "y"]);
    let text = serde_json::to_string(&v["result"]["module"]).unwrap();
    let path = scratch("y.json", &text);
    let p = path.to_str().unwrap();
    let (code, w) = report(&["module", "--module", p]);
    assert_eq!(code, 0);
    assert_eq!(w["result"]["dims"], v["result"]["dims"]);
    assert_eq!(w["result"]["fingerprint"], v["result"]["fingerprint"]);
    let digest = w["inputs"][p].as_str().unwrap();
    assert_eq!(digest.len(), 64);
    assert!(digest.chars().all(|c| c.is_ascii_hexdigit()));
}

#[test]
fn exit_codes() {
    assert_eq!(run(&["tensor", "--left", "y"]).status.code(), Some(2));
    let (code, v) = report(&["module", "--module", "/does/not/exist.json"]);
    assert_eq!((code, v["status"].as_str().unwrap()), (2, "usage_error"));
    let (code, v) = report(&["--budget", "10", "tensor", "--left", "y", "--right", "y"]);
    assert_eq!((code, v["status"].as_str().unwrap()), (3, "budget_exceeded"));

    // right multiplication by i does not preserve the imaginary part of H
    let h = r#"{"n": 1, "uprime": [["0","1","0","0"],["0","0","1","0"],["0","0","0","1"]]}"#;
    let seq = format!(r#"{{"modules": [{h}, {h}], "maps": [[[{{"c": ["0","1","0","0"]}}]]]}}"#);
    let path = scratch("bad.json", &seq);
    let (code, v) = report(&["exactness", "--sequence", path.to_str().unwrap()]);
    assert_eq!((code, v["status"].as_str().unwrap()), (4, "invariant_violation"));
}

#[test]
fn builtin_counterexample_loses_exactness_after_tensoring() {
    let (code, v) = report(&["exactness"]);
    assert_eq!(code, 0);
    assert_eq!(v["result"]["exact"], true);
    assert_eq!(v["result"]["tensored"]["exact"], false);
    assert_eq!(v["result"]["tensored"]["first_failure"], 3);
}

#[test]
fn suite_passes() {
    let (code, v) = report(&["suite"]);
    assert_eq!(code, 0, "{v:#}");
}
