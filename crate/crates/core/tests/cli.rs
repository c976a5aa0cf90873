use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

const EQ0: &str = "\
case: Q
q: 2
t: 1
op: t*phi^3 - (t+q*t+q^4*z^2)*phi^2 + q*(t-q^2*z)*phi + q^3*z
";

fn diffgal(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_diffgal")).args(args).output().unwrap()
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_string()
}

#[test]
fn classify_eq0_with_svg_and_validation() {
    let dir = tempfile::tempdir().unwrap();
    let input = write(dir.path(), "eq0.txt", EQ0);
    let json = dir.path().join("r.json");
    let svg = dir.path().join("n.svg");
    let out = diffgal(&[
        "classify",
        &input,
        "--json",
        json.to_str().unwrap(),
        "--newton-svg",
        svg.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let v: Value = serde_json::from_str(&fs::read_to_string(&json).unwrap()).unwrap();
    assert_eq!(v["classification"]["kind"], "FullGL");
    assert_eq!(v["classification"]["n"], 3);
    assert!(fs::read_to_string(&svg)
        .unwrap()
        .contains(r#"data-vertices="(0,1) (1,0) (3,0)""#));
    let out = diffgal(&["validate", json.to_str().unwrap()]);
    assert!(out.status.success());
}

#[test]
fn flags_override_the_header() {
    let out = diffgal(&["classify", "--op", "phi + 1", "--case", "S"]);
    assert!(out.status.success());
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["classification"]["kind"], "CyclicOrder1");
    assert_eq!(v["classification"]["ell"], 2);

    let dir = tempfile::tempdir().unwrap();
    let input = write(dir.path(), "eq0.txt", EQ0);
    let out = diffgal(&["classify", &input, "--set", "t=4", "--transcendence", "2"]);
    assert!(out.status.success());
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["input"]["config"]["substitutions"]["t"], "4");
    assert_eq!(v["transcendence"]["telescoper_bound"], 2);
}

#[test]
fn exit_codes_distinguish_failures() {
    let code = |args: &[&str]| diffgal(args).status.code().unwrap();
    assert_eq!(code(&["classify", "--op", "phi +", "--case", "S"]), 2);
    assert_eq!(
        code(&["classify", "--op", "phi - 1", "--case", "Q", "--param", "-1"]),
        3
    );
    assert_eq!(code(&["classify", "--op", "phi - 1", "--case", "M"]), 4);
    assert_eq!(code(&["classify", "/nonexistent/input"]), 1);
}

#[test]
fn batch_reports_in_input_order() {
    let dir = tempfile::tempdir().unwrap();
    let a = write(dir.path(), "a.txt", "case: S\nop: phi^2 - phi - 1\n");
    let b = write(dir.path(), "b.txt", EQ0);
    let c = write(dir.path(), "c.txt", "case: S\nop: phi + 1\n");
    let out = diffgal(&["batch", &a, &b, &c]);
    assert!(out.status.success());
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    let kinds: Vec<&str> = v
        .as_array()
        .unwrap()
        .iter()
        .map(|e| e["report"]["classification"]["kind"].as_str().unwrap())
        .collect();
    assert_eq!(kinds, ["DiagonalKernel", "FullGL", "CyclicOrder1"]);
}
