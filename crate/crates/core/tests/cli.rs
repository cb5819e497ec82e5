use std::path::Path;
use std::process::{Command, Output};

fn heatgrad(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_heatgrad")).args(args).output().expect("binary runs")
}

fn json(out: &Output) -> serde_json::Value {
    serde_json::from_slice(&out.stdout).expect("valid JSON on stdout")
}

#[test]
fn estimate_point_ratio() {
    let base = ["estimate", "--id", "sz14", "--solution", "traveling-wave:a=1", "--cube", "1,3,1,2", "--c", "1", "--at", "2,2"];
    let out = heatgrad(&base);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let v = json(&out);
    assert_eq!(v["schema"], 1);
    assert_eq!(v["estimate_id"], "SZ_1_4");
    // default sup slack of 1e-3 on analytic forms
    assert!((v["point_ratio"].as_f64().unwrap() - 0.25).abs() < 1e-3);

    let mut exact = base.to_vec();
    exact.extend(["--m-safety", "1"]);
    let v = json(&heatgrad(&exact));
    assert!((v["point_ratio"].as_f64().unwrap() - 0.25).abs() < 1e-12);
}

#[test]
fn sharpness_csv() {
    let out = heatgrad(&["--format", "csv", "sharpness", "--a", "1,2,4,8,16,32"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("a,lhs,rhs_at_c1,ratio,ln_M"));
    let last: f64 = lines.last().unwrap().split(',').nth(3).unwrap().parse().unwrap();
    assert!((last - 32.0 / 66.0).abs() < 1e-12);
}

#[test]
fn usage_errors_exit_two() {
    let out = heatgrad(&["estimate", "--id", "sz14", "--solution", "linear", "--x0", "2", "--R", "-1", "--t0", "1", "--T", "0.5"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("R > 0"));
    assert_eq!(heatgrad(&["estimate", "--id", "nope", "--solution", "linear", "--cube", "1,3,0.5,1"]).status.code(), Some(2));
    assert_eq!(heatgrad(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(heatgrad(&["estimate", "--id", "sz14", "--solution", "linear", "--cube", "1,3"]).status.code(), Some(2));
}

#[test]
fn failed_checks_exit_one() {
    let out = heatgrad(&["liouville", "--part", "a", "--solution", "traveling-wave:a=1", "--c", "1e-6"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(json(&out)["rows"][0]["verdict"] == "violated");
    let misuse = heatgrad(&["estimate", "--id", "cy11", "--solution", "traveling-wave:a=1", "--cube", "1,3,1,2"]);
    assert_eq!(misuse.status.code(), Some(1));
}

fn run_to(dir: &Path, name: &str, args: &[&str]) -> Vec<u8> {
    let path = dir.join(name);
    let mut all = vec!["--out", path.to_str().unwrap()];
    all.extend_from_slice(args);
    let out = heatgrad(&all);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    std::fs::read(path).unwrap()
}

#[test]
fn outputs_are_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    let proof = ["proof", "--solution", "gaussian:n=2", "--x0", "0", "--R", "1", "--t0", "1", "--T", "0.5", "--random", "40"];
    let mut seeded = vec!["--seed", "3"];
    seeded.extend_from_slice(&proof);
    let a = run_to(dir.path(), "a.json", &seeded);
    let b = run_to(dir.path(), "b.json", &seeded);
    assert_eq!(a, b);
    let mut other = vec!["--seed", "4"];
    other.extend_from_slice(&proof);
    assert_ne!(a, run_to(dir.path(), "c.json", &other));

    let acc = ["--format", "csv", "accept", "--only", "1,2,6"];
    assert_eq!(run_to(dir.path(), "d.csv", &acc), run_to(dir.path(), "e.csv", &acc));
    assert!(!dir.path().join(".d.csv.tmp").exists());
}

#[test]
fn every_command_runs() {
    let cmds: [&[&str]; 6] = [
        &["hamilton-failure"],
        &["proof", "--solution", "hyperbolic3-kernel", "--x0", "2", "--R", "1", "--t0", "1", "--T", "0.5"],
        &["cutoff", "--x0", "0", "--R", "1", "--t0", "1", "--T", "0.5", "--solution", "gaussian:n=1"],
        &["kernel", "--model", "euclidean:n=2", "--derive", "1,1"],
        &["liouville", "--part", "b", "--solution", "linear", "--x0", "1", "--depth", "parabolic"],
        &["estimate", "--id", "sz14", "--solution", "traveling-wave:a=1", "--cube", "1,3,1,2", "--grid", "40,40"],
    ];
    for args in cmds {
        let out = heatgrad(args);
        assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
        assert_eq!(json(&out)["schema"], 1);
    }
}

#[test]
fn accept_prints_a_table() {
    let out = heatgrad(&["accept", "--only", "1,2"]);
    assert!(out.status.success());
    let table = String::from_utf8(out.stderr.clone()).unwrap();
    assert_eq!(table.lines().filter(|l| l.starts_with("[PASS]")).count(), 2);
    assert_eq!(json(&out)["passed"], true);
}
