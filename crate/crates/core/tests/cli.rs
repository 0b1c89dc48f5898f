use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use mclp::io::{parse_instance, parse_solution, serialize_instance};
use tempfile::TempDir;

fn mclp(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_mclp")).args(args).output().unwrap()
}

fn path(dir: &TempDir, name: &str) -> String {
    dir.path().join(name).to_str().unwrap().to_owned()
}

fn generate(dir: &TempDir, name: &str, extra: &[&str]) -> String {
    let out = path(dir, name);
    let mut args = vec!["generate", "--out", &out];
    args.extend_from_slice(extra);
    let res = mclp(&args);
    assert!(res.status.success(), "{}", String::from_utf8_lossy(&res.stderr));
    out
}

#[test]
fn generate_is_byte_identical_across_runs() {
    let dir = TempDir::new().unwrap();
    let flags = ["--n", "25", "--m", "9", "--seed", "42", "--distribution", "clustered"];
    let a = generate(&dir, "a.json", &flags);
    let b = generate(&dir, "b.json", &flags);
    assert_eq!(fs::read(&a).unwrap(), fs::read(&b).unwrap());
    assert!(Path::new(&format!("{a}.manifest.json")).exists());

    let other = generate(&dir, "c.json", &["--n", "25", "--m", "9", "--seed", "43", "--distribution", "clustered"]);
    assert_ne!(fs::read(&a).unwrap(), fs::read(&other).unwrap());
}

#[test]
fn solve_then_validate_for_every_solver() {
    let dir = TempDir::new().unwrap();
    let inst = generate(&dir, "inst.json", &["--n", "12", "--m", "8", "--budget", "3", "--seed", "7"]);
    let before = fs::read(&inst).unwrap();
    let mut objectives = Vec::new();
    for solver in ["dp", "greedy", "brute"] {
        let sol = path(&dir, &format!("{solver}.json"));
        let res = mclp(&["solve", &inst, "--solver", solver, "--out", &sol]);
        assert!(res.status.success(), "{}", String::from_utf8_lossy(&res.stderr));
        let check = mclp(&["validate", &inst, &sol]);
        assert_eq!(check.status.code(), Some(0));
        assert!(String::from_utf8_lossy(&check.stdout).starts_with("ok"));
        objectives.push(parse_solution(&fs::read(&sol).unwrap()).unwrap().objective);
    }
    assert_eq!(objectives[0], objectives[2]);
    assert!(objectives[0] >= objectives[1]);
    // inputs are never rewritten
    assert_eq!(before, fs::read(&inst).unwrap());
}

#[test]
fn repeated_solves_are_byte_identical() {
    let dir = TempDir::new().unwrap();
    let inst = generate(&dir, "inst.json", &["--n", "30", "--m", "12", "--budget", "4", "--seed", "3"]);
    let a = mclp(&["solve", &inst]);
    let b = mclp(&["solve", &inst]);
    assert!(a.status.success());
    assert!(!a.stdout.is_empty());
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn tampered_solution_fails_validation() {
    let dir = TempDir::new().unwrap();
    let inst = generate(&dir, "inst.json", &["--n", "15", "--m", "6", "--budget", "2", "--seed", "11"]);
    let sol = path(&dir, "sol.json");
    assert!(mclp(&["solve", &inst, "--out", &sol]).status.success());
    let mut value: serde_json::Value = serde_json::from_slice(&fs::read(&sol).unwrap()).unwrap();
    value["objective"] = serde_json::json!(1.0e6);
    fs::write(&sol, serde_json::to_vec(&value).unwrap()).unwrap();
    let res = mclp(&["validate", &inst, &sol]);
    assert_eq!(res.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&res.stdout).contains("violation"));
}

#[test]
fn brute_force_over_the_cap_exits_three() {
    let dir = TempDir::new().unwrap();
    let inst = generate(&dir, "big.json", &["--n", "10", "--m", "60", "--budget", "12", "--seed", "1"]);
    let res = mclp(&["solve", &inst, "--solver", "brute"]);
    assert_eq!(res.status.code(), Some(3));
}

#[test]
fn bad_input_and_bad_usage() {
    let dir = TempDir::new().unwrap();
    let broken = path(&dir, "broken.json");
    fs::write(&broken, b"{\"demand_points\": [").unwrap();
    assert_eq!(mclp(&["solve", &broken]).status.code(), Some(2));

    let neg = path(&dir, "neg.json");
    fs::write(
        &neg,
        br#"{"budget": 1, "budget_mode": "at_most", "radius": 5,
            "demand_points": [{"x": 0, "y": 0, "weight": -1}],
            "sites": [{"x": 0, "y": 0}]}"#,
    )
    .unwrap();
    let res = mclp(&["solve", &neg]);
    assert_eq!(res.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&res.stderr).contains("demand_points[0].weight"));

    assert_eq!(mclp(&["solve", &path(&dir, "missing.json")]).status.code(), Some(2));
    assert_eq!(mclp(&["solve"]).status.code(), Some(1));
    assert_eq!(mclp(&["solve", &neg, "--solver", "simplex"]).status.code(), Some(1));
    assert_eq!(mclp(&["generate", "--n", "0"]).status.code(), Some(1));
}

#[test]
fn sweeps_and_compare_write_csv() {
    let dir = TempDir::new().unwrap();
    let inst = generate(&dir, "inst.json", &["--n", "20", "--m", "8", "--budget", "3", "--seed", "5"]);

    let res = mclp(&["sweep-radius", &inst, "--radii", "5,10,15"]);
    assert!(res.status.success());
    let text = String::from_utf8(res.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("radius,coverage_percent,facilities_used,efficiency,status"));
    assert_eq!(lines.count(), 3);

    let res = mclp(&["sweep-budget", &inst, "--budgets", "1..4"]);
    assert!(res.status.success());
    assert_eq!(String::from_utf8(res.stdout).unwrap().lines().count(), 5);

    // radii must ascend
    assert_ne!(mclp(&["sweep-radius", &inst, "--radii", "10,5"]).status.code(), Some(0));

    let out = path(&dir, "cmp.csv");
    let res = mclp(&["compare", "--count", "5", "--seed", "9", "--out", &out]);
    assert!(res.status.success());
    let csv = fs::read_to_string(&out).unwrap();
    assert!(csv.starts_with("instance_label,n,m,budget,size_class,"));
    let manifest: serde_json::Value =
        serde_json::from_slice(&fs::read(format!("{out}.manifest.json")).unwrap()).unwrap();
    assert_eq!(manifest["command"], "compare");
}

#[test]
fn written_instances_reparse_to_the_same_bytes() {
    let dir = TempDir::new().unwrap();
    let inst = generate(&dir, "inst.json", &["--n", "17", "--m", "5", "--seed", "99", "--budget-mode", "exactly"]);
    let bytes = fs::read(&inst).unwrap();
    let parsed = parse_instance(&bytes).unwrap();
    assert_eq!(serialize_instance(&parsed).into_bytes(), bytes);
}
