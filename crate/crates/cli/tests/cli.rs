use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn carlitz(args: &[&str]) -> Output {
    carlitz_env(args, None)
}

fn carlitz_env(args: &[&str], cache: Option<&Path>) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_carlitz"));
    cmd.args(args);
    if let Some(c) = cache {
        cmd.env("CARLITZ_CACHE", c);
    }
    cmd.output().unwrap()
}

fn lines(out: &Output) -> Vec<Value> {
    String::from_utf8_lossy(&out.stdout)
        .lines()
        .map(|l| serde_json::from_str(l).unwrap())
        .collect()
}

#[test]
fn zeta_small_twists() {
    let out = carlitz(&["zeta", "--p", "3", "--s", "1", "--n", "2"]);
    assert_eq!(out.status.code(), Some(0));
    let r = &lines(&out)[0];
    assert_eq!(r["Z_coeffs"], serde_json::json!(["1", "2"]));
    assert_eq!(r["h_n"], 1);
    assert_eq!(r["zeta_star"], "2");
    assert_eq!(r["zeta_value"], "0");
    let r = &lines(&carlitz(&["zeta", "--p", "3", "--n", "0"]))[0];
    assert_eq!(r["Z_coeffs"], serde_json::json!(["1"]));
}

#[test]
fn zeta_direct_skipped_over_budget() {
    let out = carlitz(&["zeta", "--p", "2", "--s", "1", "--n", "40"]);
    assert_eq!(out.status.code(), Some(0));
    let r = &lines(&out)[0];
    assert!(r.get("Z_direct_coeffs").is_none());
    assert!(r["reason"].as_str().unwrap().contains("exceeds the limit"));
}

#[test]
fn conjecture_range_all_equal() {
    let out = carlitz(&[
        "check-conjecture",
        "--p",
        "3",
        "--s",
        "1",
        "--n-min",
        "0",
        "--n-max",
        "100",
        "--jobs",
        "4",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let reps = lines(&out);
    assert_eq!(reps.len(), 101);
    assert!(reps
        .iter()
        .all(|r| r["equal"] == true && r["status"] == "ok"));
}

#[test]
fn conjecture_csv_one_row_per_n() {
    let out = carlitz(&[
        "check-conjecture",
        "--p",
        "2",
        "--n-min",
        "0",
        "--n-max",
        "9",
        "--format",
        "csv",
    ]);
    let text = String::from_utf8(out.stdout).unwrap();
    let rows: Vec<&str> = text.lines().collect();
    assert_eq!(rows.len(), 11);
    assert!(rows[0].starts_with("check,status,p,s,q,n,"));
    assert!(rows[3].starts_with("conjecture,ok,2,1,2,2,"));
}

#[test]
fn epsilon_checks() {
    let r = &lines(&carlitz(&[
        "check-epsilon",
        "--p",
        "3",
        "--s",
        "1",
        "--n",
        "2",
    ]))[0];
    assert_eq!(
        (r["match"].clone(), r["epsilon_computed"].clone()),
        (true.into(), "t^3 + 2*t".into())
    );
    let r = &lines(&carlitz(&["check-epsilon", "--p", "3", "--n", "3"]))[0];
    assert_eq!(r["status"], "skipped");
    assert!(r["reason"].is_string());
}

#[test]
fn epsilon_counterexample_exits_one() {
    let out = carlitz(&[
        "check-epsilon",
        "--p",
        "2",
        "--s",
        "1",
        "--n-min",
        "1",
        "--n-max",
        "40",
    ]);
    assert_eq!(out.status.code(), Some(1));
    let bad: Vec<i64> = lines(&out)
        .iter()
        .filter(|r| r["status"] == "mismatch")
        .map(|r| r["n"].as_i64().unwrap())
        .collect();
    assert_eq!(bad, [21]);
}

#[test]
fn gn_en_and_precision_failure() {
    let r = &lines(&carlitz(&["en", "--p", "3", "--n", "2"]))[0];
    assert_eq!(
        (r["g_n"].clone(), r["e_n"].clone()),
        ("2*theta + t".into(), "t^3 + 2*t".into())
    );
    let out = carlitz(&["gn", "--p", "3", "--n", "4", "--t-prec", "1"]);
    assert_eq!(out.status.code(), Some(0));
    let out = carlitz(&["gn", "--p", "3", "--n", "10", "--t-prec", "1"]);
    assert_eq!(out.status.code(), Some(3));
    assert_eq!(lines(&out)[0]["status"], "precision_failure");
}

#[test]
fn roots_and_ext_structure() {
    let r = &lines(&carlitz(&["roots", "--p", "3", "--n", "2", "--r-max", "2"]))[0];
    assert_eq!(r["roots"][0]["n_roots"], 3);
    assert_eq!(r["roots"][1]["divides"], false);
    let r = &lines(&carlitz(&["ext-structure", "--p", "3", "--n", "2"]))[0];
    assert_eq!(
        (r["case"].clone(), r["rank"].clone()),
        ("free_plus_torsion".into(), 1.into())
    );
    let r = &lines(&carlitz(&["ext-structure", "--p", "3", "--n", "3"]))[0];
    assert_eq!(
        (r["case"].clone(), r["rank"].clone()),
        ("free".into(), 3.into())
    );
    let r = &lines(&carlitz(&["ext-structure", "--p", "3", "--n", "-5"]))[0];
    assert_eq!(r["case"], "trivial");
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(
        carlitz(&["pn", "--p", "4", "--n", "1"]).status.code(),
        Some(2)
    );
    assert_eq!(
        carlitz(&[
            "check-conjecture",
            "--p",
            "3",
            "--n-min",
            "5",
            "--n-max",
            "2"
        ])
        .status
        .code(),
        Some(2)
    );
    assert_eq!(
        carlitz(&[
            "check-conjecture",
            "--p",
            "3",
            "--n-max",
            "2",
            "--jobs",
            "0"
        ])
        .status
        .code(),
        Some(2)
    );
    assert_eq!(carlitz(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(
        carlitz(&["gn", "--p", "3", "--n", "3"]).status.code(),
        Some(2)
    );
}

#[test]
fn selftest_passes() {
    let out = carlitz(&["selftest"]);
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stdout)
    );
}

#[test]
fn sweep_writes_cache_and_summary() {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().join("cache.jsonl");
    let args = [
        "sweep",
        "--p",
        "2",
        "--n-max",
        "8",
        "--checks",
        "conjecture,cross",
        "--jobs",
        "2",
    ];
    let out = carlitz_env(&args, Some(&cache));
    assert_eq!(out.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&out.stderr).contains("cells=18 ok=18"));
    let cached = std::fs::read_to_string(&cache).unwrap();
    assert_eq!(cached.lines().count(), 18);
    assert!(cached
        .lines()
        .all(|l| serde_json::from_str::<Value>(l).is_ok()));
    let again = carlitz_env(&args, Some(&cache));
    assert!(String::from_utf8_lossy(&again.stderr).contains("computed=0 cached=18"));
    assert_eq!(again.stdout, out.stdout);
    assert!(!String::from_utf8_lossy(&out.stdout).contains("timings_ms"));
}
