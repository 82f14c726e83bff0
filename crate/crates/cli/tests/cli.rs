use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn rosen(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_rosen")).args(args).env_remove("ROSEN_PRECISION").output().unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).unwrap()
}

fn tmp(name: &str) -> PathBuf {
    let dir = PathBuf::from(env!("CARGO_TARGET_TMPDIR"));
    dir.join(name)
}

#[test]
fn expand_decimal_near_l0_terminates_after_one_digit() {
    let o = rosen(&["expand", "--q", "4", "--alpha", "1/2", "--x", "-0.70710678", "--n", "5"]);
    assert_eq!(code(&o), 0);
    let s = stdout(&o);
    assert!(s.contains("expanding l0"), "{s}");
    assert!(s.contains("orbit reaches 0 after 1 digit"), "{s}");
    assert!(s.contains("(-1:1)"));
}

#[test]
fn expand_exact_lambda_expression() {
    let o = rosen(&["expand", "--q", "4", "--x", "-lambda/2", "--n", "5", "--format", "json"]);
    assert_eq!(code(&o), 0);
    let v = json(&o);
    assert_eq!(v["schema"], 1);
    assert_eq!(v["digits"], serde_json::json!(["(-1:1)"]));
    assert_eq!(v["terminated"], true);
    assert_eq!(v["x"]["snapped_to"], Value::Null);
}

#[test]
fn expand_rational_is_not_snapped() {
    let o = rosen(&["expand", "--q", "4", "--x", "-70710678/100000000", "--n", "5", "--format", "json"]);
    assert_eq!(code(&o), 0);
    let v = json(&o);
    assert_eq!(v["digits"].as_array().unwrap().len(), 5);
    assert_eq!(v["terminated"], false);
}

#[test]
fn expand_rcf_of_one_half() {
    let o = rosen(&["expand", "--q", "3", "--alpha", "1", "--x", "0.5", "--n", "8", "--format", "json"]);
    assert_eq!(code(&o), 0);
    let v = json(&o);
    assert_eq!(v["digits"], serde_json::json!(["(+1:2)"]));
    assert_eq!(v["terminated"], true);
}

#[test]
fn expand_bounds_hold_along_a_long_expansion() {
    let o = rosen(&["expand", "--q", "7", "--alpha", "0.55", "--x", "2/7", "--n", "30", "--format", "json"]);
    assert_eq!(code(&o), 0);
    let v = json(&o);
    for row in v["convergents"].as_array().unwrap() {
        assert_eq!(row["holds"], true, "{row}");
    }
}

#[test]
fn expand_outside_interval_is_a_usage_error() {
    let o = rosen(&["expand", "--q", "4", "--alpha", "1/2", "--x", "0.9"]);
    assert_eq!(code(&o), 2);
    assert!(String::from_utf8_lossy(&o.stderr).contains("outside"));
    assert_eq!(code(&rosen(&["expand", "--q", "4", "--x", "abc"])), 2);
}

#[test]
fn verify_even_interior_reports_critical_digits() {
    let o = rosen(&["verify", "--q", "6", "--alpha", "53/100"]);
    assert_eq!(code(&o), 0);
    let s = stdout(&o);
    assert!(s.starts_with("PASS"), "{s}");
    assert!(s.contains("d_3(l0)=2, d_3(r0)=3"), "{s}");
}

#[test]
fn verify_rho_over_lambda_passes() {
    let o = rosen(&["verify", "--q", "5", "--alpha", "rho/lambda", "--format", "json"]);
    assert_eq!(code(&o), 0);
    let v = json(&o);
    assert_eq!(v["schema"], 1);
    assert_eq!(v["passed"], true);
    assert_eq!(v["regime"], "ODD_RHO");
}

#[test]
fn verify_rejects_q_two() {
    assert_eq!(code(&rosen(&["verify", "--q", "2", "--alpha", "1/2"])), 2);
}

#[test]
fn verify_names_the_failing_inequality() {
    let o = rosen(&["verify", "--q", "5", "--alpha", "0.509"]);
    assert_eq!(code(&o), 1);
    assert!(String::from_utf8_lossy(&o.stderr).contains("-delta_2 < r_3"));
}

#[test]
fn precision_floor_applies_to_flag_and_env() {
    assert_eq!(code(&rosen(&["domain", "--q", "6", "--alpha", "0.53", "--precision", "63"])), 2);
    let o = Command::new(env!("CARGO_BIN_EXE_rosen"))
        .args(["domain", "--q", "6", "--alpha", "0.53"])
        .env("ROSEN_PRECISION", "32")
        .output()
        .unwrap();
    assert_eq!(code(&o), 2);
    let o = Command::new(env!("CARGO_BIN_EXE_rosen"))
        .args(["domain", "--q", "6", "--alpha", "0.53"])
        .env("ROSEN_PRECISION", "256")
        .output()
        .unwrap();
    assert_eq!(json(&o)["decimal_digits"], 77);
}

#[test]
fn domain_rectangle_counts() {
    for (q, alpha, rects, dropped) in [("6", "0.53", 5, 0), ("5", "0.5038", 7, 0), ("5", "1/2", 4, 3)] {
        let o = rosen(&["domain", "--q", q, "--alpha", alpha]);
        assert_eq!(code(&o), 0);
        let v = json(&o);
        assert_eq!(v["schema"], 1);
        assert_eq!(v["rectangle_count"], rects, "q={q} alpha={alpha}");
        assert_eq!(v["dropped_count"], dropped, "q={q} alpha={alpha}");
        assert!(v["normalizing_constant"]["mass_residual"].as_f64().unwrap() < 1e-12);
        let r0 = &v["rectangles"][0];
        assert!(r0["left"]["decimal"].is_string(), "{r0}");
    }
}

#[test]
fn domain_csv_has_metadata_header() {
    let o = rosen(&["domain", "--q", "8", "--alpha", "1/lambda", "--format", "csv"]);
    assert_eq!(code(&o), 0);
    let s = stdout(&o);
    assert!(s.starts_with("# q=8 alpha=1/lambda"));
    assert!(s.contains("# precision=128 bits (38 decimals)"));
    assert!(s.contains("index,left,right,height"));
}

#[test]
fn lenstra_summary_shows_theory() {
    let o = rosen(&["simulate", "lenstra", "--q", "4", "--alpha", "1/2", "--c", "1/L", "--n", "200000"]);
    assert_eq!(code(&o), 0);
    let s = stdout(&o);
    assert!(s.contains("theory=0.66463"), "{s}");
    assert!(s.contains("z="));
}

#[test]
fn lenstra_rejects_odd_q() {
    let o = rosen(&["simulate", "lenstra", "--q", "5"]);
    assert_eq!(code(&o), 2);
    assert!(String::from_utf8_lossy(&o.stderr).contains("even q"));
}

#[test]
fn theta2d_writes_csv() {
    let path = tmp("theta2d.csv");
    let p = path.to_str().unwrap();
    let o = rosen(&["simulate", "theta2d", "--q", "6", "--alpha", "0.53", "--n", "100000", "--bins", "20", "--out", p]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).contains("outside_gamma=0"));
    let csv = std::fs::read_to_string(&path).unwrap();
    assert!(csv.starts_with("# q=6 alpha=53/100 N=100000 seed=42"));
    assert_eq!(csv.lines().count(), 2 + 400);
}

#[test]
fn simulations_are_deterministic_across_thread_counts() {
    let run = |threads: &str| {
        let path = tmp(&format!("equi-{threads}.csv"));
        let o = rosen(&[
            "simulate",
            "equidistribution",
            "--q",
            "7",
            "--alpha",
            "0.55",
            "--n",
            "100000",
            "--seed",
            "9",
            "--threads",
            threads,
            "--out",
            path.to_str().unwrap(),
        ]);
        assert_eq!(code(&o), 0);
        std::fs::read(&path).unwrap()
    };
    assert_eq!(run("1"), run("4"));
}

#[test]
fn json_output_is_byte_identical() {
    for args in [
        vec!["verify", "--q", "9", "--alpha", "0.52", "--format", "json"],
        vec!["domain", "--q", "10", "--alpha", "0.51"],
        vec!["simulate", "lenstra", "--q", "6", "--n", "50000", "--format", "json"],
    ] {
        let first = rosen(&args);
        assert_eq!(code(&first), 0, "{args:?}");
        assert!(!first.stdout.is_empty());
        assert_eq!(first.stdout, rosen(&args).stdout, "{args:?}");
    }
}

#[test]
fn unknown_flags_are_usage_errors() {
    assert_eq!(code(&rosen(&["domain", "--q", "6", "--bogus"])), 2);
    assert_eq!(code(&rosen(&["simulate", "nonsense", "--q", "6"])), 2);
}
