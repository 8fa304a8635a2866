// SPDX-License-Identifier: Apache-2.0

use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_rm-metric"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn json(args: &[&str]) -> Value {
    let out = run(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("JSON output")
}

#[test]
fn radius_of_rm15() {
    assert_eq!(json(&["radius", "--k", "1", "--m", "5"])["radius"], 12);
}

#[test]
fn radius_of_small_codes() {
    for (k, m, r) in [(0, 3, 4), (1, 4, 6), (2, 5, 6)] {
        assert_eq!(json(&["radius", "--k", &k.to_string(), "--m", &m.to_string()])["radius"], r);
    }
}

#[test]
fn tofs_of_hyperbolic_plane() {
    let v = json(&["tofs", "--m", "2", "--s", "010"]);
    assert_eq!(v["t"], 3);
    assert_eq!(v["factor_columns"].as_array().unwrap().len(), 3);
}

#[test]
fn verify_table1_passes() {
    let v = json(&["verify-table1"]);
    assert_eq!(v["all_passed"], true);
    assert_eq!(v["tables"][0]["passed"], 28);
}

#[test]
fn verify_sum_tables_markdown() {
    let out = run(&["verify-lemma12", "--report", "markdown"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("### Sums with complement class 28"));
    assert!(text.contains("| 28 | 12+34 | 12+34 | 0 | 0 | pass |"));
    assert!(!text.contains("FAIL"));
}

#[test]
fn classify_hex_and_anf_agree() {
    let anf = json(&["classify", "--f", "123+14+25"]);
    assert_eq!(anf["class"], 22);
    assert_eq!(anf["deep_hole"], true);
    let hex = format!("0x{}", anf["f"].as_str().unwrap());
    assert_eq!(json(&["classify", "--f", &hex]), anf);
}

#[test]
fn distance_command() {
    assert_eq!(json(&["distance", "--k", "1", "--m", "5", "--f", "123+145+45+24+35"])["distance"], 12);
    assert_eq!(json(&["distance", "--k", "2", "--m", "4", "--f", "1234"])["distance"], 1);
}

#[test]
fn complement_and_regularity() {
    let v = json(&["regular", "--k", "1", "--m", "4"]);
    assert_eq!(v["radius"], 6);
    assert_eq!(v["complement_size"], 896);
    assert_eq!(v["regular"], true);
    let d = json(&["complement", "--k", "0", "--m", "2", "--dump"]);
    assert_eq!(d["representatives"].as_array().unwrap().len() as u64, d["complement_class_count"].as_u64().unwrap());
}

#[test]
fn csv_and_markdown_formats() {
    let out = run(&["--format", "csv", "radius", "--k", "0", "--m", "3"]);
    assert_eq!(String::from_utf8(out.stdout).unwrap(), "code,k,m,n,dim,radius\n\"RM(0,3)\",0,3,8,1,4\n");
    let out = run(&["--format", "markdown", "radius", "--k", "0", "--m", "3"]);
    assert!(String::from_utf8(out.stdout).unwrap().starts_with("| code | k |"));
}

#[test]
fn output_independent_of_threads() {
    let args = |t: &'static str| vec!["--threads", t, "complement", "--k", "1", "--m", "4", "--dump"];
    let one = run(&args("1"));
    let two = run(&args("2"));
    assert!(one.status.success());
    assert_eq!(one.stdout, two.stdout);
    let env = Command::new(env!("CARGO_BIN_EXE_rm-metric"))
        .env("RM_METRIC_THREADS", "2")
        .args(["complement", "--k", "1", "--m", "4", "--dump"])
        .output()
        .unwrap();
    assert_eq!(env.stdout, one.stdout);
}

#[test]
fn oracle_check_agrees() {
    let v = json(&["oracle-check", "--max-m", "3"]);
    assert!(v.as_array().unwrap().iter().all(|r| r["agree"] == true));
}

#[test]
fn rm26_witness_reaches_18() {
    assert_eq!(json(&["rm26-witness"])["distance"], 18);
}

#[test]
fn usage_errors_exit_2() {
    for args in [
        vec!["radius", "--k", "3", "--m", "2"],
        vec!["radius", "--k", "2", "--m", "6"],
        vec!["classify", "--f", "12 + 3"],
        vec!["classify", "--f", "12345"],
        vec!["tofs", "--m", "2", "--s", "01"],
        vec!["frobnicate"],
        vec!["oracle-check", "--max-m", "9"],
    ] {
        let out = run(&args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
        assert!(out.stdout.is_empty(), "{args:?}");
    }
}
