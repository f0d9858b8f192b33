use std::io::Write;
use std::process::{Command, Output, Stdio};

use serde_json::Value;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_hallgroups"))
}

fn run_with_stdin(args: &[&str], input: &str) -> Output {
    let mut child = bin()
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .unwrap();
    child.stdin.as_mut().unwrap().write_all(input.as_bytes()).unwrap();
    child.wait_with_output().unwrap()
}

fn stdout_json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

#[test]
fn snf_example() {
    let out = run_with_stdin(&["snf"], r#"{"rows":2,"cols":2,"entries":[4,6,2,2]}"#);
    assert!(out.status.success());
    let v = stdout_json(&out);
    assert_eq!(v["S"]["entries"], serde_json::json!([2, 0, 0, 2]));
}

#[test]
fn snf_malformed_input_exits_2() {
    let out = run_with_stdin(&["snf"], r#"{"rows":2,"cols":2,"entries":[1]}"#);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("entries"));
}

#[test]
fn eval_word_commutator() {
    let out = bin().args(["eval-word", "--n", "6", "--word", "FAfa"]).output().unwrap();
    assert!(out.status.success());
    let v = stdout_json(&out);
    assert_eq!(v["a"], 0);
    assert_eq!(v["b"], 0);
    assert_eq!(v["base"]["0"], "-1");
    assert_eq!(v["base"]["1"], "1");
}

#[test]
fn member_g_verdicts_and_exit_codes() {
    // the vector c = e_0 generates the sigma obstruction: not a member
    let out = run_with_stdin(&["member-g"], r#"{"base":{"0":"1"},"a":0,"b":0}"#);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(stdout_json(&out)["member"], false);

    // d = e_1 - e_0 has sigma 0: member
    let out = run_with_stdin(&["member-g"], r#"{"base":{"0":"-1","1":"1"},"a":0,"b":0}"#);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout_json(&out)["member"], true);

    let out = run_with_stdin(&["member-g"], r#"{"base":{"0":"1//2"},"a":0,"b":0}"#);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn eval_member_round_trip() {
    let eval = bin().args(["eval-word", "--n", "2", "--word", "aFfaAFf"]).output().unwrap();
    assert!(eval.status.success());
    let out = run_with_stdin(&["member-g"], &String::from_utf8_lossy(&eval.stdout));
    assert!(out.status.success());
}

#[test]
fn shmelkin_commutator_in_base() {
    let out = bin().args(["shmelkin", "--m", "3", "--word", "XYxy"]).output().unwrap();
    assert!(out.status.success());
    let v = stdout_json(&out);
    assert_eq!(v["top"], serde_json::json!([0, 0]));
    assert!(!v["support"].as_array().unwrap().is_empty());
}

#[test]
fn rigid_member_exit_codes() {
    // integer vectors always belong
    let out = bin()
        .args(["rigid", "--p", "3", "--r", "2", "--seed", "7", "member", "--vector", r#"["1","0"]"#])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));

    // a foreign prime in the denominator never does
    let out = bin()
        .args(["rigid", "--p", "3", "--r", "2", "--seed", "7", "member", "--vector", r#"["1/5","0"]"#])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));

    let out = bin()
        .args(["rigid", "--p", "4", "--r", "2", "--seed", "7", "member", "--vector", r#"["1","0"]"#])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn pqr_member_exit_codes() {
    let ok = bin().args(["pqr", "--p", "2", "--q", "3", "--r", "5", "member", "1/5", "1/5"]).output().unwrap();
    assert_eq!(ok.status.code(), Some(0));
    let no = bin().args(["pqr", "--p", "2", "--q", "3", "--r", "5", "member", "1/5", "2/5"]).output().unwrap();
    assert_eq!(no.status.code(), Some(1));
    let bad = bin().args(["pqr", "--p", "2", "--q", "2", "--r", "5", "member", "0", "0"]).output().unwrap();
    assert_eq!(bad.status.code(), Some(2));
}

#[test]
fn ut_root_halves_a_shear() {
    let out = run_with_stdin(&["ut", "root", "--k", "2"], r#"[["1","1"],["0","1"]]"#);
    assert!(out.status.success());
    let v = stdout_json(&out);
    assert_eq!(v, serde_json::json!([["1", "1/2"], ["0", "1"]]));
}

#[test]
fn hall_cert_divisible_generator() {
    let input = r#"{
        "modulus": 6, "torsion_rank": 0, "free_dim": 1,
        "generators": [{"torsion": [], "rational": ["1"], "divisible": true}]
    }"#;
    let out = run_with_stdin(&["hall-cert"], input);
    assert!(out.status.success());
    let v = stdout_json(&out);
    assert_eq!(v["torsion_exponent"], 1);
    assert_eq!(v["free_basis"], serde_json::json!([["1"]]));
    assert_eq!(v["quotient_primes"], serde_json::json!([2, 3]));
}

#[test]
fn embed_fgab_witness_words() {
    let out = bin().args(["embed-fgab", "--free", "1", "--orders", "2"]).output().unwrap();
    assert!(out.status.success());
    let v = stdout_json(&out);
    assert_eq!(v["order"], 2);
    assert_eq!(v["witness_words"], serde_json::json!(["z", "PzpZ"]));
}

#[test]
fn verify_unknown_suite_exits_2() {
    let out = bin().args(["verify", "--suite", "nosuch"]).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn verify_json_report_is_deterministic() {
    let run = || {
        let out = bin()
            .args(["verify", "--suite", "snf", "--seed", "5", "--json"])
            .output()
            .unwrap();
        assert!(out.status.success());
        let mut v = stdout_json(&out);
        v.as_object_mut().unwrap().remove("elapsed_ms");
        v
    };
    let a = run();
    assert_eq!(a["suite"], "snf");
    assert!(a["cases"].as_array().unwrap().iter().all(|c| c["pass"] == true));
    assert_eq!(a, run());
}
