use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn data(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("data").join(name).to_string_lossy().into_owned()
}

fn mellin(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_mellin")).args(args).output().expect("binary runs")
}

fn json_report(args: &[&str]) -> (i32, Value) {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("report.json");
    let mut full: Vec<&str> = args.to_vec();
    let out_s = out.to_string_lossy().into_owned();
    full.extend(["--json", &out_s]);
    let o = mellin(&full);
    let text = std::fs::read_to_string(&out).unwrap_or_else(|_| panic!("no report: {}", String::from_utf8_lossy(&o.stderr)));
    (o.status.code().unwrap(), serde_json::from_str(&text).unwrap())
}

fn record<'a>(report: &'a Value, name: &str) -> &'a Value {
    report["records"].as_array().unwrap().iter().find(|r| r["name"] == name).unwrap_or_else(|| panic!("no record {name}"))
}

#[test]
fn gv_check_on_the_diagonal() {
    let (code, r) = json_report(&["gv-check", "--input", &data("diag.json"), "--samples", "20", "--seed", "42"]);
    assert_eq!(code, 0);
    let gv = record(&r, "generic vanishing");
    assert_eq!(gv["status"], "pass");
    assert_eq!(gv["witnesses"]["samples"], 20);
    assert_eq!(gv["witnesses"]["unexplained"].as_array().unwrap().len(), 0);
    assert_eq!(r["seed"], 42);
}

#[test]
fn rhom_kk_graded_dims() {
    let (code, r) = json_report(&["rhom-kk", "--n", "2", "--order", "3"]);
    assert_eq!(code, 0);
    let rec = &r["records"][0];
    assert_eq!(rec["witnesses"]["graded_dims"], serde_json::json!([1, 2, 3]));
}

#[test]
fn euler_of_two_skyscrapers() {
    let (code, r) = json_report(&["euler", "--input", &data("two_skyscrapers.json")]);
    assert_eq!(code, 0);
    let e = record(&r, "euler characteristic");
    assert_eq!(e["witnesses"]["closed_form"], 2);
    assert_eq!(e["witnesses"]["constant"], true);
}

#[test]
fn fiber_on_the_diagonal_subtorus() {
    let (code, r) = json_report(&["fm-fiber", "--input", &data("diag.json"), "--chi", "2,3,1/2,1/3"]);
    assert_eq!(code, 0);
    let f = record(&r, "fiber cohomology");
    assert_eq!(f["witnesses"]["dims"], serde_json::json!({ "-1": 1, "0": 3, "1": 1 }));
}

#[test]
fn empty_corpus_passes() {
    let o = mellin(&["corpus", "--count", "0"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&o.stdout).contains("status: pass"));
}

#[test]
fn single_elliptic_case() {
    let (code, r) = json_report(&["corpus", "--count", "1", "--gmax", "1", "--seed", "0"]);
    assert_eq!(code, 0);
    assert_eq!(r["status"], "pass");
}

#[test]
fn every_file_command_passes() {
    let diag = data("diag.json");
    let runs: Vec<Vec<&str>> = vec![
        vec!["support-loci", "--input", &diag],
        vec!["codim-check", "--input", &diag],
        vec!["duality-check", "--input", &diag],
        vec!["linearity", "--input", &diag, "--order", "2"],
    ];
    for args in runs {
        let o = mellin(&args);
        assert_eq!(o.status.code(), Some(0), "{args:?}: {}", String::from_utf8_lossy(&o.stdout));
    }
    let module = data("exterior_free.json");
    let ideal = data("twisted_cubic_cone.json");
    let complex = data("weight_complex.json");
    for args in [["bgg-check", "--input", &module], ["commalg-verify", "--input", &ideal], ["purity-split", "--input", &complex]] {
        assert_eq!(mellin(&args).status.code(), Some(0), "{args:?}");
    }
}

#[test]
fn usage_and_input_errors_exit_2() {
    assert_eq!(mellin(&["no-such-command"]).status.code(), Some(2));
    assert_eq!(mellin(&["rhom-kk", "--n", "2", "--order", "3", "--bogus"]).status.code(), Some(2));
    assert_eq!(mellin(&["gv-check", "--input", "/nonexistent.json"]).status.code(), Some(2));
    assert_eq!(mellin(&["corpus", "--gmax", "4"]).status.code(), Some(2));
    assert_eq!(mellin(&["gv-check", "--input", &data("diag.json"), "--field", "fp:6"]).status.code(), Some(2));

    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, r#"{"field": "rationals", "g": 1, "atoms": [{"m": 1, "M": [[1]], "eta": [0, 1]}]}"#).unwrap();
    let o = mellin(&["euler", "--input", bad.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("atom 0"));
}

#[test]
fn unsupported_torsion_order_suggests_a_prime() {
    let o = mellin(&["linearity", "--input", &data("elliptic.json"), "--chi", "6,6", "--torsion-order", "5"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("fp:11"));
}

#[test]
fn property_violation_exits_1_with_witnesses() {
    // an impure complex: H^0 carries an eigenvalue of weight 1
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("impure.json");
    std::fs::write(
        &path,
        r#"{"field": "rationals", "q": 9, "lo": 0, "dims": [1], "frobenius": [[[3]]], "weights": [[3, 1]]}"#,
    )
    .unwrap();
    let (code, r) = json_report(&["purity-split", "--input", path.to_str().unwrap()]);
    assert_eq!(code, 1);
    assert_eq!(r["status"], "fail");
    let split = record(&r, "split");
    assert_eq!(split["witnesses"]["impure"][0]["degree"], 0);
}

#[test]
fn reports_are_deterministic() {
    let args = ["corpus", "--count", "4", "--gmax", "2", "--seed", "11"];
    let a = mellin(&args);
    let b = mellin(&args);
    assert_eq!(a.stdout, b.stdout);
    let (_, ra) = json_report(&args);
    let (_, rb) = json_report(&args);
    assert_eq!(ra, rb);
    assert_eq!(ra["command"], "corpus --count 4 --gmax 2 --seed 11");
}
