use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures").join(name)
}

fn germ(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_germ")).args(args).output().expect("binary runs")
}

fn json(args: &[&str]) -> Value {
    let out = germ(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn path(name: &str) -> String {
    fixture(name).to_string_lossy().into_owned()
}

#[test]
fn five_tuple_resonances() {
    let v = json(&["resonances", &path("five-tuple.json")]);
    assert_eq!(v["k2_tilde"], serde_json::json!([[0, 1, 2, 0, 0]]));
    assert_eq!(v["k1_tilde"], serde_json::json!([]));
    assert_eq!(v["verdict"], "level-s-only");
}

#[test]
fn no_resonance_file() {
    let v = json(&["resonances", &path("no-resonance.json")]);
    assert_eq!(v["verdict"], "no-resonances");
    assert!(v["resonant"].as_array().unwrap().iter().all(|r| r.as_array().unwrap().is_empty()));
}

#[test]
fn malformed_file_exits_2() {
    let out = germ(&["resonances", &path("malformed.json")]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("split"));
}

#[test]
fn missing_file_exits_2() {
    let out = germ(&["resonances", "/nonexistent/germ.json"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn koenigs_coefficients() {
    let v = json(&["linearize", &path("koenigs.json")]);
    assert_eq!(v["status"], "linearized");
    let psi2 = v["psi"].as_array().unwrap().iter().find(|t| t["index"] == serde_json::json!([2])).unwrap();
    assert_eq!(psi2["re"], -4);
    assert_eq!(v["residual"], 0.0);
}

#[test]
fn remark_germ_is_obstructed_but_exits_0() {
    let v = json(&["linearize", &path("remark.json")]);
    assert_eq!(v["status"], "obstructed");
    let first = &v["obstructions"][0];
    assert_eq!(first["index"], serde_json::json!([1, 1]));
    assert_eq!(first["coord"], 1);
}

#[test]
fn normal_form_keeps_xy() {
    let v = json(&["linearize", &path("remark.json"), "--mode", "normal-form"]);
    assert_eq!(v["status"], "resonant-terms");
    let g = v["g"].as_array().unwrap();
    assert_eq!(g.len(), 1);
    assert_eq!(g[0]["index"], serde_json::json!([1, 1]));
    assert_eq!(v["resonant_support"], true);
}

#[test]
fn diagnostics_report_both_germs() {
    let v = json(&["linearize", &path("koenigs-float.json"), "--degree", "6", "--diagnostics"]);
    let d = &v["diagnostics"];
    assert_eq!(d["q"], 1.0);
    assert_eq!(d["normalized"]["status"], "linearized");
    assert_eq!(d["domination"]["holds"], true);
    assert!(d["raw"]["growth"]["sup"].as_f64().unwrap() > 0.0);
}

#[test]
fn half_has_constant_omega() {
    let v = json(&["brjuno", &path("half.json"), "--horizon", "4"]);
    for e in v["table"].as_array().unwrap() {
        assert_eq!(e["value"], 0.25);
    }
}

#[test]
fn golden_and_liouville_verdicts() {
    let g = json(&["brjuno", &path("golden.json")]);
    assert_eq!(g["estimate"]["verdict"], "plausibly-finite");
    let l = json(&["brjuno", &path("liouville.json")]);
    assert_eq!(l["estimate"]["verdict"], "diverging-at-horizon");
}

#[test]
fn horizon_beyond_table_exits_2() {
    let out = germ(&["brjuno", &path("half.json"), "--horizon", "4", "--m-max", "8"]);
    assert_eq!(out.status.code(), Some(2));
    let out = germ(&["brjuno", &path("half.json"), "--sequence", "1,2,4", "--horizon", "4"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn partial_column_with_list_sequence() {
    let v = json(&["brjuno", &path("half.json"), "--which", "partial", "--sequence", "1,3,7", "--horizon", "1"]);
    assert_eq!(v["which"], "partial");
    assert_eq!(v["m_max"], 7);
    // ln 4 + ln 4 / 3
    let expected = 4f64.ln() * (1.0 + 1.0 / 3.0);
    assert!((v["estimate"]["partial_sums"][1].as_f64().unwrap() - expected).abs() < 1e-12);
}

#[test]
fn majorant_tables() {
    let v = json(&["majorant", &path("remark.json"), "--degree", "6"]);
    let alpha: Vec<&str> = v["alpha"].as_array().unwrap().iter().map(|a| a.as_str().unwrap()).collect();
    assert_eq!(&alpha[..4], &["1", "1", "3", "11"]);
    assert_eq!(v["counting"]["holds"], true);
    // no δ row for a pure-tail index
    for e in v["delta"].as_array().unwrap() {
        assert_ne!(e["k"][0], 0, "K2 index {} present", e["k"]);
    }
    assert_eq!(v["growth"]["holds"], true);
}

#[test]
fn check_form_on_remark_germ() {
    let v = json(&["check-form", &path("remark.json")]);
    assert_eq!(v["osculating"], false);
    assert_eq!(v["invariant"], true);
}

#[test]
fn csv_header_and_rows() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("psi.csv");
    json(&["linearize", &path("koenigs.json"), "--degree", "4", "--csv", out.to_str().unwrap()]);
    let text = std::fs::read_to_string(&out).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("k_1,value"));
    assert_eq!(lines.next(), Some("2,4"));
    assert_eq!(lines.count(), 2);
}

#[test]
fn reports_are_deterministic() {
    for args in [
        vec!["majorant", "remark.json"],
        vec!["linearize", "no-resonance.json"],
        vec!["brjuno", "golden.json"],
    ] {
        let full: Vec<String> = vec![args[0].to_string(), path(args[1])];
        let refs: Vec<&str> = full.iter().map(String::as_str).collect();
        assert_eq!(germ(&refs).stdout, germ(&refs).stdout);
    }
}

#[test]
fn text_report_renders_indices() {
    let out = germ(&["resonances", &path("five-tuple.json"), "--report", "text"]);
    assert!(String::from_utf8_lossy(&out.stdout).contains("K2~: (0,1,2,0,0)"));
}
