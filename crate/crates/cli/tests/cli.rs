use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn aysurf(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_aysurf"))
        .args(args)
        .env_remove("AYSURF_OUT_DIR")
        .output()
        .expect("binary runs")
}

fn report(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn schema() -> jsonschema::JSONSchema {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("schema/report.schema.json");
    let v: Value = serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap();
    jsonschema::JSONSchema::compile(&v).expect("schema compiles")
}

fn assert_schema(v: &Value) {
    let s = schema();
    let msgs: Vec<String> = match s.validate(v) {
        Ok(()) => return,
        Err(errs) => errs.map(|e| e.to_string()).collect(),
    };
    panic!("schema violations: {msgs:?}");
}

#[test]
fn verify_genus_three_passes() {
    let out = aysurf(&["verify", "--genus", "3", "--suite", "all"]);
    assert_eq!(out.status.code(), Some(0));
    let r = report(&out);
    assert_schema(&r);
    assert_eq!(r["passed"], true);
    let names: Vec<&str> = r["data"]["suites"]
        .as_array()
        .unwrap()
        .iter()
        .map(|s| s["suite"].as_str().unwrap())
        .collect();
    assert_eq!(names, ["bounds", "iet", "psi", "rho", "surface"]);
}

#[test]
fn classify_three_quarters() {
    let out = aysurf(&["infinite", "classify", "--point", "11(0)"]);
    assert_eq!(out.status.code(), Some(0));
    let r = report(&out);
    assert_schema(&r);
    assert_eq!(r["data"]["classification"]["base"], "0");
    assert_eq!(r["data"]["classification"]["n"], "+1");
}

#[test]
fn veech_check_reports_non_member_with_success() {
    let out = aysurf(&["veech2", "check", "1", "1", "0", "1"]);
    assert_eq!(out.status.code(), Some(0));
    let r = report(&out);
    assert_eq!(r["summary"], "not in intersection");
    assert_eq!(r["data"]["in_intersection"], false);
}

#[test]
fn veech_check_accepts_negative_entries() {
    let out = aysurf(&["veech2", "check", "-1", "0", "0", "-1"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(report(&out)["data"]["in_intersection"], true);
}

#[test]
fn malformed_input_is_a_usage_error() {
    for args in [
        &["infinite", "classify", "--point", "12(0)"][..],
        &["veech2", "check", "1", "1", "1", "1"],
        &["iet", "orbit", "--genus", "3", "--start", "3/2", "--steps", "4"],
        &["build", "--genus", "inf"],
        &["build", "--genus", "2", "--presentation", "triangles"],
        &["verify", "--genus", "zero"],
        &["nonsense"],
    ] {
        let out = aysurf(args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
    }
}

#[test]
fn output_is_deterministic() {
    let args = ["infinite", "conjugacies", "--samples", "300", "--seed", "7"];
    let a = aysurf(&args);
    let b = aysurf(&args);
    assert_eq!(a.stdout, b.stdout);
    let r = report(&a);
    assert_eq!(r["seed"], 7);
    assert_eq!(r["data"]["checks"], 1200);
    let seq = aysurf(&["--sequential", "infinite", "conjugacies", "--samples", "300", "--seed", "7"]);
    assert_eq!(seq.stdout, a.stdout);
}

#[test]
fn build_json_matches_schema_and_reloads() {
    let out = aysurf(&["build", "--genus", "4", "--presentation", "triangles", "--out", "json"]);
    assert_eq!(out.status.code(), Some(0));
    let r = report(&out);
    assert_schema(&r);
    assert_eq!(r["data"]["summary"]["triangles"], 16);
    assert_eq!(r["data"]["summary"]["chi"], -6);
    let s = ay_core::surface::SurfaceComplex::from_json_value(&r["data"]["surface"]).unwrap();
    assert!(s.validate().is_valid());
}

#[test]
fn svg_output_is_well_formed() {
    let out = aysurf(&["build", "--genus", "3", "--out", "svg"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    let doc = roxmltree::Document::parse(&text).expect("well-formed XML");
    assert_eq!(doc.root_element().tag_name().name(), "svg");
    let trace = aysurf(&["trace", "--genus", "3", "--x", "1/5", "--out", "svg"]);
    let text = String::from_utf8(trace.stdout).unwrap();
    roxmltree::Document::parse(&text).expect("well-formed XML");
}

#[test]
fn out_dir_variable_sets_the_default_location() {
    let dir = std::env::temp_dir().join(format!("aysurf-test-{}", std::process::id()));
    let out = Command::new(env!("CARGO_BIN_EXE_aysurf"))
        .args(["build", "--genus", "inf", "--truncation", "2", "--out", "json"])
        .env("AYSURF_OUT_DIR", &dir)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let r = report(&out);
    assert_schema(&r);
    let path = PathBuf::from(r["data"]["path"].as_str().unwrap());
    assert!(path.starts_with(&dir));
    let written: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_schema(&written);
    assert_eq!(written["data"]["presentation"], "truncation");
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn vertical_trace_returns_by_f_g() {
    let out = aysurf(&["trace", "--genus", "5", "--x", "2/7", "--direction", "vertical", "--budget", "1000"]);
    assert_eq!(out.status.code(), Some(0));
    let r = report(&out);
    assert_schema(&r);
    assert_eq!(r["data"]["kind"], "returns_to_section");
    assert_eq!(r["data"]["first_return_matches_f_g"], true);
}

#[test]
fn truncation_trace_lengths_are_powers_of_two() {
    let out = aysurf(&["trace", "--genus", "inf", "--truncation", "5", "--x", "3/16"]);
    assert_eq!(out.status.code(), Some(0));
    for c in report(&out)["data"]["connections"].as_array().unwrap() {
        if c["in_zone"] == true && c["closed"] == true {
            assert_eq!(c["power_of_two"], true);
        }
    }
}

#[test]
fn orbit_index_agrees_with_table() {
    for p in ["1(0)", "01(0)", "0101(0)", "111(0)", "0011(0)"] {
        let out = aysurf(&["infinite", "orbit-index", "--point", p]);
        assert_eq!(out.status.code(), Some(0), "{p}");
        assert_eq!(report(&out)["data"]["consistent"], true);
    }
}

#[test]
fn iet_orbit_walks_both_ways() {
    let fwd = report(&aysurf(&["iet", "orbit", "--genus", "3", "--start", "1/3", "--steps", "5"]));
    let pts = fwd["data"]["points"].as_array().unwrap();
    assert_eq!(pts.len(), 6);
    let back = report(&aysurf(&["iet", "orbit", "--genus", "3", "--start", "1/3", "--steps", "-5"]));
    assert_eq!(back["data"]["points"].as_array().unwrap().len(), 6);
    let inf = report(&aysurf(&["iet", "orbit", "--genus", "inf", "--start", "0", "--steps", "1"]));
    assert_eq!(inf["data"]["points"][1]["value"], "3/4");
}

#[test]
fn sweep_passes() {
    let out = aysurf(&["veech2", "sweep", "--range", "4"]);
    assert_eq!(out.status.code(), Some(0));
    assert_schema(&report(&out));
}
