use std::process::{Command, Output};

use serde_json::Value;

fn k3lines(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_k3lines")).args(args).env("K3LINES_THREADS", "1").output().unwrap()
}

fn json(out: &Output) -> Value {
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).unwrap()
}

#[test]
fn field_info_reports_conway_modulus() {
    let v = json(&k3lines(&["field-info", "--field", "6"]));
    assert_eq!(v["modulus"], 0b1011011);
    assert_eq!(v["order"], 64);
    assert_eq!(v["generator_order"], 63);
    assert_eq!(v["conway"], true);
}

#[test]
fn family_x_census_and_sweep() {
    let v = json(&k3lines(&["lines", "--fixture", "familyX"]));
    assert_eq!(v["count"], 68);
    let v = json(&k3lines(&["lines", "--fixture", "familyX", "--sweep"]));
    assert_eq!(v["stable"], true);
    assert_eq!(v["lines"], 68);
}

#[test]
fn singular_point_and_plane_config() {
    let v = json(&k3lines(&["singular", "--fixture", "familyX"]));
    assert_eq!(v.as_array().unwrap().len(), 1);
    assert_eq!(v[0]["point"], serde_json::json!([0, 0, 0, 1]));
    let v = json(&k3lines(&["config", "--fixture", "familyX", "--plane", "1,0,0,0"]));
    assert_eq!(v["label"], "C1");
}

#[test]
fn surface_file_round_trip() {
    let v = json(&k3lines(&["normalize-c1", "--fixture", "familyX", "--scramble", "5"]));
    assert_eq!(v["outcome"]["lambda"], 1);
    let path = std::env::temp_dir().join(format!("k3lines-cli-{}.json", std::process::id()));
    std::fs::write(&path, v["normal_form"].to_string()).unwrap();
    let c = json(&k3lines(&["lines", "--surface", path.to_str().unwrap()]));
    std::fs::remove_file(&path).unwrap();
    assert_eq!(c["count"], 68);
}

#[test]
fn tables_text_output() {
    let out = k3lines(&["tables", "--which", "5", "--format", "text"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text.lines().count(), 7);
    assert!(text.contains("E6"));
}

#[test]
fn verify_paper_subset_passes() {
    let v = json(&k3lines(&["verify-paper", "--criteria", "2,8"]));
    assert!(v["checks"].as_array().unwrap().iter().all(|c| c["pass"] == true));
}

#[test]
fn usage_errors_exit_with_2() {
    for args in [
        &["lines", "--fixture", "nope"][..],
        &["lines", "--fixture", "familyX", "--field", "40"],
        &["verify-paper", "--lambda", "0"],
        &["config", "--fixture", "familyX", "--plane", "1,0,0"],
        &["lines"],
        &["tables", "--which", "7"],
    ] {
        assert_eq!(k3lines(args).status.code(), Some(2), "{args:?}");
    }
}
