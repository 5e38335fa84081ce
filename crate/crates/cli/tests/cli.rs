use serde_json::Value;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn crate_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
}

fn modeq(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_modeq"))
        .args(args)
        .current_dir(crate_dir())
        .env_remove("MODEQ_CAP_OVERRIDE")
        .output()
        .expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn golden(name: &str, args: &[&str]) {
    let out = modeq(args);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let want = std::fs::read_to_string(crate_dir().join("tests/golden").join(name)).unwrap();
    assert_eq!(String::from_utf8_lossy(&out.stdout), want, "{name}");
}

#[test]
fn golden_ring_new() {
    golden(
        "ring_new_zmod4.json",
        &["ring", "new", "--spec", "specs/zmod4.json", "--features"],
    );
}

#[test]
fn golden_cat_gr() {
    golden(
        "cat_gr_zmod4.json",
        &["cat", "gr", "--ring", "specs/zmod4.json", "--bound", "16"],
    );
}

#[test]
fn golden_ultra_enum() {
    golden("ultra_enum_3.json", &["ultra", "enum", "--index", "3"]);
}

#[test]
fn golden_group_identities() {
    golden(
        "group_identities_zmod3.json",
        &["group", "identities", "--ring", "zmod3"],
    );
}

#[test]
fn golden_lattice_recover() {
    golden("lattice_recover_zmod2.json", &["lattice", "recover", "--ring", "zmod2"]);
}

#[test]
fn zmod4_units() {
    let v = json(&modeq(&["ring", "features", "--ring", "specs/zmod4.json"]));
    assert_eq!(v["features"]["units"], serde_json::json!([1, 3]));
}

#[test]
fn gr_certificate() {
    let v = json(&modeq(&["cat", "gr", "--ring", "zmod4", "--bound", "16"]));
    assert_eq!(v["certificate"], "recovered ≅ Z4");
    assert_eq!(v["ok"], true);
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(modeq(&["ring", "new"]).status.code(), Some(2));
    assert_eq!(modeq(&["ring", "frobnicate"]).status.code(), Some(2));
    assert_eq!(modeq(&["ring", "new", "--ring", "no_such_ring"]).status.code(), Some(2));
    assert_eq!(modeq(&["ring", "new", "--ring", "missing.json"]).status.code(), Some(2));
    assert_eq!(
        modeq(&["cat", "eval", "--ring", "zmod2", "--formula", "nope"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(modeq(&["suite", "all", "--catalog", "other"]).status.code(), Some(2));
}

#[test]
fn violation_exits_1_and_is_named() {
    let out = modeq(&["cat", "xi", "--ring", "zmod4", "--over", "f4", "--expect", "true"]);
    assert_eq!(out.status.code(), Some(1));
    let v = json(&out);
    assert_eq!(v["ok"], false);
    assert!(v["violations"][0].as_str().unwrap().contains("xi(Z4) over"));
}

#[test]
fn cap_override() {
    let out = Command::new(env!("CARGO_BIN_EXE_modeq"))
        .args(["ring", "new", "--ring", "m2f2"])
        .env("MODEQ_CAP_OVERRIDE", "ring_size=8")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("ring_size"));

    let out = Command::new(env!("CARGO_BIN_EXE_modeq"))
        .args(["ring", "new", "--ring", "zmod2"])
        .env("MODEQ_CAP_OVERRIDE", "nonsense=1")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn out_dir_matches_stdout() {
    let dir = std::env::temp_dir().join(format!("modeq-cli-{}", std::process::id()));
    let d = dir.to_str().unwrap();
    let out = modeq(&["ultra", "enum", "--index", "2", "--out", d]);
    assert_eq!(out.status.code(), Some(0));
    let written = std::fs::read(Path::new(d).join("ultra-enum.json")).unwrap();
    assert_eq!(written, out.stdout);
    std::fs::remove_dir_all(dir).ok();
}

#[test]
fn suite_is_deterministic() {
    let args = [
        "suite",
        "all",
        "--catalog",
        "default",
        "--seed",
        "11",
        "--only",
        "3,6,7,11",
    ];
    let a = modeq(&args);
    let b = modeq(&args);
    assert_eq!(a.status.code(), Some(0), "{}", String::from_utf8_lossy(&a.stdout));
    assert_eq!(a.stdout, b.stdout);
    let v = json(&a);
    assert_eq!(v["checks"].as_array().unwrap().len(), 4);
    assert_eq!(v["seed"], 11);
}
