use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn qwm(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qwm")).args(args).output().unwrap()
}

fn config(name: &str) -> String {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../configs").join(name).to_str().unwrap().to_string()
}

fn json(path: PathBuf) -> Value {
    serde_json::from_slice(&std::fs::read(path).unwrap()).unwrap()
}

fn out(dir: &tempfile::TempDir, name: &str) -> String {
    dir.path().join(name).to_str().unwrap().to_string()
}

#[test]
fn simulate_writes_distribution_and_summary() {
    let dir = tempfile::tempdir().unwrap();
    let o = out(&dir, "run");
    let r = qwm(&["simulate", "--config", &config("pi2-gc2.toml"), "--out", &o]);
    assert!(r.status.success(), "{}", String::from_utf8_lossy(&r.stderr));
    let summary = json(dir.path().join("run/summary.json"));
    let run = &summary["runs"][0];
    assert_eq!(run["checks"]["pass"], true);
    let total: f64 = run["final_distribution"].as_array().unwrap().iter().map(|p| p[1].as_f64().unwrap()).sum();
    assert!((total - 1.0).abs() < 1e-12);
    let csv = std::fs::read_to_string(dir.path().join("run/distribution_seed0.csv")).unwrap();
    assert!(csv.starts_with("t,x,p\n0,"));
}

#[test]
fn embedded_spec_reproduces_the_run() {
    let dir = tempfile::tempdir().unwrap();
    let first = out(&dir, "first");
    assert!(qwm(&["simulate", "--config", &config("random-gc1.toml"), "--t-max", "40", "--out", &first])
        .status
        .success());
    let summary = json(dir.path().join("first/summary.json"));
    let spec_path = dir.path().join("spec.json");
    std::fs::write(&spec_path, serde_json::to_vec(&summary["runs"][0]["spec"]).unwrap()).unwrap();
    let second = out(&dir, "second");
    assert!(qwm(&["simulate", "--config", spec_path.to_str().unwrap(), "--out", &second]).status.success());
    for file in ["summary.json", "distribution_seed7.csv"] {
        assert_eq!(
            std::fs::read(dir.path().join("first").join(file)).unwrap(),
            std::fs::read(dir.path().join("second").join(file)).unwrap(),
            "{file}"
        );
    }
}

#[test]
fn one_seed_sweep_matches_simulate() {
    let dir = tempfile::tempdir().unwrap();
    let template = dir.path().join("one.toml");
    std::fs::write(&template, "classes = [\"pi3/gc1\"]\n").unwrap();
    let (sweep, sim) = (out(&dir, "sweep"), out(&dir, "sim"));
    let common = ["--seeds", "4", "--t-max", "60"];
    assert!(qwm(&[&["sweep", "--config", template.to_str().unwrap(), "--out", &sweep][..], &common].concat())
        .status
        .success());
    assert!(qwm(&[&["simulate", "--config", &config("random-gc1.toml"), "--out", &sim][..], &common].concat())
        .status
        .success());
    let swept = &json(dir.path().join("sweep/sweep.json"))["classes"][0];
    let run = &json(dir.path().join("sim/summary.json"))["runs"][0];
    assert_eq!(swept["mean_variance"], run["variance"]);
    assert_eq!(swept["mean_occupancy"], run["occupancy"]);
    assert_eq!(swept["mean_origin"], run["origin"]);
}

#[test]
fn carried_coin_on_non_dicycle_partition_is_a_constraint_violation() {
    let dir = tempfile::tempdir().unwrap();
    let spec = dir.path().join("bad.toml");
    std::fs::write(
        &spec,
        "t_max = 10\ninitial_preset = \"origin\"\n[partition]\nkind = \"pi1\"\n[coin_shift]\nkind = \"gc2\"\n",
    )
    .unwrap();
    let o = out(&dir, "never");
    let r = qwm(&["simulate", "--config", spec.to_str().unwrap(), "--out", &o]);
    assert_eq!(r.status.code(), Some(3));
    assert!(!Path::new(&o).exists());
}

#[test]
fn invalid_specs_exit_with_two() {
    let dir = tempfile::tempdir().unwrap();
    let o = out(&dir, "never");
    let unknown = dir.path().join("unknown.toml");
    std::fs::write(&unknown, "t_max = 10\n[partition]\nkind = \"pi9\"\n[coin_shift]\nkind = \"gc1\"\n").unwrap();
    let no_state = dir.path().join("empty.toml");
    std::fs::write(&no_state, "t_max = 10\n[partition]\nkind = \"pi2\"\n[coin_shift]\nkind = \"gc1\"\n").unwrap();
    for args in [
        vec!["simulate", "--config", unknown.to_str().unwrap(), "--out", &o],
        vec!["simulate", "--config", no_state.to_str().unwrap(), "--out", &o],
        vec!["simulate", "--out", &o],
        vec!["sweep", "--out", &o, "--workers", "0"],
        vec!["sweep", "--out", &o, "--seeds", "x"],
        vec!["equivalence", "--config", unknown.to_str().unwrap(), "--out", &o],
    ] {
        assert_eq!(qwm(&args).status.code(), Some(2), "{args:?}");
    }
    assert!(!Path::new(&o).exists());
}

#[test]
fn equivalence_passes() {
    let dir = tempfile::tempdir().unwrap();
    let o = out(&dir, "eq");
    let r = qwm(&["equivalence", "--out", &o, "--t-max", "40", "--seeds", "0..3"]);
    assert!(r.status.success(), "{}", String::from_utf8_lossy(&r.stderr));
    let report = json(dir.path().join("eq/equivalence.json"));
    assert_eq!(report["pass"], true);
}

#[test]
fn depth_two_config_runs() {
    let dir = tempfile::tempdir().unwrap();
    let o = out(&dir, "d2");
    let r = qwm(&["simulate", "--config", &config("depth-two.toml"), "--t-max", "30", "--out", &o]);
    assert!(r.status.success(), "{}", String::from_utf8_lossy(&r.stderr));
    assert_eq!(json(dir.path().join("d2/summary.json"))["runs"][0]["spec"]["d"], 2);
}

#[test]
fn enumerate_without_seeds() {
    let dir = tempfile::tempdir().unwrap();
    let o = out(&dir, "en");
    let r = qwm(&["enumerate", "--out", &o, "--seeds", ""]);
    assert!(r.status.success(), "{}", String::from_utf8_lossy(&r.stderr));
    assert_eq!(json(dir.path().join("en/enumerate.json"))["pass"], true);
}
