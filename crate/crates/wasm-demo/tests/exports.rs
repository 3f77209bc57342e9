use qwm_wasm::{distinct_walks_json, equivalence_json, simulate_json};
use serde_json::Value;

#[test]
fn simulate_returns_normalized_distribution() {
    let v: Value = serde_json::from_str(&simulate_json("pi2/gc1", "balanced", 0, 40).unwrap()).unwrap();
    assert_eq!(v["class"], "pi2/gc1");
    let total: f64 = v["final_distribution"].as_array().unwrap().iter().map(|p| p[1].as_f64().unwrap()).sum();
    assert!((total - 1.0).abs() < 1e-12);
    assert_eq!(v["variance"].as_array().unwrap().len(), 41);
    assert!(v["max_norm_drift"].as_f64().unwrap() < 1e-12);
}

#[test]
fn simulate_rejects_bad_input() {
    assert!(simulate_json("pi7/gc1", "balanced", 0, 10).unwrap_err().contains("class"));
    assert!(simulate_json("pi2/gc1", "sideways", 0, 10).unwrap_err().contains("preset"));
    assert!(simulate_json("pi2/gc1", "balanced", 0, 0).is_err());
    assert!(simulate_json("pi2/gc1", "balanced", 0, 10_000).is_err());
}

#[test]
fn equivalence_passes() {
    let v: Value = serde_json::from_str(&equivalence_json(30).unwrap()).unwrap();
    assert_eq!(v["pass"], true);
}

#[test]
fn distinct_walks_report() {
    let v: Value = serde_json::from_str(&distinct_walks_json(12, 10).unwrap()).unwrap();
    assert_eq!(v["seeds"].as_array().unwrap().len(), 12);
    assert!(v["n_classes"].as_u64().unwrap() >= 1);
    assert!(distinct_walks_json(0, 10).is_err());
}
