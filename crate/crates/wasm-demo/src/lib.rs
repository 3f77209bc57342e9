//! Browser bindings. Every export takes plain numbers or strings and
//! returns a JSON string; the page does all drawing.

use qwm_core::analysis::{count_distinct_dicycle_gc2_walks, reflect_transmit_equivalence};
use qwm_core::experiment::{ExperimentSpec, InitialPreset, WalkClass};
use serde::Serialize;
use wasm_bindgen::prelude::*;

/// Upper bound on `t_max` accepted from the page.
pub const MAX_STEPS: usize = 400;

#[derive(Serialize)]
struct WalkResult {
    class: WalkClass,
    seed: u64,
    t_max: usize,
    final_distribution: Vec<(i64, f64)>,
    variance: Vec<f64>,
    occupancy: Vec<f64>,
    origin: Vec<f64>,
    max_norm_drift: f64,
}

fn parse<T: serde::de::DeserializeOwned>(what: &str, name: &str) -> Result<T, String> {
    serde_json::from_value(serde_json::Value::String(name.into())).map_err(|_| format!("unknown {what} '{name}'"))
}

fn check_steps(t_max: usize) -> Result<(), String> {
    if t_max == 0 || t_max > MAX_STEPS {
        return Err(format!("t_max must be in 1..={MAX_STEPS}"));
    }
    Ok(())
}

/// Runs one walk class on the line and returns its statistics.
pub fn simulate_json(class: &str, preset: &str, seed: u64, t_max: usize) -> Result<String, String> {
    check_steps(t_max)?;
    let class: WalkClass = parse("class", class)?;
    let preset: InitialPreset = parse("preset", preset)?;
    let resolved = ExperimentSpec::for_class(class, seed, t_max, preset).resolve().map_err(|e| e.to_string())?;
    let out = resolved.run().map_err(|e| e.to_string())?;
    let result = WalkResult {
        class,
        seed,
        t_max,
        final_distribution: out.distributions.last().map(|d| d.iter().collect()).unwrap_or_default(),
        variance: out.variance,
        occupancy: out.occupancy,
        origin: out.origin,
        max_norm_drift: out.max_norm_drift,
    };
    serde_json::to_string(&result).map_err(|e| e.to_string())
}

/// Compares the reflect/transmit walk with the memoryless Hadamard walk.
pub fn equivalence_json(t_max: usize) -> Result<String, String> {
    check_steps(t_max)?;
    let report = reflect_transmit_equivalence(t_max).map_err(|e| e.to_string())?;
    serde_json::to_string(&report).map_err(|e| e.to_string())
}

/// Groups seeds `0..n_seeds` of random dicycle factorizations with the
/// carried coin by the distribution histories they produce.
pub fn distinct_walks_json(n_seeds: u64, t: usize) -> Result<String, String> {
    check_steps(t)?;
    if n_seeds == 0 || n_seeds > 200 {
        return Err("number of seeds must be in 1..=200".into());
    }
    let seeds: Vec<u64> = (0..n_seeds).collect();
    let report = count_distinct_dicycle_gc2_walks(&seeds, t).map_err(|e| e.to_string())?;
    serde_json::to_string(&report).map_err(|e| e.to_string())
}

#[wasm_bindgen]
pub fn simulate(class: &str, preset: &str, seed: u32, t_max: u32) -> Result<String, JsValue> {
    simulate_json(class, preset, seed.into(), t_max as usize).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen]
pub fn equivalence(t_max: u32) -> Result<String, JsValue> {
    equivalence_json(t_max as usize).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen]
pub fn distinct_walks(n_seeds: u32, t: u32) -> Result<String, JsValue> {
    distinct_walks_json(n_seeds.into(), t as usize).map_err(|e| JsValue::from_str(&e))
}
