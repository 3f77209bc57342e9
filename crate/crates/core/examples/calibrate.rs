//! Prints the statistics behind the constants in `qwm_core::calibration`:
//! seed-averaged variance ratios, worst-seed occupancy rates and late-time
//! origin probabilities for the six walk classes.
//!
//! cargo run --release -p qwm-core --example calibrate [preset]

use qwm_core::calibration::late_origin_average;
use qwm_core::experiment::{ExperimentSpec, InitialPreset, WalkClass};

fn main() {
    let preset = match std::env::args().nth(1).as_deref() {
        Some("symmetric") => InitialPreset::Symmetric,
        Some("origin") => InitialPreset::Origin,
        Some("balanced") => InitialPreset::Balanced,
        _ => qwm_core::calibration::STUDY_PRESET,
    };
    let seeds: Vec<u64> = (0..20).collect();
    println!("preset {preset:?}, {} seeds, t_max 200", seeds.len());
    println!(
        "{:<8} {:>8} {:>8} {:>8} {:>8} {:>8} {:>8}  verdict",
        "class", "v100", "v200", "ratio", "occ50", "occ100", "occ200"
    );
    for class in WalkClass::ALL {
        let mut v100 = 0.0;
        let mut v200 = 0.0;
        let mut occ = [f64::INFINITY; 3];
        let mut origin_late = 0.0;
        let mut origin_min: f64 = f64::INFINITY;
        let mut verdicts = Vec::new();
        let runs = if class.is_random() { seeds.len() } else { 1 };
        for &seed in &seeds[..runs] {
            let out = ExperimentSpec::for_class(class, seed, 200, preset).resolve().unwrap().run().unwrap();
            v100 += out.variance[100];
            v200 += out.variance[200];
            for (slot, t) in [50, 100, 200].into_iter().enumerate() {
                occ[slot] = occ[slot].min(out.occupancy[t]);
            }
            let avg = late_origin_average(&out.origin).unwrap();
            origin_late += avg;
            origin_min = origin_min.min(avg);
            verdicts.push(format!("{:?}", out.scaling.unwrap().verdict));
        }
        let n = runs as f64;
        verdicts.sort();
        verdicts.dedup();
        println!(
            "{:<8} {:>8.2} {:>8.2} {:>8.3} {:>8.4} {:>8.4} {:>8.4}  origin(avg {:.4}, min {:.4}) {:?}",
            class.name(),
            v100 / n,
            v200 / n,
            v200 / v100,
            occ[0],
            occ[1],
            occ[2],
            origin_late / n,
            origin_min,
            verdicts
        );
    }
}
