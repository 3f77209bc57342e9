//! Frozen thresholds for the six-class study on the line with one step of
//! memory. The values come from `examples/calibrate.rs` and are fixed here
//! so that later runs are judged against the same numbers.

use crate::analysis::ScalingVerdict;
use crate::experiment::{InitialPreset, WalkClass};

/// Initial state used for the six-class study.
pub const STUDY_PRESET: InitialPreset = InitialPreset::Balanced;
/// Horizon of the six-class study.
pub const STUDY_T_MAX: usize = 200;

/// Accepted band for the seed-averaged `variance(200) / variance(100)` of a
/// ballistic class.
pub const BALLISTIC_RATIO: (f64, f64) = (3.4, 4.6);
/// Accepted band for the same ratio of a diffusive class.
pub const DIFFUSIVE_RATIO: (f64, f64) = (1.5, 2.8);

/// Lower bound on `OccRate(2t + 1, t)` for every class and seed.
pub const OCCUPANCY_FLOOR: f64 = 0.02;
/// Times at which the occupancy floor is checked.
pub const OCCUPANCY_TIMES: [usize; 3] = [50, 100, 200];

/// Late-time window for the origin probability, averaged over even steps.
pub const LATE_WINDOW: (usize, usize) = (150, 200);
/// A class does not localize when its late origin average stays below this.
pub const NO_LOCALIZATION_CEILING: f64 = 0.05;
/// A class localizes when its late origin average stays above this.
pub const LOCALIZATION_FLOOR: f64 = 0.10;

/// Upper bound on distinct walks from random dicycle factorizations with
/// the carried coin, started at position 0.
pub const MAX_DISTINCT_DICYCLE_WALKS: usize = 8;

/// Regime each class is expected to show over the study horizon.
pub fn expected_regime(class: WalkClass) -> ScalingVerdict {
    match class {
        WalkClass::Pi3Gc1 | WalkClass::Pi4Gc1 => ScalingVerdict::Diffusive,
        _ => ScalingVerdict::Ballistic,
    }
}

/// Band for [`expected_regime`].
pub fn ratio_band(regime: ScalingVerdict) -> Option<(f64, f64)> {
    match regime {
        ScalingVerdict::Ballistic => Some(BALLISTIC_RATIO),
        ScalingVerdict::Diffusive => Some(DIFFUSIVE_RATIO),
        ScalingVerdict::Indeterminate => None,
    }
}

/// Mean of `origin[t]` over even `t` in [`LATE_WINDOW`].
pub fn late_origin_average(origin: &[f64]) -> Option<f64> {
    let (lo, hi) = LATE_WINDOW;
    let samples: Vec<f64> = (lo..=hi).step_by(2).filter_map(|t| origin.get(t).copied()).collect();
    (samples.len() == (hi - lo) / 2 + 1).then(|| samples.iter().sum::<f64>() / samples.len() as f64)
}

const _: () = assert!(DIFFUSIVE_RATIO.1 < BALLISTIC_RATIO.0 && NO_LOCALIZATION_CEILING < LOCALIZATION_FLOOR);
