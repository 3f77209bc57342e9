pub mod enumerate;
pub mod equivalence;
pub mod simulate;
pub mod sweep;

use qwm_core::experiment::ExperimentOutput;
use qwm_core::UNITARY_TOL;
use serde::Serialize;

/// Norm and wrap checks of one run.
#[derive(Debug, Clone, Serialize)]
pub struct RunChecks {
    pub max_norm_drift: f64,
    pub edge_probability: f64,
    pub pass: bool,
}

impl RunChecks {
    pub fn of(out: &ExperimentOutput) -> Self {
        Self {
            max_norm_drift: out.max_norm_drift,
            edge_probability: out.edge_probability,
            pass: out.max_norm_drift < UNITARY_TOL && out.edge_probability == 0.0,
        }
    }
}
