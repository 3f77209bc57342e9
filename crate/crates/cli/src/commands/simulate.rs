use qwm_core::analysis::ScalingFit;
use qwm_core::experiment::{ExperimentOutput, ExperimentSpec, OutputKind, ResolvedExperiment};
use rayon::prelude::*;
use serde::Serialize;

use super::RunChecks;
use crate::error::CliError;
use crate::output::{prepare_dir, write_distributions, write_json};
use crate::Common;

#[derive(Serialize)]
struct Summary {
    command: &'static str,
    seeds: Vec<u64>,
    runs: Vec<RunSummary>,
}

#[derive(Serialize)]
pub struct RunSummary {
    pub seed: u64,
    /// Fully resolved spec; feeding it back to `simulate` reproduces this run.
    pub spec: ExperimentSpec,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub distribution_file: Option<String>,
    /// `(x, P(x))` at `t_max`.
    pub final_distribution: Vec<(i64, f64)>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub variance: Option<Vec<f64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub occupancy: Option<Vec<f64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub origin: Option<Vec<f64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub scaling_fit: Option<ScalingFit>,
    pub checks: RunChecks,
}

impl RunSummary {
    pub fn new(r: &ResolvedExperiment, out: &ExperimentOutput, distribution_file: Option<String>) -> Self {
        let spec = &r.spec;
        let pick = |kind, series: &Vec<f64>| spec.wants(kind).then(|| series.clone());
        Self {
            seed: spec.seed,
            spec: spec.clone(),
            distribution_file,
            final_distribution: out.distributions.last().map(|d| d.iter().collect()).unwrap_or_default(),
            variance: pick(OutputKind::Variance, &out.variance),
            occupancy: pick(OutputKind::Occrate, &out.occupancy),
            origin: pick(OutputKind::OriginSeries, &out.origin),
            scaling_fit: if spec.wants(OutputKind::ScalingFit) { out.scaling } else { None },
            checks: RunChecks::of(out),
        }
    }
}

/// Resolves every seed's spec before any run starts, so a bad spec leaves
/// no partial output behind.
pub fn run(args: &Common) -> Result<String, CliError> {
    let path = args.config.as_ref().ok_or_else(|| CliError::Spec("simulate needs --config".into()))?;
    let mut spec: ExperimentSpec = crate::config::load(path)?;
    if let Some(t) = args.t_max {
        spec.t_max = t;
    }
    let seeds = args.seeds().unwrap_or_else(|| vec![spec.seed]);
    let resolved = seeds
        .iter()
        .map(|&seed| {
            let mut s = spec.clone();
            s.seed = seed;
            if args.seeds.is_some() && s.partition.kind.is_random() {
                s.partition.seed = Some(seed);
            }
            s.resolve().map_err(CliError::from)
        })
        .collect::<Result<Vec<_>, _>>()?;

    let pool = args.pool()?;
    let outputs = pool.install(|| resolved.par_iter().map(|r| r.run()).collect::<Vec<_>>());
    let outputs = outputs.into_iter().collect::<Result<Vec<_>, _>>()?;

    prepare_dir(&args.out)?;
    let mut runs = Vec::with_capacity(resolved.len());
    for (r, out) in resolved.iter().zip(&outputs) {
        let file = r.spec.wants(OutputKind::Distribution).then(|| format!("distribution_seed{}.csv", r.spec.seed));
        if let Some(name) = &file {
            write_distributions(&args.out, name, &out.distributions)?;
        }
        runs.push(RunSummary::new(r, out, file));
    }
    let failed: Vec<u64> = runs.iter().filter(|r| !r.checks.pass).map(|r| r.seed).collect();
    write_json(&args.out, "summary.json", &Summary { command: "simulate", seeds, runs })?;
    if !failed.is_empty() {
        return Err(CliError::Numerical(format!("norm or wrap check failed for seeds {failed:?}")));
    }
    Ok(format!("simulate: {} run(s) written to {}", outputs.len(), args.out.display()))
}
