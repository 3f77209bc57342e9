use qwm_core::analysis::{classify_scaling, ScalingFit, ScalingVerdict};
use qwm_core::calibration::{
    expected_regime, late_origin_average, ratio_band, OCCUPANCY_TIMES, STUDY_PRESET, STUDY_T_MAX,
};
use qwm_core::experiment::{
    scaling_window, CoinSpec, ExperimentSpec, GraphSpec, InitialEntry, InitialPreset, OutputKind, WalkClass,
};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::simulate::RunSummary;
use crate::error::CliError;
use crate::output::{prepare_dir, write_json, write_rows};
use crate::Common;

const DEFAULT_SEEDS: u64 = 20;

/// Everything a sweep shares across classes and seeds. Absent fields fall
/// back to the six-class study on the line.
#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepTemplate {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub classes: Option<Vec<WalkClass>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub graph: Option<GraphSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub d: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub coin: Option<CoinSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub initial_preset: Option<InitialPreset>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub initial_state: Vec<InitialEntry>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub t_max: Option<usize>,
}

impl SweepTemplate {
    fn spec(&self, class: WalkClass, seed: u64) -> ExperimentSpec {
        let t_max = self.t_max.unwrap_or(STUDY_T_MAX);
        let mut s = ExperimentSpec::for_class(class, seed, t_max, self.initial_preset.unwrap_or(STUDY_PRESET));
        if let Some(g) = &self.graph {
            s.graph = g.clone();
        }
        if let Some(d) = self.d {
            s.d = d;
        }
        if let Some(c) = &self.coin {
            s.coin = c.clone();
        }
        s.initial_state = self.initial_state.clone();
        s.outputs = vec![OutputKind::Variance, OutputKind::Occrate, OutputKind::OriginSeries, OutputKind::ScalingFit];
        s
    }
}

#[derive(Serialize)]
struct Report {
    command: &'static str,
    template: SweepTemplate,
    seeds: Vec<u64>,
    classes: Vec<ClassReport>,
}

#[derive(Serialize)]
struct ClassReport {
    mean_variance: Vec<f64>,
    mean_occupancy: Vec<f64>,
    mean_origin: Vec<f64>,
    #[serde(flatten)]
    row: TableRow,
    mean_scaling_fit: Option<ScalingFit>,
    per_seed: Vec<RunSummary>,
}

/// One line of the class comparison table.
#[derive(Debug, Clone, Serialize)]
struct TableRow {
    class: String,
    expected_regime: ScalingVerdict,
    /// Seed-averaged `variance(t_max) / variance(t_max / 2)`.
    variance_ratio: Option<f64>,
    ratio_regime: ScalingVerdict,
    fit_regime: Option<ScalingVerdict>,
    /// Smallest `OccRate(2t + 1, t)` over seeds at the checked times.
    min_occupancy: Option<f64>,
    /// Seed-averaged late-time even-step origin probability.
    late_origin: Option<f64>,
    regime_matches: bool,
}

fn mean(series: &[&Vec<f64>]) -> Vec<f64> {
    let n = series.len() as f64;
    let len = series.first().map_or(0, |s| s.len());
    (0..len).map(|t| series.iter().map(|s| s[t]).sum::<f64>() / n).collect()
}

fn ratio_regime(ratio: Option<f64>) -> ScalingVerdict {
    let inside = |r: f64, regime| ratio_band(regime).is_some_and(|(lo, hi)| (lo..=hi).contains(&r));
    match ratio {
        Some(r) if inside(r, ScalingVerdict::Ballistic) => ScalingVerdict::Ballistic,
        Some(r) if inside(r, ScalingVerdict::Diffusive) => ScalingVerdict::Diffusive,
        _ => ScalingVerdict::Indeterminate,
    }
}

pub fn run(args: &Common) -> Result<String, CliError> {
    let template: SweepTemplate = match &args.config {
        Some(path) => crate::config::load(path)?,
        None => SweepTemplate::default(),
    };
    let mut template = template;
    if let Some(t) = args.t_max {
        template.t_max = Some(t);
    }
    let classes = template.classes.clone().unwrap_or_else(|| WalkClass::ALL.to_vec());
    // Record every default so the embedded template alone reproduces the run.
    template.classes = Some(classes.clone());
    template.t_max = Some(template.t_max.unwrap_or(STUDY_T_MAX));
    template.d = Some(template.d.unwrap_or(1));
    if template.initial_state.is_empty() {
        template.initial_preset = Some(template.initial_preset.unwrap_or(STUDY_PRESET));
    }
    let seeds = args.seeds().unwrap_or_else(|| (0..DEFAULT_SEEDS).collect());

    let jobs = classes
        .iter()
        .flat_map(|&c| seeds.iter().map(move |&s| (c, s)))
        .map(|(c, s)| template.spec(c, s).resolve().map_err(CliError::from))
        .collect::<Result<Vec<_>, _>>()?;
    let pool = args.pool()?;
    let outputs = pool.install(|| jobs.par_iter().map(|r| r.run()).collect::<Vec<_>>());
    let outputs = outputs.into_iter().collect::<Result<Vec<_>, _>>()?;

    let mut reports = Vec::with_capacity(classes.len());
    let mut failed = Vec::new();
    for (ci, &class) in classes.iter().enumerate() {
        let range = ci * seeds.len()..(ci + 1) * seeds.len();
        let runs: Vec<_> = jobs[range.clone()].iter().zip(&outputs[range]).collect();
        let per_seed: Vec<RunSummary> = runs.iter().map(|(r, o)| RunSummary::new(r, o, None)).collect();
        failed.extend(per_seed.iter().filter(|r| !r.checks.pass).map(|r| format!("{class} seed {}", r.seed)));

        let mean_variance = mean(&runs.iter().map(|(_, o)| &o.variance).collect::<Vec<_>>());
        let mean_occupancy = mean(&runs.iter().map(|(_, o)| &o.occupancy).collect::<Vec<_>>());
        let mean_origin = mean(&runs.iter().map(|(_, o)| &o.origin).collect::<Vec<_>>());
        let t_max = mean_variance.len().saturating_sub(1);
        let variance_ratio = (t_max >= 2 && !runs.is_empty()).then(|| mean_variance[t_max] / mean_variance[t_max / 2]);
        let mean_scaling_fit = scaling_window(t_max)
            .filter(|_| !runs.is_empty())
            .and_then(|(t1, t2)| classify_scaling(&(t1..=t2).map(|t| (t, mean_variance[t])).collect::<Vec<_>>()).ok());
        let checked: Vec<usize> = OCCUPANCY_TIMES.into_iter().filter(|&t| t <= t_max).collect();
        let min_occupancy = runs.iter().flat_map(|(_, o)| checked.iter().map(|&t| o.occupancy[t])).reduce(f64::min);
        let late: Vec<f64> = runs.iter().filter_map(|(_, o)| late_origin_average(&o.origin)).collect();
        let late_origin =
            (!late.is_empty() && late.len() == runs.len()).then(|| late.iter().sum::<f64>() / late.len() as f64);
        let regime = ratio_regime(variance_ratio);
        let row = TableRow {
            class: class.name().to_string(),
            expected_regime: expected_regime(class),
            variance_ratio,
            ratio_regime: regime,
            fit_regime: mean_scaling_fit.map(|f| f.verdict),
            min_occupancy,
            late_origin,
            regime_matches: regime == expected_regime(class),
        };
        reports.push(ClassReport { mean_variance, mean_occupancy, mean_origin, row, mean_scaling_fit, per_seed });
    }

    prepare_dir(&args.out)?;
    let table: Vec<TableRow> = reports.iter().map(|r| r.row.clone()).collect();
    write_rows(
        &args.out,
        "sweep_table.csv",
        &[
            "class",
            "expected_regime",
            "variance_ratio",
            "ratio_regime",
            "fit_regime",
            "min_occupancy",
            "late_origin",
            "regime_matches",
        ],
        &table,
    )?;
    let series: Vec<(String, usize, f64, f64, f64)> = reports
        .iter()
        .flat_map(|r| {
            (0..r.mean_variance.len())
                .map(|t| (r.row.class.clone(), t, r.mean_variance[t], r.mean_occupancy[t], r.mean_origin[t]))
        })
        .collect();
    write_rows(&args.out, "sweep_series.csv", &["class", "t", "variance", "occupancy", "origin"], &series)?;
    write_json(
        &args.out,
        "sweep.json",
        &Report { command: "sweep", template, seeds: seeds.clone(), classes: reports },
    )?;
    if !failed.is_empty() {
        return Err(CliError::Numerical(format!("norm or wrap check failed: {}", failed.join(", "))));
    }

    let mut text = format!("sweep: {} class(es) x {} seed(s)\n", classes.len(), seeds.len());
    text.push_str("class      expected       ratio   regime         min_occ  late_P0\n");
    for r in &table {
        let opt = |v: Option<f64>| v.map_or("-".to_string(), |x| format!("{x:.4}"));
        text.push_str(&format!(
            "{:<10} {:<14} {:>7} {:<14} {:>8} {:>8}\n",
            r.class,
            format!("{:?}", r.expected_regime),
            opt(r.variance_ratio),
            format!("{:?}", r.ratio_regime),
            opt(r.min_occupancy),
            opt(r.late_origin)
        ));
    }
    Ok(text.trim_end().to_string())
}
