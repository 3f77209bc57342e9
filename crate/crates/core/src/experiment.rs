//! Experiment descriptions, the six named walk classes, and a runner that
//! turns a description into statistic series.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::analysis::{
    classify_scaling, occupancy_rate, origin_probability_series, position_marginal, variance, PositionDistribution,
    ScalingFit,
};
use crate::coin::{coin_from_label, CoinMatrix};
use crate::coin_shift::{gc1, gc2, CoinShift};
use crate::error::{QwmError, Result};
use crate::graph::{iterate_line_digraph, label_of_coordinate, make_bidirected_cycle, no_wrap_window, LineDigraph};
use crate::partition::{named_partition, random_dicycle_factorization, random_partition, NamedPartition, Partition};
use crate::walk::{check_no_wrap, Walk, WalkState};

/// The partition / coin-shift combinations compared on the line.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum WalkClass {
    #[serde(rename = "pi1/gc1")]
    Pi1Gc1,
    #[serde(rename = "pi2/gc1")]
    Pi2Gc1,
    #[serde(rename = "pi2/gc2")]
    Pi2Gc2,
    #[serde(rename = "pi3/gc1")]
    Pi3Gc1,
    #[serde(rename = "pi4/gc1")]
    Pi4Gc1,
    #[serde(rename = "pi4/gc2")]
    Pi4Gc2,
}

impl WalkClass {
    pub const ALL: [WalkClass; 6] = [
        WalkClass::Pi1Gc1,
        WalkClass::Pi2Gc1,
        WalkClass::Pi2Gc2,
        WalkClass::Pi3Gc1,
        WalkClass::Pi4Gc1,
        WalkClass::Pi4Gc2,
    ];

    pub fn name(self) -> &'static str {
        match self {
            WalkClass::Pi1Gc1 => "pi1/gc1",
            WalkClass::Pi2Gc1 => "pi2/gc1",
            WalkClass::Pi2Gc2 => "pi2/gc2",
            WalkClass::Pi3Gc1 => "pi3/gc1",
            WalkClass::Pi4Gc1 => "pi4/gc1",
            WalkClass::Pi4Gc2 => "pi4/gc2",
        }
    }

    pub fn partition_kind(self) -> PartitionKind {
        match self {
            WalkClass::Pi1Gc1 => PartitionKind::Pi1,
            WalkClass::Pi2Gc1 | WalkClass::Pi2Gc2 => PartitionKind::Pi2,
            WalkClass::Pi3Gc1 => PartitionKind::Random,
            WalkClass::Pi4Gc1 | WalkClass::Pi4Gc2 => PartitionKind::RandomDicycle,
        }
    }

    pub fn coin_shift_kind(self) -> CoinShiftKind {
        match self {
            WalkClass::Pi2Gc2 | WalkClass::Pi4Gc2 => CoinShiftKind::Gc2,
            _ => CoinShiftKind::Gc1,
        }
    }

    pub fn is_random(self) -> bool {
        self.partition_kind().is_random()
    }
}

impl fmt::Display for WalkClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for WalkClass {
    type Err = QwmError;

    fn from_str(s: &str) -> Result<Self> {
        WalkClass::ALL
            .into_iter()
            .find(|c| c.name() == s)
            .ok_or_else(|| QwmError::InvalidState(format!("unknown walk class {s:?}")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum GraphFamily {
    /// Odd bidirected cycle large enough that nothing wraps before `t_max`.
    Line,
    /// Bidirected cycle of exactly `window` vertices; wrapping is allowed.
    Cycle,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphSpec {
    pub family: GraphFamily,
    /// Number of base vertices; chosen from the horizon when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub window: Option<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PartitionKind {
    Pi1,
    Pi2,
    Random,
    RandomDicycle,
}

impl PartitionKind {
    pub fn is_random(self) -> bool {
        matches!(self, PartitionKind::Random | PartitionKind::RandomDicycle)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PartitionSpec {
    pub kind: PartitionKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CoinShiftKind {
    Gc1,
    Gc2,
    Table,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoinShiftSpec {
    pub kind: CoinShiftKind,
    /// `(vertex, in-coin, out-coin)` triples, used with `kind = "table"`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub table: Option<Vec<(usize, i64, i64)>>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CoinKind {
    Hadamard,
    Matrix,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CoinSpec {
    pub kind: CoinKind,
    /// Row-major `[re, im]` entries, used with `kind = "matrix"`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub matrix: Option<Vec<Vec<[f64; 2]>>>,
}

/// One term of the initial state: a path tuple in centered coordinates,
/// a coin label and a complex amplitude `[re, im]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InitialEntry {
    pub path: Vec<i64>,
    pub coin: i64,
    pub amplitude: [f64; 2],
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum InitialPreset {
    /// `|(-1,0)>|+1>`: one basis state at the origin, memory "came from the left".
    Origin,
    /// `1/2 (|-1,0>|+1> - |-1,0>|-1> - |1,0>|+1> + |1,0>|-1>)`.
    Symmetric,
    /// Both arrival directions and both coins with equal weight,
    /// `1/2 (|-1,0> + |1,0>)(|+1> + i|-1>)`.
    Balanced,
}

impl InitialPreset {
    /// Entries for a memory depth of 1 (memory tuples are padded on the
    /// left with straight-line history for deeper walks).
    pub fn entries(self, d: usize) -> Vec<InitialEntry> {
        let raw: Vec<(i64, i64, [f64; 2])> = match self {
            InitialPreset::Origin => vec![(-1, 1, [1.0, 0.0])],
            InitialPreset::Symmetric => {
                vec![(-1, 1, [0.5, 0.0]), (-1, -1, [-0.5, 0.0]), (1, 1, [-0.5, 0.0]), (1, -1, [0.5, 0.0])]
            }
            InitialPreset::Balanced => {
                vec![(-1, 1, [0.5, 0.0]), (-1, -1, [0.0, 0.5]), (1, 1, [0.5, 0.0]), (1, -1, [0.0, 0.5])]
            }
        };
        raw.into_iter()
            .map(|(from, coin, amplitude)| {
                let path = if d == 0 { vec![0] } else { (0..=d as i64).map(|i| from * (d as i64 - i)).collect() };
                InitialEntry { path, coin, amplitude }
            })
            .collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum OutputKind {
    Distribution,
    Variance,
    Occrate,
    OriginSeries,
    ScalingFit,
}

impl OutputKind {
    pub const ALL: [OutputKind; 5] = [
        OutputKind::Distribution,
        OutputKind::Variance,
        OutputKind::Occrate,
        OutputKind::OriginSeries,
        OutputKind::ScalingFit,
    ];
}

fn default_outputs() -> Vec<OutputKind> {
    OutputKind::ALL.to_vec()
}

fn default_coin() -> CoinSpec {
    CoinSpec { kind: CoinKind::Hadamard, matrix: None }
}

fn default_graph() -> GraphSpec {
    GraphSpec { family: GraphFamily::Line, window: None }
}

fn default_depth() -> usize {
    1
}

/// Full description of one run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentSpec {
    #[serde(default = "default_graph")]
    pub graph: GraphSpec,
    #[serde(default = "default_depth")]
    pub d: usize,
    pub partition: PartitionSpec,
    pub coin_shift: CoinShiftSpec,
    #[serde(default = "default_coin")]
    pub coin: CoinSpec,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub initial_preset: Option<InitialPreset>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub initial_state: Vec<InitialEntry>,
    pub t_max: usize,
    #[serde(default = "default_outputs")]
    pub outputs: Vec<OutputKind>,
    /// Run seed; random partitions without their own seed use it.
    #[serde(default)]
    pub seed: u64,
}

impl ExperimentSpec {
    /// A line experiment for one of the named walk classes.
    pub fn for_class(class: WalkClass, seed: u64, t_max: usize, preset: InitialPreset) -> Self {
        Self {
            graph: default_graph(),
            d: 1,
            partition: PartitionSpec { kind: class.partition_kind(), seed: class.is_random().then_some(seed) },
            coin_shift: CoinShiftSpec { kind: class.coin_shift_kind(), table: None },
            coin: default_coin(),
            initial_preset: Some(preset),
            initial_state: Vec::new(),
            t_max,
            outputs: default_outputs(),
            seed,
        }
    }

    /// Applies a walk class to this spec, keeping everything else.
    pub fn with_class(&self, class: WalkClass, seed: u64) -> Self {
        let mut s = self.clone();
        s.partition = PartitionSpec { kind: class.partition_kind(), seed: class.is_random().then_some(seed) };
        s.coin_shift = CoinShiftSpec { kind: class.coin_shift_kind(), table: None };
        s.seed = seed;
        s
    }

    pub fn wants(&self, kind: OutputKind) -> bool {
        self.outputs.contains(&kind)
    }

    /// Validates everything and builds the walk. Spec problems come back as
    /// [`SpecError::Spec`]; coin-shift/partition mismatches as
    /// [`SpecError::Constraint`].
    pub fn resolve(&self) -> std::result::Result<ResolvedExperiment, SpecError> {
        let mut spec = self.clone();
        if spec.initial_state.is_empty() {
            let preset = spec
                .initial_preset
                .ok_or_else(|| SpecError::Spec("no initial_state entries and no initial_preset".into()))?;
            spec.initial_state = preset.entries(spec.d);
        }
        spec.initial_preset = None;
        if spec.partition.kind.is_random() && spec.partition.seed.is_none() {
            spec.partition.seed = Some(spec.seed);
        }
        if !spec.partition.kind.is_random() {
            spec.partition.seed = None;
        }

        let reach =
            spec.initial_state.iter().flat_map(|e| e.path.iter()).map(|x| x.unsigned_abs() as usize).max().unwrap_or(0);
        let needed = (2 * (reach + spec.t_max) + 3).max(no_wrap_window(spec.t_max, spec.d));
        let window = match (spec.graph.family, spec.graph.window) {
            (GraphFamily::Line, None) => needed | 1,
            (GraphFamily::Line, Some(w)) => {
                if w < needed || w % 2 == 0 {
                    return Err(SpecError::Spec(
                        QwmError::WrapRisk { window: w, required: needed }.to_string() + " (line windows must be odd)",
                    ));
                }
                w
            }
            (GraphFamily::Cycle, Some(w)) => w,
            (GraphFamily::Cycle, None) => return Err(SpecError::Spec("cycle family needs graph.window".into())),
        };
        spec.graph.window = Some(window);

        let base = make_bidirected_cycle(window).map_err(SpecError::spec)?;
        let host = iterate_line_digraph(&base, spec.d).map_err(SpecError::spec)?;
        let g = host.graph();

        let partition = match spec.partition.kind {
            PartitionKind::Pi1 => named_partition(NamedPartition::Pi1, &host),
            PartitionKind::Pi2 => named_partition(NamedPartition::Pi2, &host),
            PartitionKind::Random => Ok(random_partition(g, spec.partition.seed.unwrap_or_default())),
            PartitionKind::RandomDicycle => {
                Ok(random_dicycle_factorization(g, spec.partition.seed.unwrap_or_default()))
            }
        }
        .map_err(SpecError::spec)?;

        let coin = match spec.coin.kind {
            CoinKind::Hadamard => CoinMatrix::hadamard(),
            CoinKind::Matrix => {
                let rows = spec.coin.matrix.as_ref().ok_or_else(|| SpecError::Spec("coin.matrix missing".into()))?;
                CoinMatrix::from_rows(rows).map_err(SpecError::spec)?
            }
        };
        if coin.dim() != g.degree() {
            return Err(SpecError::Spec(format!(
                "coin is {0}x{0} but the graph has degree {1}",
                coin.dim(),
                g.degree()
            )));
        }

        let mut entries = Vec::with_capacity(spec.initial_state.len());
        for e in &spec.initial_state {
            if e.path.len() != spec.d + 1 {
                return Err(SpecError::Spec(format!("initial path {:?} should have {} entries", e.path, spec.d + 1)));
            }
            let labels: Vec<usize> = e.path.iter().map(|&x| label_of_coordinate(x, window)).collect();
            let v = g
                .vertex_of_path(&labels)
                .ok_or_else(|| SpecError::Spec(format!("initial path {:?} is not a walk on the graph", e.path)))?;
            let c = coin_from_label(e.coin, g.degree())
                .ok_or_else(|| SpecError::Spec(format!("coin label {} is invalid", e.coin)))?;
            entries.push((v, c, Complex64::new(e.amplitude[0], e.amplitude[1])));
        }
        let initial = WalkState::from_entries(g.n_vertices(), g.degree(), &entries).map_err(SpecError::spec)?;
        if spec.graph.family == GraphFamily::Line {
            check_no_wrap(g, &initial, spec.t_max).map_err(SpecError::spec)?;
        }

        let gc = match spec.coin_shift.kind {
            CoinShiftKind::Gc1 => gc1(&host, &partition),
            CoinShiftKind::Gc2 => gc2(&partition),
            CoinShiftKind::Table => {
                let triples =
                    spec.coin_shift.table.as_ref().ok_or_else(|| SpecError::Spec("coin_shift.table missing".into()))?;
                CoinShift::from_triples(g.n_vertices(), g.degree(), triples)
            }
        }
        .map_err(SpecError::from_build)?;
        let walk = Walk::new(&partition, &gc, coin).map_err(SpecError::from_build)?;

        Ok(ResolvedExperiment { spec, host, partition, coin_shift: gc, walk, initial })
    }
}

/// Why a spec could not be turned into a walk.
#[derive(Debug, Clone, PartialEq)]
pub enum SpecError {
    Spec(String),
    Constraint(QwmError),
}

impl SpecError {
    fn spec(e: QwmError) -> Self {
        SpecError::Spec(e.to_string())
    }

    fn from_build(e: QwmError) -> Self {
        match e {
            QwmError::ConstraintViolation { .. } => SpecError::Constraint(e),
            other => SpecError::Spec(other.to_string()),
        }
    }
}

impl fmt::Display for SpecError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SpecError::Spec(msg) => write!(f, "invalid experiment spec: {msg}"),
            SpecError::Constraint(e) => write!(f, "{e}"),
        }
    }
}

impl std::error::Error for SpecError {}

/// A validated experiment, ready to run.
#[derive(Debug, Clone)]
pub struct ResolvedExperiment {
    /// The spec with every default, seed and window filled in.
    pub spec: ExperimentSpec,
    pub host: LineDigraph,
    pub partition: Partition,
    pub coin_shift: CoinShift,
    pub walk: Walk,
    pub initial: WalkState,
}

/// Per-step statistics of one run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentOutput {
    pub distributions: Vec<PositionDistribution>,
    pub variance: Vec<f64>,
    /// `OccRate(2t + 1, t)`
    pub occupancy: Vec<f64>,
    pub origin: Vec<f64>,
    pub scaling: Option<ScalingFit>,
    /// Largest `| |psi_t|^2 - 1 |` over the run.
    pub max_norm_drift: f64,
    /// Total probability ever seen at the two window edges.
    pub edge_probability: f64,
}

impl ResolvedExperiment {
    pub fn run(&self) -> Result<ExperimentOutput> {
        let g = self.host.graph();
        let edge = (g.base_coordinates().len() as i64 - 1) / 2;
        let wraps = self.spec.graph.family == GraphFamily::Line;
        let mut distributions = Vec::with_capacity(self.spec.t_max + 1);
        let mut max_norm_drift = 0.0f64;
        let mut edge_probability = 0.0;
        self.walk.evolve_with(&self.initial, self.spec.t_max, |s| {
            max_norm_drift = max_norm_drift.max((s.norm_sqr() - 1.0).abs());
            if wraps {
                for v in 0..g.n_vertices() {
                    if g.path(v).iter().any(|&b| g.base_coordinates()[b].abs() == edge) {
                        edge_probability += (0..g.degree()).map(|c| s.amplitude(v, c).norm_sqr()).sum::<f64>();
                    }
                }
            }
            distributions.push(position_marginal(g, s));
        })?;
        let variance: Vec<f64> = distributions.iter().map(variance).collect();
        let occupancy = distributions.iter().map(|d| occupancy_rate(d, 2 * d.t + 1)).collect::<Result<Vec<f64>>>()?;
        let origin = origin_probability_series(&distributions);
        let scaling = scaling_window(self.spec.t_max)
            .map(|(t1, t2)| classify_scaling(&(t1..=t2).map(|t| (t, variance[t])).collect::<Vec<_>>()))
            .transpose()?;
        Ok(ExperimentOutput { distributions, variance, occupancy, origin, scaling, max_norm_drift, edge_probability })
    }
}

/// Fit window `[t_max / 2, t_max]` when it is long enough to classify.
pub fn scaling_window(t_max: usize) -> Option<(usize, usize)> {
    let t1 = (t_max / 2).max(20);
    (t_max >= 2 * t1).then_some((t1, t_max))
}

/// Partition and coin shift of a named class on `host`.
pub fn build_class(host: &LineDigraph, class: WalkClass, seed: u64) -> Result<(Partition, CoinShift)> {
    let g = host.graph();
    let p = match class.partition_kind() {
        PartitionKind::Pi1 => named_partition(NamedPartition::Pi1, host)?,
        PartitionKind::Pi2 => named_partition(NamedPartition::Pi2, host)?,
        PartitionKind::Random => random_partition(g, seed),
        PartitionKind::RandomDicycle => random_dicycle_factorization(g, seed),
    };
    let gc = match class.coin_shift_kind() {
        CoinShiftKind::Gc2 => gc2(&p)?,
        _ => gc1(host, &p)?,
    };
    Ok((p, gc))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn class_names_round_trip() {
        for c in WalkClass::ALL {
            assert_eq!(c.name().parse::<WalkClass>().unwrap(), c);
        }
        assert!("pi1/gc2".parse::<WalkClass>().is_err());
    }

    #[test]
    fn gc2_with_pi1_is_a_constraint_error() {
        let mut spec = ExperimentSpec::for_class(WalkClass::Pi1Gc1, 0, 10, InitialPreset::Origin);
        spec.coin_shift.kind = CoinShiftKind::Gc2;
        assert!(matches!(spec.resolve(), Err(SpecError::Constraint(_))));
    }

    #[test]
    fn small_line_window_rejected() {
        let mut spec = ExperimentSpec::for_class(WalkClass::Pi2Gc2, 0, 10, InitialPreset::Origin);
        spec.graph.window = Some(11);
        assert!(matches!(spec.resolve(), Err(SpecError::Spec(_))));
    }

    #[test]
    fn unnormalized_initial_state_rejected() {
        let mut spec = ExperimentSpec::for_class(WalkClass::Pi2Gc2, 0, 10, InitialPreset::Origin);
        spec.initial_state = vec![InitialEntry { path: vec![-1, 0], coin: 1, amplitude: [0.5, 0.0] }];
        assert!(matches!(spec.resolve(), Err(SpecError::Spec(_))));
    }

    #[test]
    fn resolution_fills_window_and_seed() {
        let spec = ExperimentSpec::for_class(WalkClass::Pi3Gc1, 9, 20, InitialPreset::Balanced);
        let r = spec.resolve().unwrap();
        assert_eq!(r.spec.graph.window, Some(no_wrap_window(20, 1)));
        assert_eq!(r.spec.partition.seed, Some(9));
        assert_eq!(r.spec.initial_state.len(), 4);
        let out = r.run().unwrap();
        assert_eq!(out.distributions.len(), 21);
        assert_eq!(out.edge_probability, 0.0);
    }

    #[test]
    fn presets_are_normalized_at_depth_two() {
        for preset in [InitialPreset::Origin, InitialPreset::Symmetric, InitialPreset::Balanced] {
            let mut spec = ExperimentSpec::for_class(WalkClass::Pi1Gc1, 0, 5, preset);
            spec.d = 2;
            let r = spec.resolve().unwrap();
            assert_eq!(r.spec.initial_state[0].path.len(), 3);
        }
    }
}
