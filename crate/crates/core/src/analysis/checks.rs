//! End-to-end cross-checks between the generic engine and the walks written
//! in their own bases, packaged as reports.

use std::f64::consts::FRAC_1_SQRT_2;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::equivalence::{
    alpha_from_beta, alpha_from_state, beta_from_state, beta_recurrence_step, check_beta_constraint, qwom_step,
    AlphaField, BetaField,
};
use super::{position_marginal, PositionDistribution};
use crate::coin::{CoinMatrix, MINUS, PLUS};
use crate::coin_shift::{carry, gc1, gc2};
use crate::error::{QwmError, Result};
use crate::graph::{iterate_line_digraph, label_of_coordinate, make_bidirected_cycle, no_wrap_window, LineDigraph};
use crate::partition::{named_partition, NamedPartition, Partition};
use crate::walk::legacy::{memory_walk_mcgettrick, memory_walk_recycled};
use crate::walk::{Walk, WalkState};
use crate::{ORACLE_TOL, UNITARY_TOL};

/// Engine against one of the memory-basis references.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CorrespondenceReport {
    pub reference: String,
    pub d: usize,
    pub t_max: usize,
    pub seeds: Vec<u64>,
    /// Largest `|P_engine(x,t) - P_reference(x,t)|` over seeds, `t` and `x`.
    pub max_diff: f64,
    pub pass: bool,
}

/// The reflect/transmit recurrence, its phase map onto the memoryless walk,
/// and both engines, run side by side.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EquivalenceReport {
    pub t_max: usize,
    pub max_constraint_residual: f64,
    /// Mapped recurrence amplitudes against the direct memoryless walk.
    pub max_alpha_diff: f64,
    pub max_total_variation: f64,
    /// Engine on the depth-1 line digraph against the recurrence.
    pub max_engine_beta_diff: f64,
    /// Memoryless engine against the direct memoryless recurrence.
    pub max_engine_alpha_diff: f64,
    /// Constraint residual of a perturbed initial field; the phase map does
    /// not apply to it.
    pub perturbed_constraint_residual: f64,
    pub perturbed_applicable: bool,
    pub pass: bool,
}

/// A random normalized superposition of `terms` basis states whose memory
/// paths end within `radius` of the origin. Each term is
/// `(path in centered coordinates, coin, amplitude)`.
pub fn random_memory_state(seed: u64, d: usize, radius: i64, terms: usize) -> Vec<(Vec<i64>, usize, Complex64)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out: Vec<(Vec<i64>, usize, Complex64)> = Vec::with_capacity(terms);
    let distinct = (2 * radius as usize + 1) << (d + 1);
    while out.len() < terms.min(distinct) {
        let mut path = vec![rng.random_range(-radius..=radius)];
        for _ in 0..d {
            let step = if rng.random::<bool>() { 1 } else { -1 };
            path.insert(0, path[0] - step);
        }
        let coin = rng.random_range(0..2);
        if out.iter().any(|(p, c, _)| *p == path && *c == coin) {
            continue;
        }
        let amp = Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
        out.push((path, coin, amp));
    }
    let norm = out.iter().map(|(_, _, a)| a.norm_sqr()).sum::<f64>().sqrt();
    for (_, _, a) in &mut out {
        *a /= norm;
    }
    out
}

const STATE_RADIUS: i64 = 3;
const STATE_TERMS: usize = 6;

fn line(t_max: usize, d: usize) -> Result<(usize, LineDigraph)> {
    let window = no_wrap_window(t_max + STATE_RADIUS as usize + d, d);
    Ok((window, iterate_line_digraph(&make_bidirected_cycle(window)?, d)?))
}

fn engine_marginals(
    host: &LineDigraph,
    walk: &Walk,
    window: usize,
    terms: &[(Vec<i64>, usize, Complex64)],
    t_max: usize,
) -> Result<Vec<PositionDistribution>> {
    let g = host.graph();
    let mut entries = Vec::with_capacity(terms.len());
    for (path, c, a) in terms {
        let labels: Vec<usize> = path.iter().map(|&x| label_of_coordinate(x, window)).collect();
        let v = g.vertex_of_path(&labels).ok_or_else(|| QwmError::InvalidState(format!("{path:?} is not a walk")))?;
        entries.push((v, *c, *a));
    }
    let init = WalkState::from_entries(g.n_vertices(), 2, &entries)?;
    let mut out = Vec::with_capacity(t_max + 1);
    walk.evolve_with(&init, t_max, |s| out.push(position_marginal(g, s)))?;
    Ok(out)
}

fn history_diff(a: &[PositionDistribution], b: &[PositionDistribution]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x.max_abs_diff(y)).fold(0.0, f64::max)
}

fn sign(c: usize) -> i64 {
    if c == PLUS {
        1
    } else {
        -1
    }
}

/// `(pi1, gc1)` on the `d`-fold line digraph against the recycled-coin
/// walk, from one random initial state per seed. `d` must be 1 or 2.
pub fn recycled_correspondence(d: usize, seeds: &[u64], t_max: usize) -> Result<CorrespondenceReport> {
    let (window, host) = line(t_max, d)?;
    let p = named_partition(NamedPartition::Pi1, &host)?;
    let walk = Walk::new(&p, &gc1(&host, &p)?, CoinMatrix::hadamard())?;
    let mut max_diff = 0.0f64;
    for &seed in seeds {
        let terms = random_memory_state(seed, d, STATE_RADIUS, STATE_TERMS);
        let engine = engine_marginals(&host, &walk, window, &terms, t_max)?;
        // (y_0..y_d) with coin c is |y_d, y_d - y_{d-1}, ..., y_1 - y_0, c>
        let init: Vec<_> = terms
            .iter()
            .map(|(path, c, a)| {
                let mut coins: Vec<i64> = (0..d).map(|i| path[d - i] - path[d - i - 1]).collect();
                coins.push(sign(*c));
                (path[d], coins, *a)
            })
            .collect();
        let reference = memory_walk_recycled(d, &CoinMatrix::hadamard(), window, &init, t_max)?;
        max_diff = max_diff.max(history_diff(&engine, &reference));
    }
    Ok(CorrespondenceReport {
        reference: "recycled-coin".into(),
        d,
        t_max,
        seeds: seeds.to_vec(),
        max_diff,
        pass: max_diff < UNITARY_TOL,
    })
}

/// `(pi2, gc2)` on the depth-1 line digraph against the reflect/transmit
/// walk, from one random initial state per seed.
pub fn reflect_transmit_correspondence(seeds: &[u64], t_max: usize) -> Result<CorrespondenceReport> {
    let (window, host) = line(t_max, 1)?;
    let p = named_partition(NamedPartition::Pi2, &host)?;
    let walk = Walk::new(&p, &gc2(&p)?, CoinMatrix::hadamard())?;
    let mut max_diff = 0.0f64;
    for &seed in seeds {
        let terms = random_memory_state(seed, 1, STATE_RADIUS, STATE_TERMS);
        let engine = engine_marginals(&host, &walk, window, &terms, t_max)?;
        // (y_0, y_1) with coin c is |x_0 = y_1, x_1 = y_0, c>
        let init: Vec<_> = terms.iter().map(|(path, c, a)| (path[1], path[0], sign(*c), *a)).collect();
        let reference = memory_walk_mcgettrick(1, &CoinMatrix::hadamard(), window, &init, t_max)?;
        max_diff = max_diff.max(history_diff(&engine, &reference));
    }
    Ok(CorrespondenceReport {
        reference: "reflect-transmit".into(),
        d: 1,
        t_max,
        seeds: seeds.to_vec(),
        max_diff,
        pass: max_diff < UNITARY_TOL,
    })
}

/// Runs the reflect/transmit recurrence from its symmetric initial field
/// and the memoryless Hadamard walk from `(1/sqrt 2, i/sqrt 2)` at the
/// origin, and compares them at every step up to `t_max`.
pub fn reflect_transmit_equivalence(t_max: usize) -> Result<EquivalenceReport> {
    let window = no_wrap_window(t_max, 1);
    let host = iterate_line_digraph(&make_bidirected_cycle(window)?, 1)?;
    let g = host.graph();
    let pi2 = named_partition(NamedPartition::Pi2, &host)?;
    let memory_walk = Walk::new(&pi2, &gc2(&pi2)?, CoinMatrix::hadamard())?;
    let half = Complex64::new(0.5, 0.0);
    let start = |x: i64| g.vertex_of_path(&[label_of_coordinate(x, window), 0]).expect("origin arcs exist");
    let mut memory_state = WalkState::from_entries(
        g.n_vertices(),
        2,
        &[(start(-1), PLUS, half), (start(-1), MINUS, -half), (start(1), PLUS, -half), (start(1), MINUS, half)],
    )?;

    let plain = iterate_line_digraph(&make_bidirected_cycle(window)?, 0)?;
    let plain_p = Partition::from_factorization(plain.graph(), plain.factors())?;
    let plain_walk = Walk::new(&plain_p, &carry(&plain_p), CoinMatrix::hadamard())?;
    let h = Complex64::new(FRAC_1_SQRT_2, 0.0);
    let mut plain_state =
        WalkState::from_entries(plain.n_vertices(), 2, &[(0, PLUS, h), (0, MINUS, h * Complex64::i())])?;

    let mut beta = BetaField::symmetric_initial();
    let mut alpha = AlphaField::symmetric_initial();
    let mut report = EquivalenceReport {
        t_max,
        max_constraint_residual: 0.0,
        max_alpha_diff: 0.0,
        max_total_variation: 0.0,
        max_engine_beta_diff: 0.0,
        max_engine_alpha_diff: 0.0,
        perturbed_constraint_residual: 0.0,
        perturbed_applicable: false,
        pass: false,
    };
    for t in 0..=t_max {
        report.max_constraint_residual = report.max_constraint_residual.max(check_beta_constraint(&beta));
        report.max_alpha_diff = report.max_alpha_diff.max(alpha_from_beta(&beta, t)?.max_abs_diff(&alpha));
        report.max_total_variation = report.max_total_variation.max(beta.marginal().total_variation(&alpha.marginal()));
        report.max_engine_beta_diff =
            report.max_engine_beta_diff.max(beta_from_state(g, &memory_state)?.max_abs_diff(&beta));
        report.max_engine_alpha_diff =
            report.max_engine_alpha_diff.max(alpha_from_state(plain.graph(), &plain_state)?.max_abs_diff(&alpha));
        if t < t_max {
            beta = beta_recurrence_step(&beta);
            alpha = qwom_step(&alpha);
            memory_state = memory_walk.step(&memory_state)?;
            plain_state = plain_walk.step(&plain_state)?;
        }
    }

    let mut perturbed = BetaField::symmetric_initial();
    perturbed.set(-1, 0, PLUS, Complex64::new(0.6, 0.0));
    perturbed.set(-1, 0, MINUS, Complex64::new(-0.4, 0.0));
    report.perturbed_constraint_residual = check_beta_constraint(&perturbed);
    report.perturbed_applicable = report.perturbed_constraint_residual < UNITARY_TOL;

    report.pass = report.max_constraint_residual < UNITARY_TOL
        && report.max_alpha_diff < ORACLE_TOL
        && report.max_total_variation < ORACLE_TOL
        && report.max_engine_beta_diff < UNITARY_TOL
        && report.max_engine_alpha_diff < UNITARY_TOL;
    Ok(report)
}
