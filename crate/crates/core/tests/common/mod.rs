#![allow(dead_code)]

use num_complex::Complex64;
use qwm_core::analysis::{position_marginal, PositionDistribution};
use qwm_core::coin::CoinMatrix;
use qwm_core::coin_shift::CoinShift;
use qwm_core::graph::{iterate_line_digraph, label_of_coordinate, make_bidirected_cycle, LineDigraph};
use qwm_core::partition::Partition;
use qwm_core::walk::{Walk, WalkState};
use rand::Rng;

pub fn line_host(window: usize, d: usize) -> LineDigraph {
    iterate_line_digraph(&make_bidirected_cycle(window).unwrap(), d).unwrap()
}

/// Vertex of the path given in centered coordinates.
pub fn vertex(host: &LineDigraph, coords: &[i64]) -> usize {
    let n = host.base().n_vertices();
    let labels: Vec<usize> = coords.iter().map(|&x| label_of_coordinate(x, n)).collect();
    host.graph().vertex_of_path(&labels).expect("path is a walk of the base graph")
}

/// A normalized random superposition of `terms` basis states. Each term is
/// a `d`-step walk `(y_0, ..., y_d)` ending within `radius` of the origin
/// and a coin, with a random complex amplitude.
pub fn random_paths(rng: &mut impl Rng, d: usize, radius: i64, terms: usize) -> Vec<(Vec<i64>, usize, Complex64)> {
    let mut out: Vec<(Vec<i64>, usize, Complex64)> = Vec::new();
    while out.len() < terms {
        let end = rng.random_range(-radius..=radius);
        let mut path = vec![end];
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

pub fn engine_state(host: &LineDigraph, entries: &[(Vec<i64>, usize, Complex64)]) -> WalkState {
    let list: Vec<(usize, usize, Complex64)> = entries.iter().map(|(p, c, a)| (vertex(host, p), *c, *a)).collect();
    WalkState::from_entries(host.n_vertices(), 2, &list).unwrap()
}

pub fn engine_history(
    host: &LineDigraph,
    p: &Partition,
    gc: &CoinShift,
    initial: &WalkState,
    t_max: usize,
) -> Vec<PositionDistribution> {
    let walk = Walk::new(p, gc, CoinMatrix::hadamard()).unwrap();
    let mut out = Vec::with_capacity(t_max + 1);
    walk.evolve_with(initial, t_max, |s| out.push(position_marginal(host.graph(), s))).unwrap();
    out
}

pub fn max_history_diff(a: &[PositionDistribution], b: &[PositionDistribution]) -> f64 {
    assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| x.max_abs_diff(y)).fold(0.0, f64::max)
}

/// Coin label `+1` for index 0 and `-1` for index 1.
pub fn label(c: usize) -> i64 {
    if c == 0 {
        1
    } else {
        -1
    }
}
