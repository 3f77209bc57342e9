//! The generic engine against the two memory walks written in their own
//! bases.

mod common;

use common::*;
use qwm_core::coin::CoinMatrix;
use qwm_core::coin_shift::{gc1, gc2};
use qwm_core::graph::no_wrap_window;
use qwm_core::partition::{named_partition, NamedPartition};
use qwm_core::walk::legacy::{memory_walk_mcgettrick, memory_walk_recycled};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const T_MAX: usize = 50;

fn recycled_case(d: usize, seed: u64) -> f64 {
    let window = no_wrap_window(T_MAX + 4, d);
    let host = line_host(window, d);
    let p = named_partition(NamedPartition::Pi1, &host).unwrap();
    let gc = gc1(&host, &p).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let entries = random_paths(&mut rng, d, 3, 6);
    let engine = engine_history(&host, &p, &gc, &engine_state(&host, &entries), T_MAX);

    // path (y_0..y_d) with coin c is |y_d, y_d - y_{d-1}, ..., y_1 - y_0, c>
    let oracle_init: Vec<_> = entries
        .iter()
        .map(|(path, c, a)| {
            let mut coins: Vec<i64> = (0..d).map(|i| path[d - i] - path[d - i - 1]).collect();
            coins.push(label(*c));
            (path[d], coins, *a)
        })
        .collect();
    let oracle = memory_walk_recycled(d, &CoinMatrix::hadamard(), window, &oracle_init, T_MAX).unwrap();
    max_history_diff(&engine, &oracle)
}

#[test]
fn recycled_coin_walk_depth_one() {
    for seed in 0..10 {
        let diff = recycled_case(1, seed);
        assert!(diff < 1e-12, "seed {seed}: {diff:e}");
    }
}

#[test]
fn recycled_coin_walk_depth_two() {
    for seed in 100..110 {
        let diff = recycled_case(2, seed);
        assert!(diff < 1e-12, "seed {seed}: {diff:e}");
    }
}

#[test]
fn reflect_transmit_walk() {
    let window = no_wrap_window(T_MAX + 4, 1);
    let host = line_host(window, 1);
    let p = named_partition(NamedPartition::Pi2, &host).unwrap();
    let gc = gc2(&p).unwrap();
    for seed in 0..10 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let entries = random_paths(&mut rng, 1, 3, 6);
        let engine = engine_history(&host, &p, &gc, &engine_state(&host, &entries), T_MAX);
        // path (y_0, y_1) with coin c is |x_0 = y_1, x_1 = y_0, c>
        let oracle_init: Vec<_> = entries.iter().map(|(path, c, a)| (path[1], path[0], label(*c), *a)).collect();
        let oracle = memory_walk_mcgettrick(1, &CoinMatrix::hadamard(), window, &oracle_init, T_MAX).unwrap();
        let diff = max_history_diff(&engine, &oracle);
        assert!(diff < 1e-12, "seed {seed}: {diff:e}");
    }
}

#[test]
fn pi2_with_gc1_differs_from_both_references() {
    let window = no_wrap_window(20, 1);
    let host = line_host(window, 1);
    let p = named_partition(NamedPartition::Pi2, &host).unwrap();
    let gc = gc1(&host, &p).unwrap();
    let entries = vec![(vec![-1, 0], 0, num_complex::Complex64::new(1.0, 0.0))];
    let engine = engine_history(&host, &p, &gc, &engine_state(&host, &entries), 16);
    let reflect = memory_walk_mcgettrick(1, &CoinMatrix::hadamard(), window, &[(0, -1, 1, entries[0].2)], 16).unwrap();
    assert!(max_history_diff(&engine, &reflect) > 1e-3);
}

#[test]
fn oracles_reject_unsupported_depths() {
    let h = CoinMatrix::hadamard();
    assert!(memory_walk_recycled(3, &h, 11, &[], 1).is_err());
    assert!(memory_walk_mcgettrick(2, &h, 11, &[], 1).is_err());
}
