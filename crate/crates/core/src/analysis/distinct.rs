use serde::{Deserialize, Serialize};

use super::{position_marginal, PositionDistribution};
use crate::coin::{CoinMatrix, MINUS, PLUS};
use crate::coin_shift::gc2;
use crate::error::Result;
use crate::graph::{iterate_line_digraph, label_of_coordinate, make_bidirected_cycle, no_wrap_window, LineDigraph};
use crate::partition::{random_dicycle_factorization, Partition};
use crate::walk::{Walk, WalkState};
use crate::ORACLE_TOL;

/// Seeds grouped by the distribution histories their walks produce.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DistinctWalkReport {
    pub t: usize,
    pub seeds: Vec<u64>,
    pub n_classes: usize,
    /// Class index of each seed, in seed order.
    pub class_of_seed: Vec<usize>,
    /// Partition near the origin, one letter per position `-1, 0, 1`:
    /// `R` when coin `+1` reflects there, `T` when it transmits.
    pub key_of_seed: Vec<String>,
    pub n_keys: usize,
    /// Seed pairs with equal keys but different classes.
    pub key_mismatches: usize,
}

/// Simulates random dicycle factorizations with the carried coin (`gc2`)
/// under the Hadamard coin from each of the four basis states at position
/// 0, and groups seeds whose marginal histories agree within tolerance.
pub fn count_distinct_dicycle_gc2_walks(seeds: &[u64], t: usize) -> Result<DistinctWalkReport> {
    let window = no_wrap_window(t, 1);
    let host = iterate_line_digraph(&make_bidirected_cycle(window)?, 1)?;
    let g = host.graph();
    let starts: Vec<usize> = [[-1i64, 0], [1, 0]]
        .iter()
        .map(|p| {
            let labels: Vec<usize> = p.iter().map(|&x| label_of_coordinate(x, window)).collect();
            g.vertex_of_path(&labels).expect("origin arcs exist")
        })
        .collect();

    let mut representatives: Vec<Vec<Vec<PositionDistribution>>> = Vec::new();
    let mut class_of_seed = Vec::with_capacity(seeds.len());
    let mut key_of_seed = Vec::with_capacity(seeds.len());
    for &seed in seeds {
        let p = random_dicycle_factorization(g, seed);
        let walk = Walk::new(&p, &gc2(&p)?, CoinMatrix::hadamard())?;
        let mut histories = Vec::with_capacity(4);
        for &v in &starts {
            for c in [PLUS, MINUS] {
                let init = WalkState::basis(g.n_vertices(), 2, v, c);
                let mut h = Vec::with_capacity(t + 1);
                walk.evolve_with(&init, t, |s| h.push(position_marginal(g, s)))?;
                histories.push(h);
            }
        }
        let class = representatives.iter().position(|rep| same_histories(rep, &histories)).unwrap_or_else(|| {
            representatives.push(histories);
            representatives.len() - 1
        });
        class_of_seed.push(class);
        key_of_seed.push(center_key(&host, &p, window));
    }

    let mut key_mismatches = 0;
    for i in 0..seeds.len() {
        for j in i + 1..seeds.len() {
            if key_of_seed[i] == key_of_seed[j] && class_of_seed[i] != class_of_seed[j] {
                key_mismatches += 1;
            }
        }
    }
    let mut keys = key_of_seed.clone();
    keys.sort();
    keys.dedup();
    Ok(DistinctWalkReport {
        t,
        seeds: seeds.to_vec(),
        n_classes: representatives.len(),
        class_of_seed,
        key_of_seed,
        n_keys: keys.len(),
        key_mismatches,
    })
}

fn same_histories(a: &[Vec<PositionDistribution>], b: &[Vec<PositionDistribution>]) -> bool {
    a.iter().zip(b).all(|(ha, hb)| ha.iter().zip(hb).all(|(da, db)| da.max_abs_diff(db) < ORACLE_TOL))
}

fn center_key(host: &LineDigraph, p: &Partition, window: usize) -> String {
    let g = host.graph();
    (-1i64..=1)
        .map(|x| {
            let here = label_of_coordinate(x, window);
            let from_left = g.vertex_of_path(&[label_of_coordinate(x - 1, window), here]).expect("arc exists");
            let target = p.successor(PLUS, from_left);
            if g.position(target) == label_of_coordinate(x - 1, window) {
                'R'
            } else {
                'T'
            }
        })
        .collect()
}
