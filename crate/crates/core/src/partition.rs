//! Arc partitions `{C_1, ..., C_m}` of a regular digraph.
//!
//! A partition is stored as a per-vertex bijection from coin labels to
//! out-neighbors, so `successor(k, v)` is the unique `f_{C_k}(v)`. When every
//! class is itself a permutation the partition is a dicycle factorization.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::coin::{coin_from_label, coin_label};
use crate::error::{QwmError, Result};
use crate::graph::{dicycle_factorization, Factorization, LineDigraph, RegularDigraph};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Partition {
    degree: usize,
    /// `succ[v * degree + k] = f_{C_k}(v)`
    succ: Vec<usize>,
    is_dicycle: bool,
}

/// Which conditions of the partition definition hold.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct PartitionReport {
    /// Union of the class arc sets equals the arc set of the host.
    pub cover_ok: bool,
    /// Every class gives every vertex out-degree exactly 1 along host arcs.
    pub outdeg_ok: bool,
    /// Every class is additionally a permutation.
    pub is_dicycle: bool,
}

impl PartitionReport {
    pub fn is_partition(&self) -> bool {
        self.cover_ok && self.outdeg_ok
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum NamedPartition {
    /// Recycled-coin walk: class `k` steps along base factor `D_k` from the
    /// current position, whatever the memory.
    Pi1,
    /// Reflect/transmit walk: class 0 reverses the last arc, class 1 continues.
    Pi2,
}

impl Partition {
    /// Builds a partition from `table[v][k] = f_{C_k}(v)` and checks it.
    pub fn new(host: &RegularDigraph, table: Vec<Vec<usize>>) -> Result<Self> {
        let p = Self::new_unchecked(host.degree(), table)?;
        let report = validate_partition(host, &p);
        if !report.is_partition() {
            return Err(QwmError::InvalidPartition(format!(
                "cover_ok={} outdeg_ok={}",
                report.cover_ok, report.outdeg_ok
            )));
        }
        Ok(p)
    }

    /// Builds a table without checking it against a host; only the shape is
    /// checked. Use [`validate_partition`] for diagnostics.
    pub fn new_unchecked(degree: usize, table: Vec<Vec<usize>>) -> Result<Self> {
        if let Some((v, row)) = table.iter().enumerate().find(|(_, row)| row.len() != degree) {
            return Err(QwmError::InvalidPartition(format!(
                "vertex {v} has {} classes (expected {degree})",
                row.len()
            )));
        }
        let n = table.len();
        let succ: Vec<usize> = table.into_iter().flatten().collect();
        let is_dicycle = (0..degree).all(|k| {
            let mut hit = vec![false; n];
            (0..n).all(|v| {
                let w = succ[v * degree + k];
                w < n && !std::mem::replace(&mut hit[w], true)
            })
        });
        Ok(Self { degree, succ, is_dicycle })
    }

    /// Partition whose classes are the factors of a dicycle factorization.
    pub fn from_factorization(host: &RegularDigraph, factors: &Factorization) -> Result<Self> {
        factors.validate(host)?;
        let table = (0..host.n_vertices()).map(|v| factors.perms().iter().map(|p| p[v]).collect()).collect();
        Self::new(host, table)
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn n_vertices(&self) -> usize {
        self.succ.len() / self.degree
    }

    pub fn is_dicycle(&self) -> bool {
        self.is_dicycle
    }

    /// `f_{C_k}(v)`
    pub fn successor(&self, k: usize, v: usize) -> usize {
        self.succ[v * self.degree + k]
    }

    pub fn successors(&self, v: usize) -> &[usize] {
        &self.succ[v * self.degree..(v + 1) * self.degree]
    }

    pub fn to_document(&self, kind: &str, seed: Option<u64>) -> PartitionDocument {
        let m = self.degree;
        PartitionDocument {
            kind: kind.to_string(),
            seed,
            m,
            vertices: (0..self.n_vertices())
                .map(|v| self.successors(v).iter().enumerate().map(|(k, &w)| (coin_label(k, m), w)).collect())
                .collect(),
        }
    }

    pub fn from_document(host: &RegularDigraph, doc: &PartitionDocument) -> Result<Self> {
        let m = doc.m;
        let mut table = Vec::with_capacity(doc.vertices.len());
        for (v, pairs) in doc.vertices.iter().enumerate() {
            let mut row = vec![usize::MAX; m];
            for &(label, w) in pairs {
                let k = coin_from_label(label, m)
                    .ok_or_else(|| QwmError::InvalidPartition(format!("vertex {v}: unknown coin label {label}")))?;
                row[k] = w;
            }
            table.push(row);
        }
        Self::new(host, table)
    }
}

/// Structured-text form: per vertex, `(coin label, target vertex)` pairs.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PartitionDocument {
    pub kind: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    pub m: usize,
    pub vertices: Vec<Vec<(i64, usize)>>,
}

pub fn successor(p: &Partition, k: usize, v: usize) -> usize {
    p.successor(k, v)
}

pub fn validate_partition(host: &RegularDigraph, p: &Partition) -> PartitionReport {
    let m = host.degree();
    let n = host.n_vertices();
    if p.degree != m || p.n_vertices() != n {
        return PartitionReport { cover_ok: false, outdeg_ok: false, is_dicycle: false };
    }
    let outdeg_ok = (0..n).all(|v| p.successors(v).iter().all(|&w| host.has_arc(v, w)));
    let cover_ok = (0..n).all(|v| host.out_neighbors(v).iter().all(|w| p.successors(v).contains(w)));
    PartitionReport { cover_ok, outdeg_ok, is_dicycle: outdeg_ok && cover_ok && p.is_dicycle }
}

/// Named partitions of the line digraph of a bidirected 2-regular base.
///
/// `Pi1` is defined at any depth `d >= 1` (and any degree): class `k` sends
/// `(y_0, ..., y_d)` to `(y_1, ..., y_d, D_k(y_d))`. `Pi2` needs depth 1.
pub fn named_partition(kind: NamedPartition, host: &LineDigraph) -> Result<Partition> {
    let g = host.graph();
    if host.depth() == 0 {
        return Err(QwmError::InvalidPartition("named partitions need a line digraph (depth >= 1)".into()));
    }
    match kind {
        NamedPartition::Pi1 => {
            let factors = host.base_factors();
            let table = (0..g.n_vertices())
                .map(|v| {
                    let here = g.position(v);
                    factors
                        .perms()
                        .iter()
                        .map(|d| {
                            let next = d[here];
                            *g.out_neighbors(v)
                                .iter()
                                .find(|&&w| g.position(w) == next)
                                .expect("line digraph arcs extend the path by one base arc")
                        })
                        .collect()
                })
                .collect();
            Partition::new(g, table)
        }
        NamedPartition::Pi2 => {
            let base = host.base();
            let bidirected = base.arcs().all(|(u, v)| base.has_arc(v, u));
            if host.depth() != 1 || base.degree() != 2 || !bidirected {
                return Err(QwmError::InvalidPartition(
                    "pi2 needs the depth-1 line digraph of a bidirected 2-regular graph".into(),
                ));
            }
            let table = (0..g.n_vertices())
                .map(|v| {
                    let back = g.path(v)[0];
                    let (reflect, transmit): (Vec<usize>, Vec<usize>) =
                        g.out_neighbors(v).iter().partition(|&&w| g.position(w) == back);
                    vec![reflect[0], transmit[0]]
                })
                .collect();
            Partition::new(g, table)
        }
    }
}

/// Independent uniformly random bijection coin -> out-arc at every vertex.
pub fn random_partition(host: &RegularDigraph, seed: u64) -> Partition {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let table = (0..host.n_vertices())
        .map(|v| {
            let mut row = host.out_neighbors(v).to_vec();
            row.shuffle(&mut rng);
            row
        })
        .collect();
    Partition::new(host, table).expect("shuffled out-lists always form a partition")
}

/// Random dicycle factorization from shuffled repeated perfect matching.
/// Not uniform over all factorizations in general.
pub fn random_dicycle_factorization(host: &RegularDigraph, seed: u64) -> Partition {
    let factors = dicycle_factorization(host, Some(seed));
    Partition::from_factorization(host, &factors).expect("matching output is a dicycle factorization")
}

/// All partitions of a small host, in lexicographic order of the
/// per-vertex out-neighbor permutations.
pub fn enumerate_partitions(host: &RegularDigraph, limit: usize) -> Result<Vec<Partition>> {
    let m = host.degree();
    let perms = permutations(m);
    let n = host.n_vertices();
    let total = (perms.len() as f64).powi(n as i32);
    if total > limit as f64 {
        return Err(QwmError::TooLarge { what: "partitions", size: total as usize, limit });
    }
    let mut out = Vec::with_capacity(total as usize);
    let mut digits = vec![0usize; n];
    loop {
        let table = (0..n).map(|v| perms[digits[v]].iter().map(|&i| host.out_neighbors(v)[i]).collect()).collect();
        out.push(Partition::new(host, table)?);
        if !odometer(&mut digits, perms.len()) {
            break;
        }
    }
    Ok(out)
}

/// Partition and dicycle-factorization counts of a small host, found by
/// trying every choice of out-neighbor for every `(vertex, class)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct PartitionCensus {
    pub assignments: u64,
    pub partitions: u64,
    pub dicycle_factorizations: u64,
}

/// Limit on the number of assignments [`census_partitions`] visits.
pub const CENSUS_ASSIGNMENT_LIMIT: u64 = 1 << 22;

pub fn census_partitions(host: &RegularDigraph) -> Result<PartitionCensus> {
    let m = host.degree();
    let n = host.n_vertices();
    let total = (m as f64).powi((n * m) as i32);
    if total > CENSUS_ASSIGNMENT_LIMIT as f64 {
        return Err(QwmError::TooLarge {
            what: "assignments",
            size: total as usize,
            limit: CENSUS_ASSIGNMENT_LIMIT as usize,
        });
    }
    let mut census = PartitionCensus { assignments: 0, partitions: 0, dicycle_factorizations: 0 };
    let mut digits = vec![0usize; n * m];
    let mut seen = vec![false; n];
    loop {
        census.assignments += 1;
        let row_ok = digits.chunks(m).all(|row| (0..m).all(|i| row.contains(&i)));
        if row_ok {
            census.partitions += 1;
            let class_ok = (0..m).all(|k| {
                seen.iter_mut().for_each(|s| *s = false);
                (0..n).all(|v| !std::mem::replace(&mut seen[host.out_neighbors(v)[digits[v * m + k]]], true))
            });
            census.dicycle_factorizations += class_ok as u64;
        }
        if !odometer(&mut digits, m) {
            return Ok(census);
        }
    }
}

/// All permutations of `0..m` in lexicographic order.
pub(crate) fn permutations(m: usize) -> Vec<Vec<usize>> {
    let mut current: Vec<usize> = (0..m).collect();
    let mut out = vec![current.clone()];
    loop {
        let Some(i) = (1..m).rev().find(|&i| current[i - 1] < current[i]) else {
            return out;
        };
        let j = (i..m).rev().find(|&j| current[j] > current[i - 1]).unwrap();
        current.swap(i - 1, j);
        current[i..].reverse();
        out.push(current.clone());
    }
}

/// Advances a little-endian mixed counter; false once it wraps around.
pub(crate) fn odometer(digits: &mut [usize], base: usize) -> bool {
    for d in digits.iter_mut() {
        *d += 1;
        if *d < base {
            return true;
        }
        *d = 0;
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{iterate_line_digraph, make_bidirected_cycle};

    fn line_host(n: usize) -> LineDigraph {
        iterate_line_digraph(&make_bidirected_cycle(n).unwrap(), 1).unwrap()
    }

    fn vertex(host: &LineDigraph, prev: i64, cur: i64) -> usize {
        let n = host.base().n_vertices();
        let path = [prev.rem_euclid(n as i64) as usize, cur.rem_euclid(n as i64) as usize];
        host.graph().vertex_of_path(&path).unwrap()
    }

    #[test]
    fn pi2_reflect_and_transmit() {
        let host = line_host(11);
        let p = named_partition(NamedPartition::Pi2, &host).unwrap();
        for x in -3..=3 {
            let v = vertex(&host, x - 1, x);
            assert_eq!(successor(&p, 1, v), vertex(&host, x, x + 1));
            assert_eq!(successor(&p, 0, v), vertex(&host, x, x - 1));
        }
    }

    #[test]
    fn pi1_routes_by_direction_only() {
        let host = line_host(11);
        let p = named_partition(NamedPartition::Pi1, &host).unwrap();
        for x in -3..=3 {
            let right = vertex(&host, x, x + 1);
            assert_eq!(p.successor(0, vertex(&host, x - 1, x)), right);
            assert_eq!(p.successor(0, vertex(&host, x + 1, x)), right);
        }
    }

    #[test]
    fn dicycle_flags() {
        let host = line_host(9);
        let pi1 = named_partition(NamedPartition::Pi1, &host).unwrap();
        let pi2 = named_partition(NamedPartition::Pi2, &host).unwrap();
        let r1 = validate_partition(host.graph(), &pi1);
        let r2 = validate_partition(host.graph(), &pi2);
        assert_eq!((r1.cover_ok, r1.outdeg_ok, r1.is_dicycle), (true, true, false));
        assert_eq!((r2.cover_ok, r2.outdeg_ok, r2.is_dicycle), (true, true, true));
    }

    #[test]
    fn pi2_needs_depth_one() {
        let host = iterate_line_digraph(&make_bidirected_cycle(9).unwrap(), 2).unwrap();
        assert!(named_partition(NamedPartition::Pi2, &host).is_err());
        let base = iterate_line_digraph(&make_bidirected_cycle(9).unwrap(), 0).unwrap();
        assert!(named_partition(NamedPartition::Pi1, &base).is_err());
    }

    #[test]
    fn missing_arc_breaks_cover() {
        let host = line_host(5);
        let g = host.graph();
        let mut table: Vec<Vec<usize>> = (0..g.n_vertices()).map(|v| g.out_neighbors(v).to_vec()).collect();
        table[0][1] = table[0][0];
        let p = Partition::new_unchecked(2, table).unwrap();
        let r = validate_partition(g, &p);
        assert!(!r.cover_ok);
        assert!(r.outdeg_ok);
        assert!(Partition::new(g, vec![vec![0, 0]; g.n_vertices()]).is_err());
    }

    #[test]
    fn random_partition_deterministic() {
        let host = line_host(7);
        let a = random_partition(host.graph(), 42);
        let b = random_partition(host.graph(), 42);
        assert_eq!(a, b);
        assert!(validate_partition(host.graph(), &a).is_partition());
    }

    #[test]
    fn random_dicycle_columns_sum_to_one() {
        let host = line_host(7);
        for seed in 0..10 {
            let p = random_dicycle_factorization(host.graph(), seed);
            assert!(p.is_dicycle());
            let n = p.n_vertices();
            for k in 0..2 {
                let mut col = vec![0; n];
                for v in 0..n {
                    col[p.successor(k, v)] += 1;
                }
                assert!(col.iter().all(|&c| c == 1));
            }
            assert_eq!(p, random_dicycle_factorization(host.graph(), seed));
        }
    }

    #[test]
    fn permutations_in_order() {
        assert_eq!(permutations(3).len(), 6);
        assert_eq!(permutations(3)[1], vec![0, 2, 1]);
        assert_eq!(permutations(1), vec![vec![0]]);
    }

    #[test]
    fn document_round_trip() {
        let host = line_host(5);
        let p = random_partition(host.graph(), 3);
        let doc = p.to_document("random", Some(3));
        assert_eq!(Partition::from_document(host.graph(), &doc).unwrap(), p);
    }

    #[test]
    fn census_matches_enumeration() {
        let host = iterate_line_digraph(&make_bidirected_cycle(3).unwrap(), 1).unwrap();
        let g = host.graph();
        let census = census_partitions(g).unwrap();
        let listed = enumerate_partitions(g, 1 << 10).unwrap();
        assert_eq!(census.partitions, listed.len() as u64);
        assert_eq!(census.partitions, 1 << 6);
        assert_eq!(census.dicycle_factorizations, listed.iter().filter(|p| p.is_dicycle()).count() as u64);
    }
}
