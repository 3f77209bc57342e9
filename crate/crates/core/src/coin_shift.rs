//! Coin-shift functions `gc(v, c)` and the unitarity constraint.
//!
//! For a target vertex `w`, let `P(w)` be the `m` pairs `(v, c_k)` with
//! `f_{C_k}(v) = w`. The shift is unitary exactly when the values
//! `gc(v, c_k)` over `P(w)` are the coin labels `{c_1, ..., c_m}` each once.

use serde::{Deserialize, Serialize};

use crate::coin::{coin_from_label, coin_label};
use crate::error::{QwmError, Result};
use crate::graph::LineDigraph;
use crate::partition::{odometer, permutations, Partition};

/// Table limit for [`enumerate_coin_shifts`].
pub const ENUMERATION_ENTRY_LIMIT: usize = 24;
/// Result-count limit for [`enumerate_coin_shifts`].
pub const ENUMERATION_COUNT_LIMIT: usize = 1 << 20;

/// Total map `(vertex, coin) -> coin`, stored as a table.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CoinShift {
    degree: usize,
    table: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoinShiftReport {
    pub valid: bool,
    /// Target vertices whose incoming coin multiset is wrong.
    pub violations: Vec<usize>,
}

impl CoinShift {
    /// `table[v * m + c] = gc(v, c)`
    pub fn from_table(degree: usize, table: Vec<usize>) -> Result<Self> {
        if degree == 0 || !table.len().is_multiple_of(degree) {
            return Err(QwmError::InvalidState(format!(
                "table of {} entries does not split into rows of {degree}",
                table.len()
            )));
        }
        if let Some(&bad) = table.iter().find(|&&c| c >= degree) {
            return Err(QwmError::InvalidState(format!("coin {bad} out of range for m={degree}")));
        }
        Ok(Self { degree, table })
    }

    /// The coin-independent shift `gc(v, c) = out[v]`.
    pub fn per_vertex(degree: usize, out: &[usize]) -> Result<Self> {
        Self::from_table(degree, out.iter().flat_map(|&c| std::iter::repeat_n(c, degree)).collect())
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn n_vertices(&self) -> usize {
        self.table.len() / self.degree
    }

    pub fn get(&self, v: usize, c: usize) -> usize {
        self.table[v * self.degree + c]
    }

    pub fn table(&self) -> &[usize] {
        &self.table
    }

    /// `(vertex, in-coin label, out-coin label)` triples.
    pub fn to_triples(&self) -> Vec<(usize, i64, i64)> {
        let m = self.degree;
        (0..self.n_vertices())
            .flat_map(|v| (0..m).map(move |c| (v, c)))
            .map(|(v, c)| (v, coin_label(c, m), coin_label(self.get(v, c), m)))
            .collect()
    }

    pub fn from_triples(n_vertices: usize, m: usize, triples: &[(usize, i64, i64)]) -> Result<Self> {
        let mut table = vec![usize::MAX; n_vertices * m];
        for &(v, cin, cout) in triples {
            let (Some(i), Some(o)) = (coin_from_label(cin, m), coin_from_label(cout, m)) else {
                return Err(QwmError::InvalidState(format!("bad coin labels ({cin}, {cout})")));
            };
            if v >= n_vertices {
                return Err(QwmError::InvalidState(format!("vertex {v} out of range")));
            }
            table[v * m + i] = o;
        }
        if table.contains(&usize::MAX) {
            return Err(QwmError::InvalidState("coin-shift table is not total".into()));
        }
        Self::from_table(m, table)
    }
}

/// Coin shift of the recycled-coin walk: after the move the coin is set to
/// the oldest memory step, i.e. the factor index of the arc `(y_0, y_1)`
/// of the vertex's path tuple. It does not depend on the incoming coin and
/// satisfies the constraint for every partition.
pub fn gc1(host: &LineDigraph, p: &Partition) -> Result<CoinShift> {
    if host.degree() != 2 {
        return Err(QwmError::Unsupported(format!("gc1 is defined for m = 2, got m = {}", host.degree())));
    }
    if host.depth() == 0 {
        return Err(QwmError::Unsupported("gc1 needs memory depth >= 1".into()));
    }
    if p.n_vertices() != host.n_vertices() {
        return Err(QwmError::DimensionMismatch { expected: host.n_vertices(), found: p.n_vertices() });
    }
    let g = host.graph();
    let oldest: Vec<usize> = (0..g.n_vertices())
        .map(|v| {
            let path = g.path(v);
            host.base_factors().class_of_arc(path[0], path[1]).expect("consecutive path entries are base arcs")
        })
        .collect();
    let gc = CoinShift::per_vertex(2, &oldest)?;
    require_valid(p, &gc, "gc1 multiset rule")?;
    Ok(gc)
}

/// Coin shift of the reflect/transmit walk: the coin is carried through the
/// move. Valid only when no two vertices share a successor inside a class,
/// i.e. for dicycle factorizations.
pub fn gc2(p: &Partition) -> Result<CoinShift> {
    if p.degree() != 2 {
        return Err(QwmError::Unsupported(format!("gc2 is defined for m = 2, got m = {}", p.degree())));
    }
    let gc = carry(p);
    require_valid(p, &gc, "gc2 satisfies only the dicycle-factorization constraints")?;
    Ok(gc)
}

/// `gc(v, c) = c` for any degree.
pub fn carry(p: &Partition) -> CoinShift {
    let m = p.degree();
    CoinShift { degree: m, table: (0..p.n_vertices() * m).map(|i| i % m).collect() }
}

fn require_valid(p: &Partition, gc: &CoinShift, rule: &str) -> Result<()> {
    let report = validate_coin_shift(p, gc);
    if report.valid {
        Ok(())
    } else {
        Err(QwmError::ConstraintViolation { rule: rule.to_string(), vertices: report.violations })
    }
}

/// Checks the per-target multiset condition at every vertex.
pub fn validate_coin_shift(p: &Partition, gc: &CoinShift) -> CoinShiftReport {
    let m = p.degree();
    let n = p.n_vertices();
    if gc.degree != m || gc.n_vertices() != n {
        return CoinShiftReport { valid: false, violations: (0..n).collect() };
    }
    let mut counts = vec![0u32; n * m];
    for v in 0..n {
        for k in 0..m {
            counts[p.successor(k, v) * m + gc.get(v, k)] += 1;
        }
    }
    let violations: Vec<usize> = (0..n).filter(|&w| counts[w * m..(w + 1) * m].iter().any(|&c| c != 1)).collect();
    CoinShiftReport { valid: violations.is_empty(), violations }
}

/// Incoming `(vertex, coin)` pairs of every target vertex.
pub fn incoming_pairs(p: &Partition) -> Vec<Vec<(usize, usize)>> {
    let mut incoming = vec![Vec::with_capacity(p.degree()); p.n_vertices()];
    for v in 0..p.n_vertices() {
        for k in 0..p.degree() {
            incoming[p.successor(k, v)].push((v, k));
        }
    }
    incoming
}

/// Every coin-shift table satisfying the constraint, in a fixed order.
///
/// The constraint splits by target vertex: each target assigns a
/// permutation of the coins to its `m` incoming pairs, so there are
/// `(m!)^|V|` solutions.
pub fn enumerate_coin_shifts(p: &Partition) -> Result<Vec<CoinShift>> {
    let m = p.degree();
    let n = p.n_vertices();
    let entries = n * m;
    if entries > ENUMERATION_ENTRY_LIMIT {
        return Err(QwmError::TooLarge { what: "table entries", size: entries, limit: ENUMERATION_ENTRY_LIMIT });
    }
    let incoming = incoming_pairs(p);
    if incoming.iter().any(|pairs| pairs.len() != m) {
        // Some target has the wrong in-degree; no table can satisfy it.
        return Ok(Vec::new());
    }
    let perms = permutations(m);
    let total = (perms.len() as f64).powi(n as i32);
    if total > ENUMERATION_COUNT_LIMIT as f64 {
        return Err(QwmError::TooLarge { what: "tables", size: total as usize, limit: ENUMERATION_COUNT_LIMIT });
    }
    let mut out = Vec::with_capacity(total as usize);
    let mut digits = vec![0usize; n];
    loop {
        let mut table = vec![0usize; entries];
        for (w, pairs) in incoming.iter().enumerate() {
            for (&(v, k), &c) in pairs.iter().zip(&perms[digits[w]]) {
                table[v * m + k] = c;
            }
        }
        out.push(CoinShift { degree: m, table });
        if !odometer(&mut digits, perms.len()) {
            break;
        }
    }
    out.sort();
    out.dedup();
    Ok(out)
}

/// Limit on the number of tables [`census_all_tables`] visits.
pub const CENSUS_TABLE_LIMIT: u64 = 1 << 22;

/// Outcome of checking every coin-shift table of a partition.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct TableCensus {
    pub tables: u64,
    /// Tables whose shift map `(v, c) -> (f_{C_c}(v), gc(v, c))` is a bijection.
    pub bijective: u64,
    /// Tables where [`validate_coin_shift`] and bijectivity disagree.
    pub disagreements: u64,
}

/// Visits all `m^(|V| m)` coin-shift tables of `p`, testing each for
/// bijectivity directly and through the validator.
pub fn census_all_tables(p: &Partition) -> Result<TableCensus> {
    let m = p.degree();
    let entries = p.n_vertices() * m;
    let tables = (m as f64).powi(entries as i32);
    if tables > CENSUS_TABLE_LIMIT as f64 {
        return Err(QwmError::TooLarge { what: "tables", size: tables as usize, limit: CENSUS_TABLE_LIMIT as usize });
    }
    let mut census = TableCensus { tables: 0, bijective: 0, disagreements: 0 };
    let mut digits = vec![0usize; entries];
    let mut hit = vec![false; entries];
    loop {
        hit.iter_mut().for_each(|h| *h = false);
        let mut bijective = true;
        for (i, &coin) in digits.iter().enumerate() {
            let image = p.successor(i % m, i / m) * m + coin;
            bijective &= !std::mem::replace(&mut hit[image], true);
        }
        let gc = CoinShift { degree: m, table: digits.clone() };
        census.tables += 1;
        census.bijective += bijective as u64;
        census.disagreements += (validate_coin_shift(p, &gc).valid != bijective) as u64;
        if !odometer(&mut digits, m) {
            return Ok(census);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coin::{MINUS, PLUS};
    use crate::graph::{iterate_line_digraph, make_bidirected_cycle};
    use crate::partition::{named_partition, random_dicycle_factorization, random_partition, NamedPartition};

    fn host(n: usize) -> LineDigraph {
        iterate_line_digraph(&make_bidirected_cycle(n).unwrap(), 1).unwrap()
    }

    #[test]
    fn gc1_ignores_incoming_coin() {
        let h = host(9);
        let p = named_partition(NamedPartition::Pi1, &h).unwrap();
        let gc = gc1(&h, &p).unwrap();
        for v in 0..h.n_vertices() {
            assert_eq!(gc.get(v, PLUS), gc.get(v, MINUS));
        }
        // (x-1, x) remembers a +1 step, (x+1, x) a -1 step.
        let n = h.block_len();
        for i in 0..n {
            assert_eq!(gc.get(i, PLUS), PLUS);
            assert_eq!(gc.get(i + n, PLUS), MINUS);
        }
    }

    #[test]
    fn gc1_fits_random_partitions() {
        let h = host(9);
        for seed in 0..100 {
            let p = random_partition(h.graph(), seed);
            assert!(validate_coin_shift(&p, &gc1(&h, &p).unwrap()).valid);
        }
    }

    #[test]
    fn gc2_gating() {
        let h = host(9);
        let pi1 = named_partition(NamedPartition::Pi1, &h).unwrap();
        let pi2 = named_partition(NamedPartition::Pi2, &h).unwrap();
        assert!(matches!(gc2(&pi1), Err(QwmError::ConstraintViolation { .. })));
        assert!(validate_coin_shift(&pi2, &gc2(&pi2).unwrap()).valid);
        for seed in 0..20 {
            assert!(gc2(&random_dicycle_factorization(h.graph(), seed)).is_ok());
        }
    }

    #[test]
    fn constant_gc_violates_everywhere() {
        let h = host(7);
        let pi2 = named_partition(NamedPartition::Pi2, &h).unwrap();
        let constant = CoinShift::from_table(2, vec![PLUS; 2 * h.n_vertices()]).unwrap();
        let r = validate_coin_shift(&pi2, &constant);
        assert!(!r.valid);
        assert_eq!(r.violations, (0..h.n_vertices()).collect::<Vec<_>>());
    }

    #[test]
    fn enumeration_contains_both_families() {
        let h = host(3);
        let pi2 = named_partition(NamedPartition::Pi2, &h).unwrap();
        let all = enumerate_coin_shifts(&pi2).unwrap();
        assert_eq!(all.len(), 1 << h.n_vertices());
        assert!(all.iter().all(|gc| validate_coin_shift(&pi2, gc).valid));
        assert!(all.contains(&gc2(&pi2).unwrap()));
        assert!(all.contains(&gc1(&h, &pi2).unwrap()));
    }

    #[test]
    fn enumeration_size_limit() {
        let h = host(13);
        let p = named_partition(NamedPartition::Pi2, &h).unwrap();
        assert!(matches!(enumerate_coin_shifts(&p), Err(QwmError::TooLarge { .. })));
    }

    #[test]
    fn census_of_small_host() {
        let host = iterate_line_digraph(&make_bidirected_cycle(3).unwrap(), 1).unwrap();
        let p = named_partition(NamedPartition::Pi2, &host).unwrap();
        let census = census_all_tables(&p).unwrap();
        assert_eq!(census.tables, 1 << 12);
        assert_eq!(census.bijective, 1 << 6);
        assert_eq!(census.disagreements, 0);
    }

    #[test]
    fn triples_round_trip() {
        let h = host(5);
        let p = named_partition(NamedPartition::Pi1, &h).unwrap();
        let gc = gc1(&h, &p).unwrap();
        let back = CoinShift::from_triples(h.n_vertices(), 2, &gc.to_triples()).unwrap();
        assert_eq!(back, gc);
    }
}
