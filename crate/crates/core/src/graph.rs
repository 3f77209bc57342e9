//! Regular digraphs, dicycle factorizations and iterated line digraphs.
//!
//! Every vertex carries a path tuple over the vertices of the base graph.
//! For a base graph the tuple is the single vertex label; for the `d`-fold
//! line digraph it is a walk `(x_{-d}, ..., x_{-1}, x_0)` of `d` arcs whose
//! last entry is the walker's current position.

use std::collections::VecDeque;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{QwmError, Result};

/// An `m`-out-regular, `m`-in-regular simple digraph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RegularDigraph {
    degree: usize,
    out: Vec<Vec<usize>>,
    paths: Vec<Vec<usize>>,
    /// Reporting coordinate of each base-graph vertex label.
    coords: Vec<i64>,
}

impl RegularDigraph {
    /// Builds a base graph (depth 0) from ordered out-neighbor lists.
    pub fn from_out_lists(out: Vec<Vec<usize>>) -> Result<Self> {
        let n = out.len();
        let paths = (0..n).map(|v| vec![v]).collect();
        let coords = (0..n as i64).collect();
        Self::with_paths(out, paths, coords)
    }

    fn with_paths(out: Vec<Vec<usize>>, paths: Vec<Vec<usize>>, coords: Vec<i64>) -> Result<Self> {
        let n = out.len();
        if n == 0 {
            return Err(QwmError::InvalidGraph("empty vertex set".into()));
        }
        let degree = out[0].len();
        if degree == 0 {
            return Err(QwmError::InvalidGraph("degree 0".into()));
        }
        let mut indeg = vec![0usize; n];
        for (v, nbrs) in out.iter().enumerate() {
            if nbrs.len() != degree {
                return Err(QwmError::InvalidGraph(format!(
                    "vertex {v} has out-degree {} (expected {degree})",
                    nbrs.len()
                )));
            }
            for (i, &w) in nbrs.iter().enumerate() {
                if w >= n {
                    return Err(QwmError::InvalidGraph(format!("arc ({v},{w}) leaves the vertex set")));
                }
                if nbrs[..i].contains(&w) {
                    return Err(QwmError::InvalidGraph(format!("parallel arcs ({v},{w})")));
                }
                indeg[w] += 1;
            }
        }
        if let Some(w) = indeg.iter().position(|&d| d != degree) {
            return Err(QwmError::InvalidGraph(format!("vertex {w} has in-degree {} (expected {degree})", indeg[w])));
        }
        Ok(Self { degree, out, paths, coords })
    }

    /// Replaces the reporting coordinates of the base vertex labels.
    pub fn with_coordinates(mut self, coords: Vec<i64>) -> Result<Self> {
        let base_n = self.paths.iter().flatten().max().map_or(0, |&m| m + 1);
        if coords.len() < base_n {
            return Err(QwmError::InvalidGraph(format!("{} coordinates for {base_n} base vertices", coords.len())));
        }
        self.coords = coords;
        Ok(self)
    }

    pub fn n_vertices(&self) -> usize {
        self.out.len()
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    /// Number of arcs in each path tuple, i.e. the memory depth.
    pub fn depth(&self) -> usize {
        self.paths[0].len() - 1
    }

    pub fn out_neighbors(&self, v: usize) -> &[usize] {
        &self.out[v]
    }

    pub fn has_arc(&self, u: usize, v: usize) -> bool {
        self.out[u].contains(&v)
    }

    pub fn arcs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.out.iter().enumerate().flat_map(|(u, nbrs)| nbrs.iter().map(move |&v| (u, v)))
    }

    pub fn path(&self, v: usize) -> &[usize] {
        &self.paths[v]
    }

    /// Base-graph label of the walker's current position at vertex `v`.
    pub fn position(&self, v: usize) -> usize {
        current_position(&self.paths[v])
    }

    /// Reporting coordinate of the current position at vertex `v`.
    pub fn coordinate(&self, v: usize) -> i64 {
        self.coords[self.position(v)]
    }

    pub fn base_coordinates(&self) -> &[i64] {
        &self.coords
    }

    /// Looks up the vertex whose path tuple equals `path` (base labels).
    pub fn vertex_of_path(&self, path: &[usize]) -> Option<usize> {
        self.paths.iter().position(|p| p == path)
    }

    /// Dense (0,1) adjacency matrix. Intended for tests and small graphs.
    pub fn adjacency_matrix(&self) -> Vec<Vec<u8>> {
        let n = self.n_vertices();
        let mut m = vec![vec![0u8; n]; n];
        for (u, v) in self.arcs() {
            m[u][v] = 1;
        }
        m
    }

    pub fn to_document(&self) -> GraphDocument {
        GraphDocument {
            n: self.n_vertices(),
            m: self.degree,
            arcs: self.arcs().map(|(u, v)| [u, v]).collect(),
            paths: (self.depth() > 0).then(|| self.paths.clone()),
            coordinates: self.coords.iter().enumerate().any(|(i, &x)| x != i as i64).then(|| self.coords.clone()),
        }
    }

    pub fn from_document(doc: &GraphDocument) -> Result<Self> {
        let mut out = vec![Vec::with_capacity(doc.m); doc.n];
        for &[u, v] in &doc.arcs {
            if u >= doc.n {
                return Err(QwmError::InvalidGraph(format!("arc tail {u} out of range")));
            }
            out[u].push(v);
        }
        let g = Self::from_out_lists(out)?;
        if g.degree != doc.m {
            return Err(QwmError::InvalidGraph(format!("declared m={} but arcs give {}", doc.m, g.degree)));
        }
        let g = match &doc.paths {
            None => g,
            Some(paths) => {
                if paths.len() != doc.n {
                    return Err(QwmError::InvalidGraph("path count differs from n".into()));
                }
                let base_n = paths.iter().flatten().max().map_or(0, |&m| m + 1);
                Self::with_paths(g.out, paths.clone(), (0..base_n as i64).collect())?
            }
        };
        match &doc.coordinates {
            None => Ok(g),
            Some(coords) => g.with_coordinates(coords.clone()),
        }
    }
}

/// Structured-text form of a digraph.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphDocument {
    pub n: usize,
    pub m: usize,
    pub arcs: Vec<[usize; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub paths: Option<Vec<Vec<usize>>>,
    /// Reporting coordinates of the base labels, when not `0, 1, 2, ...`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub coordinates: Option<Vec<i64>>,
}

/// The last entry of a path tuple.
pub fn current_position<T: Copy>(tuple: &[T]) -> T {
    *tuple.last().expect("path tuple is never empty")
}

/// Bidirected `n`-cycle. Vertex `x` has out-neighbors `[x+1, x-1]` (mod `n`)
/// and is reported at the centered coordinate in `[-(n-1)/2, n/2]`.
pub fn make_bidirected_cycle(n: usize) -> Result<RegularDigraph> {
    if n < 3 {
        return Err(QwmError::InvalidGraph(format!("bidirected cycle needs n >= 3, got {n}")));
    }
    let out = (0..n).map(|x| vec![(x + 1) % n, (x + n - 1) % n]).collect();
    let coords = (0..n).map(|x| centered_coordinate(x, n)).collect();
    RegularDigraph::from_out_lists(out)?.with_coordinates(coords)
}

/// One-directional `n`-cycle (1-regular).
pub fn make_directed_cycle(n: usize) -> Result<RegularDigraph> {
    if n < 2 {
        return Err(QwmError::InvalidGraph(format!("directed cycle needs n >= 2, got {n}")));
    }
    RegularDigraph::from_out_lists((0..n).map(|x| vec![(x + 1) % n]).collect())
}

pub fn centered_coordinate(label: usize, n: usize) -> i64 {
    if label <= (n - 1) / 2 {
        label as i64
    } else {
        label as i64 - n as i64
    }
}

pub fn label_of_coordinate(coord: i64, n: usize) -> usize {
    coord.rem_euclid(n as i64) as usize
}

/// A dicycle factorization: `m` arc-disjoint permutations covering every arc.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Factorization(Vec<Vec<usize>>);

impl Factorization {
    pub fn new(perms: Vec<Vec<usize>>) -> Self {
        Self(perms)
    }

    pub fn perms(&self) -> &[Vec<usize>] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Index of the factor containing the arc `(u, v)`.
    pub fn class_of_arc(&self, u: usize, v: usize) -> Option<usize> {
        self.0.iter().position(|p| p[u] == v)
    }

    pub fn validate(&self, g: &RegularDigraph) -> Result<()> {
        let n = g.n_vertices();
        if self.0.len() != g.degree() {
            return Err(QwmError::InvalidFactorization(format!(
                "{} factors for a {}-regular graph",
                self.0.len(),
                g.degree()
            )));
        }
        let mut used = vec![vec![false; g.degree()]; n];
        for (k, perm) in self.0.iter().enumerate() {
            if perm.len() != n {
                return Err(QwmError::InvalidFactorization(format!("factor {k} has length {}", perm.len())));
            }
            let mut hit = vec![false; n];
            for (u, &v) in perm.iter().enumerate() {
                let slot = g
                    .out_neighbors(u)
                    .iter()
                    .position(|&w| w == v)
                    .ok_or_else(|| QwmError::InvalidFactorization(format!("factor {k} uses non-arc ({u},{v})")))?;
                if used[u][slot] {
                    return Err(QwmError::InvalidFactorization(format!("arc ({u},{v}) used twice")));
                }
                used[u][slot] = true;
                if std::mem::replace(&mut hit[v], true) {
                    return Err(QwmError::InvalidFactorization(format!("factor {k} is not a permutation")));
                }
            }
        }
        Ok(())
    }
}

/// Splits an `m`-regular digraph into `m` permutations by repeatedly taking a
/// perfect matching of the tail/head bipartite incidence graph. Regular
/// bipartite graphs always have one, and removing it leaves an
/// `(m-1)`-regular graph. With a seed the search order is shuffled.
pub fn dicycle_factorization(g: &RegularDigraph, seed: Option<u64>) -> Factorization {
    let mut rng = seed.map(ChaCha8Rng::seed_from_u64);
    let n = g.n_vertices();
    let mut remaining: Vec<Vec<usize>> = (0..n).map(|u| g.out_neighbors(u).to_vec()).collect();
    let mut perms = Vec::with_capacity(g.degree());
    for _ in 0..g.degree() {
        let mut order: Vec<usize> = (0..n).collect();
        if let Some(rng) = rng.as_mut() {
            order.shuffle(rng);
            for nbrs in remaining.iter_mut() {
                nbrs.shuffle(rng);
            }
        }
        let perm = perfect_matching(&remaining, &order);
        for (u, &v) in perm.iter().enumerate() {
            remaining[u].retain(|&w| w != v);
        }
        perms.push(perm);
    }
    Factorization(perms)
}

/// BFS augmenting-path matching on a regular bipartite graph given by
/// `adj[left] = right neighbors`. Returns `left -> right`.
fn perfect_matching(adj: &[Vec<usize>], order: &[usize]) -> Vec<usize> {
    const FREE: usize = usize::MAX;
    let n = adj.len();
    let mut match_left = vec![FREE; n];
    let mut match_right = vec![FREE; n];
    let mut parent = vec![FREE; n]; // right vertex -> left vertex it was reached from
    let mut seen_stamp = vec![usize::MAX; n];
    for (stamp, &root) in order.iter().enumerate() {
        let mut queue = VecDeque::from([root]);
        let mut end = FREE;
        'bfs: while let Some(u) = queue.pop_front() {
            for &r in &adj[u] {
                if seen_stamp[r] == stamp {
                    continue;
                }
                seen_stamp[r] = stamp;
                parent[r] = u;
                if match_right[r] == FREE {
                    end = r;
                    break 'bfs;
                }
                queue.push_back(match_right[r]);
            }
        }
        assert!(end != FREE, "regular bipartite graph always has a perfect matching");
        let mut r = end;
        while r != FREE {
            let u = parent[r];
            let prev = match_left[u];
            match_left[u] = r;
            match_right[r] = u;
            r = prev;
        }
    }
    match_left
}

/// Line digraph with the block labeling under which every block-row of the
/// adjacency matrix reads `(M(D_1) ... M(D_m))`.
///
/// Vertex `k*N + b` is the arc of `g` that belongs to factor `D_k` and ends
/// at `b`; its out-arcs go to `j*N + D_j(b)` for every `j`.
pub fn line_digraph(g: &RegularDigraph, factors: &Factorization) -> Result<RegularDigraph> {
    factors.validate(g)?;
    let n = g.n_vertices();
    let m = g.degree();
    let mut inverse = vec![vec![0usize; n]; m];
    for (k, perm) in factors.perms().iter().enumerate() {
        for (u, &v) in perm.iter().enumerate() {
            inverse[k][v] = u;
        }
    }
    let mut out = Vec::with_capacity(n * m);
    let mut paths = Vec::with_capacity(n * m);
    for (k, inv) in inverse.iter().enumerate() {
        for b in 0..n {
            let tail = inv[b];
            let mut path = g.path(tail).to_vec();
            path.push(g.position(b));
            paths.push(path);
            out.push((0..m).map(|j| j * n + factors.perms()[j][b]).collect());
            debug_assert_eq!(factors.perms()[k][tail], b);
        }
    }
    RegularDigraph::with_paths(out, paths, g.coords.clone())
}

/// The "determinant-style" split of the block matrix: factor `j` places
/// `M(D_{(i+j) mod m})` at block `(i, (i+j) mod m)`.
pub fn block_shift_factorization(factors: &Factorization, n: usize) -> Factorization {
    let m = factors.len();
    let perms = (0..m)
        .map(|j| {
            (0..m * n)
                .map(|idx| {
                    let (i, a) = (idx / n, idx % n);
                    let k = (i + j) % m;
                    k * n + factors.perms()[k][a]
                })
                .collect()
        })
        .collect();
    Factorization(perms)
}

/// The `d`-fold line digraph together with the factorizations used to build it.
#[derive(Debug, Clone)]
pub struct LineDigraph {
    base: RegularDigraph,
    base_factors: Factorization,
    graph: RegularDigraph,
    factors: Factorization,
}

impl LineDigraph {
    pub fn base(&self) -> &RegularDigraph {
        &self.base
    }

    /// Factorization of the base graph used at the first level.
    pub fn base_factors(&self) -> &Factorization {
        &self.base_factors
    }

    pub fn graph(&self) -> &RegularDigraph {
        &self.graph
    }

    /// Dicycle factorization of the iterated graph itself.
    pub fn factors(&self) -> &Factorization {
        &self.factors
    }

    pub fn depth(&self) -> usize {
        self.graph.depth()
    }

    pub fn n_vertices(&self) -> usize {
        self.graph.n_vertices()
    }

    pub fn degree(&self) -> usize {
        self.graph.degree()
    }

    /// Size of one block of the Theorem-1 style labeling (`N * m^(d-1)`).
    /// Vertices `i` and `i + block_len()` share their out-neighborhood.
    pub fn block_len(&self) -> usize {
        self.n_vertices() / self.degree()
    }
}

/// Iterates the line-digraph construction `d` times starting from the
/// deterministic factorization of `g`.
pub fn iterate_line_digraph(g: &RegularDigraph, d: usize) -> Result<LineDigraph> {
    iterate_line_digraph_with(g, dicycle_factorization(g, None), d)
}

pub fn iterate_line_digraph_with(g: &RegularDigraph, base_factors: Factorization, d: usize) -> Result<LineDigraph> {
    base_factors.validate(g)?;
    let mut graph = g.clone();
    let mut factors = base_factors.clone();
    for _ in 0..d {
        let n = graph.n_vertices();
        graph = line_digraph(&graph, &factors)?;
        factors = block_shift_factorization(&factors, n);
    }
    Ok(LineDigraph { base: g.clone(), base_factors, graph, factors })
}

/// Window size for a line surrogate that cannot wrap within `t_max` steps.
pub fn no_wrap_window(t_max: usize, d: usize) -> usize {
    let n = 2 * t_max + 2 * d + 3;
    n.max(3) | 1
}
