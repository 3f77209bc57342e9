//! Coined walk on a (line) digraph: state vectors, coin and shift steps.
//!
//! One step is `U = S * C`: the coin mixes the coin register at every
//! vertex, then the shift moves `|v, c_k>` to `|f_{C_k}(v), gc(v, c_k)>`.

pub mod legacy;

use num_complex::Complex64;

use crate::coin::CoinMatrix;
use crate::coin_shift::{validate_coin_shift, CoinShift};
use crate::error::{QwmError, Result};
use crate::graph::RegularDigraph;
use crate::partition::Partition;
use crate::UNITARY_TOL;

/// Amplitudes over `V x {c_1..c_m}`, indexed `v * m + c`.
#[derive(Debug, Clone, PartialEq)]
pub struct WalkState {
    degree: usize,
    amps: Vec<Complex64>,
    time: usize,
}

impl WalkState {
    pub fn zero(n_vertices: usize, degree: usize) -> Self {
        Self { degree, amps: vec![Complex64::new(0.0, 0.0); n_vertices * degree], time: 0 }
    }

    pub fn basis(n_vertices: usize, degree: usize, v: usize, c: usize) -> Self {
        let mut s = Self::zero(n_vertices, degree);
        s.amps[v * degree + c] = Complex64::new(1.0, 0.0);
        s
    }

    /// Builds a unit-norm state from `(vertex, coin, amplitude)` entries.
    /// Repeated entries add up.
    pub fn from_entries(n_vertices: usize, degree: usize, entries: &[(usize, usize, Complex64)]) -> Result<Self> {
        let mut s = Self::zero(n_vertices, degree);
        for &(v, c, a) in entries {
            if v >= n_vertices || c >= degree {
                return Err(QwmError::InvalidState(format!("entry ({v}, {c}) outside the state space")));
            }
            s.amps[v * degree + c] += a;
        }
        let norm = s.norm_sqr();
        if (norm - 1.0).abs() > UNITARY_TOL {
            return Err(QwmError::InvalidState(format!("initial state has squared norm {norm}")));
        }
        Ok(s)
    }

    pub fn from_amplitudes(degree: usize, amps: Vec<Complex64>) -> Result<Self> {
        if degree == 0 || !amps.len().is_multiple_of(degree) {
            return Err(QwmError::DimensionMismatch { expected: degree, found: amps.len() });
        }
        Ok(Self { degree, amps, time: 0 })
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn n_vertices(&self) -> usize {
        self.amps.len() / self.degree
    }

    pub fn len(&self) -> usize {
        self.amps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.amps.is_empty()
    }

    pub fn time(&self) -> usize {
        self.time
    }

    pub fn amplitude(&self, v: usize, c: usize) -> Complex64 {
        self.amps[v * self.degree + c]
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    /// Squared amplitude summed over coins at each vertex.
    pub fn vertex_probabilities(&self) -> impl Iterator<Item = f64> + '_ {
        self.amps.chunks(self.degree).map(|b| b.iter().map(|a| a.norm_sqr()).sum())
    }
}

/// Shift operator as a permutation of `V x coins`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ShiftOp {
    degree: usize,
    forward: Vec<usize>,
    inverse: Vec<usize>,
}

impl ShiftOp {
    /// Raw table `(v, c) -> (f_{C_c}(v), gc(v, c))`, bijective or not.
    pub fn table(p: &Partition, gc: &CoinShift) -> Vec<usize> {
        let m = p.degree();
        (0..p.n_vertices() * m)
            .map(|i| {
                let (v, c) = (i / m, i % m);
                p.successor(c, v) * m + gc.get(v, c)
            })
            .collect()
    }

    /// Wraps a permutation table, or returns `None` when it is not one.
    pub fn from_permutation(degree: usize, forward: Vec<usize>) -> Option<Self> {
        let n = forward.len();
        let mut inverse = vec![usize::MAX; n];
        for (i, &j) in forward.iter().enumerate() {
            if j >= n || inverse[j] != usize::MAX {
                return None;
            }
            inverse[j] = i;
        }
        Some(Self { degree, forward, inverse })
    }

    pub fn identity(n_vertices: usize, degree: usize) -> Self {
        let forward: Vec<usize> = (0..n_vertices * degree).collect();
        Self { degree, inverse: forward.clone(), forward }
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn len(&self) -> usize {
        self.forward.len()
    }

    pub fn is_empty(&self) -> bool {
        self.forward.is_empty()
    }

    pub fn image(&self, v: usize, c: usize) -> (usize, usize) {
        let j = self.forward[v * self.degree + c];
        (j / self.degree, j % self.degree)
    }

    pub fn forward(&self) -> &[usize] {
        &self.forward
    }

    pub fn inverse(&self) -> ShiftOp {
        Self { degree: self.degree, forward: self.inverse.clone(), inverse: self.forward.clone() }
    }
}

/// Checks the coin-shift constraint, then assembles the permutation.
pub fn build_shift_operator(p: &Partition, gc: &CoinShift) -> Result<ShiftOp> {
    let report = validate_coin_shift(p, gc);
    if !report.valid {
        return Err(QwmError::ConstraintViolation {
            rule: "each target vertex must receive every coin exactly once".into(),
            vertices: report.violations,
        });
    }
    let op = ShiftOp::from_permutation(p.degree(), ShiftOp::table(p, gc))
        .expect("a valid coin shift always yields a permutation");
    Ok(op)
}

pub fn coin_step(s: &WalkState, coin: &CoinMatrix) -> Result<WalkState> {
    let mut out = s.clone();
    coin_step_in_place(&mut out, coin)?;
    Ok(out)
}

fn coin_step_in_place(s: &mut WalkState, coin: &CoinMatrix) -> Result<()> {
    if coin.dim() != s.degree {
        return Err(QwmError::DimensionMismatch { expected: s.degree, found: coin.dim() });
    }
    let mut scratch = vec![Complex64::new(0.0, 0.0); s.degree];
    for block in s.amps.chunks_mut(s.degree) {
        coin.apply(block, &mut scratch);
    }
    Ok(())
}

pub fn shift_step(s: &WalkState, op: &ShiftOp) -> Result<WalkState> {
    if op.len() != s.len() || op.degree != s.degree {
        return Err(QwmError::DimensionMismatch { expected: op.len(), found: s.len() });
    }
    let amps = op.inverse.iter().map(|&i| s.amps[i]).collect();
    Ok(WalkState { degree: s.degree, amps, time: s.time })
}

/// Coin matrix plus assembled shift: everything needed to step a state.
#[derive(Debug, Clone)]
pub struct Walk {
    coin: CoinMatrix,
    shift: ShiftOp,
}

impl Walk {
    pub fn new(p: &Partition, gc: &CoinShift, coin: CoinMatrix) -> Result<Self> {
        if coin.dim() != p.degree() {
            return Err(QwmError::DimensionMismatch { expected: p.degree(), found: coin.dim() });
        }
        Ok(Self { shift: build_shift_operator(p, gc)?, coin })
    }

    pub fn shift(&self) -> &ShiftOp {
        &self.shift
    }

    pub fn coin(&self) -> &CoinMatrix {
        &self.coin
    }

    /// One application of `S * C`.
    pub fn step(&self, s: &WalkState) -> Result<WalkState> {
        let mut mixed = s.clone();
        coin_step_in_place(&mut mixed, &self.coin)?;
        let mut next = shift_step(&mixed, &self.shift)?;
        next.time = s.time + 1;
        Ok(next)
    }

    /// Streams `t_max + 1` states (including `t = 0`) to `visit`.
    pub fn evolve_with<F: FnMut(&WalkState)>(&self, initial: &WalkState, t_max: usize, mut visit: F) -> Result<()> {
        if initial.len() != self.shift.len() {
            return Err(QwmError::DimensionMismatch { expected: self.shift.len(), found: initial.len() });
        }
        let mut s = initial.clone();
        s.time = 0;
        visit(&s);
        for _ in 0..t_max {
            s = self.step(&s)?;
            visit(&s);
        }
        Ok(())
    }

    pub fn evolve(&self, initial: &WalkState, t_max: usize) -> Result<Vec<WalkState>> {
        let mut history = Vec::with_capacity(t_max + 1);
        self.evolve_with(initial, t_max, |s| history.push(s.clone()))?;
        Ok(history)
    }
}

/// Fails when a walk started from `initial` could reach the far side of the
/// line surrogate within `t_max` steps. Positions are the centered
/// coordinates of the base cycle of `n` vertices.
pub fn check_no_wrap(host: &RegularDigraph, initial: &WalkState, t_max: usize) -> Result<()> {
    let window = host.base_coordinates().len();
    let reach = (0..initial.n_vertices())
        .filter(|&v| (0..initial.degree).any(|c| initial.amplitude(v, c).norm_sqr() > 0.0))
        .flat_map(|v| host.path(v).iter().map(|&b| host.base_coordinates()[b].unsigned_abs() as usize))
        .max()
        .unwrap_or(0);
    // Support stays within `reach + t` of the origin; both edges must stay empty.
    let required = 2 * (reach + t_max) + 3;
    if window < required {
        return Err(QwmError::WrapRisk { window, required });
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coin::{MINUS, PLUS};
    use crate::coin_shift::{gc2, CoinShift};
    use crate::graph::{iterate_line_digraph, make_bidirected_cycle};
    use crate::partition::{named_partition, NamedPartition};

    fn pi2_walk(n: usize) -> (crate::graph::LineDigraph, Partition, Walk) {
        let host = iterate_line_digraph(&make_bidirected_cycle(n).unwrap(), 1).unwrap();
        let p = named_partition(NamedPartition::Pi2, &host).unwrap();
        let walk = Walk::new(&p, &gc2(&p).unwrap(), CoinMatrix::hadamard()).unwrap();
        (host, p, walk)
    }

    #[test]
    fn transmit_moves_forward_with_coin_kept() {
        let (host, _, walk) = pi2_walk(11);
        let g = host.graph();
        let from = g.vertex_of_path(&[10, 0]).unwrap();
        let to = g.vertex_of_path(&[0, 1]).unwrap();
        assert_eq!(walk.shift().image(from, MINUS), (to, MINUS));
    }

    #[test]
    fn constant_gc_is_rejected() {
        let (host, p, _) = pi2_walk(7);
        let gc = CoinShift::from_table(2, vec![PLUS; 2 * host.n_vertices()]).unwrap();
        assert!(matches!(build_shift_operator(&p, &gc), Err(QwmError::ConstraintViolation { .. })));
    }

    #[test]
    fn identity_coin_keeps_state() {
        let s = WalkState::basis(4, 2, 1, MINUS);
        assert_eq!(coin_step(&s, &CoinMatrix::identity(2)).unwrap(), s);
    }

    #[test]
    fn hadamard_splits_plus() {
        let s = WalkState::basis(3, 2, 2, PLUS);
        let out = coin_step(&s, &CoinMatrix::hadamard()).unwrap();
        let h = std::f64::consts::FRAC_1_SQRT_2;
        assert!((out.amplitude(2, PLUS) - h).norm() < 1e-15);
        assert!((out.amplitude(2, MINUS) - h).norm() < 1e-15);
    }

    #[test]
    fn coin_dimension_checked() {
        let s = WalkState::basis(3, 2, 0, PLUS);
        assert!(coin_step(&s, &CoinMatrix::identity(3)).is_err());
    }

    #[test]
    fn shift_then_inverse_restores() {
        let (_, _, walk) = pi2_walk(9);
        let n = walk.shift().len();
        let amps = (0..n).map(|i| Complex64::new(i as f64, -(i as f64) * 0.5)).collect();
        let s = WalkState::from_amplitudes(2, amps).unwrap();
        let back = shift_step(&shift_step(&s, walk.shift()).unwrap(), &walk.shift().inverse()).unwrap();
        assert_eq!(back, s);
        let id = ShiftOp::identity(s.n_vertices(), 2);
        assert_eq!(shift_step(&s, &id).unwrap(), s);
    }

    #[test]
    fn basis_state_moves_to_image() {
        let (_, _, walk) = pi2_walk(9);
        let s = WalkState::basis(18, 2, 4, PLUS);
        let out = shift_step(&s, walk.shift()).unwrap();
        let (v, c) = walk.shift().image(4, PLUS);
        assert_eq!(out.amplitude(v, c), Complex64::new(1.0, 0.0));
        assert!((out.norm_sqr() - 1.0).abs() == 0.0);
    }

    #[test]
    fn history_includes_t0() {
        let (_, _, walk) = pi2_walk(9);
        let s = WalkState::basis(18, 2, 0, PLUS);
        let h = walk.evolve(&s, 3).unwrap();
        assert_eq!(h.len(), 4);
        assert_eq!(h[0], s);
        assert_eq!(h[3].time(), 3);
    }

    #[test]
    fn wrap_risk_detected() {
        let (host, _, _) = pi2_walk(11);
        let v = host.graph().vertex_of_path(&[10, 0]).unwrap();
        let s = WalkState::basis(22, 2, v, PLUS);
        assert!(check_no_wrap(host.graph(), &s, 3).is_ok());
        assert!(matches!(check_no_wrap(host.graph(), &s, 4), Err(QwmError::WrapRisk { .. })));
    }
}
