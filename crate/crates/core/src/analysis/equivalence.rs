//! Amplitude recurrences for the reflect/transmit walk (`beta`) and the
//! standard Hadamard walk (`alpha`) on the line, and the phase map that
//! carries one onto the other.
//!
//! `beta(prev, cur, c)` is the amplitude of the path vertex `(prev, cur)`
//! with coin `c`; `alpha(x, c)` is the amplitude of `|x, c>`.

use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_4};

use num_complex::Complex64;

use super::PositionDistribution;
use crate::coin::{MINUS, PLUS};
use crate::error::{QwmError, Result};
use crate::graph::RegularDigraph;
use crate::walk::WalkState;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// Amplitudes `beta(prev, cur, c)` with `|prev - cur| = 1`, `|cur| <= radius`.
#[derive(Debug, Clone, PartialEq)]
pub struct BetaField {
    pub t: usize,
    radius: i64,
    data: Vec<Complex64>,
}

impl BetaField {
    pub fn zero(radius: i64) -> Self {
        Self { t: 0, radius, data: vec![ZERO; (2 * radius as usize + 1) * 4] }
    }

    /// `1/2 |-1,0>|+1> - 1/2 |-1,0>|-1> - 1/2 |1,0>|+1> + 1/2 |1,0>|-1>`
    pub fn symmetric_initial() -> Self {
        let mut b = Self::zero(1);
        b.set(-1, 0, PLUS, Complex64::new(0.5, 0.0));
        b.set(-1, 0, MINUS, Complex64::new(-0.5, 0.0));
        b.set(1, 0, PLUS, Complex64::new(-0.5, 0.0));
        b.set(1, 0, MINUS, Complex64::new(0.5, 0.0));
        b
    }

    pub fn radius(&self) -> i64 {
        self.radius
    }

    fn index(&self, prev: i64, cur: i64, c: usize) -> Option<usize> {
        if cur.abs() > self.radius {
            return None;
        }
        let side = match prev - cur {
            -1 => 0,
            1 => 1,
            _ => return None,
        };
        Some((((cur + self.radius) as usize) * 2 + side) * 2 + c)
    }

    pub fn get(&self, prev: i64, cur: i64, c: usize) -> Complex64 {
        self.index(prev, cur, c).map_or(ZERO, |i| self.data[i])
    }

    /// Panics when `(prev, cur)` is not a unit step inside the radius.
    pub fn set(&mut self, prev: i64, cur: i64, c: usize, value: Complex64) {
        let i = self.index(prev, cur, c).expect("beta entry outside the field");
        self.data[i] = value;
    }

    pub fn norm_sqr(&self) -> f64 {
        self.data.iter().map(|a| a.norm_sqr()).sum()
    }

    pub fn entries(&self) -> impl Iterator<Item = (i64, i64, usize, Complex64)> + '_ {
        (-self.radius..=self.radius).flat_map(move |cur| {
            [cur - 1, cur + 1]
                .into_iter()
                .flat_map(move |prev| [PLUS, MINUS].into_iter().map(move |c| (prev, cur, c, self.get(prev, cur, c))))
        })
    }

    /// `P(x) = sum over prev and c of |beta(prev, x, c)|^2`
    pub fn marginal(&self) -> PositionDistribution {
        PositionDistribution::from_pairs(self.t, self.entries().map(|(_, cur, _, a)| (cur, a.norm_sqr())))
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.entries()
            .chain(other.entries())
            .map(|(p, x, c, _)| (self.get(p, x, c) - other.get(p, x, c)).norm())
            .fold(0.0, f64::max)
    }
}

/// One step of the reflect/transmit recurrence with the Hadamard coin:
///
/// ```text
/// beta'(x, y, +1) = (beta(y, x, +1) + beta(y, x, -1)) / sqrt 2
/// beta'(x, y, -1) = (beta(2x-y, x, +1) - beta(2x-y, x, -1)) / sqrt 2
/// ```
pub fn beta_recurrence_step(b: &BetaField) -> BetaField {
    let mut next = BetaField::zero(b.radius + 1);
    next.t = b.t + 1;
    for y in -next.radius..=next.radius {
        for x in [y - 1, y + 1] {
            let reflect = (b.get(y, x, PLUS) + b.get(y, x, MINUS)) * FRAC_1_SQRT_2;
            let back = 2 * x - y;
            let transmit = (b.get(back, x, PLUS) - b.get(back, x, MINUS)) * FRAC_1_SQRT_2;
            next.set(x, y, PLUS, reflect);
            next.set(x, y, MINUS, transmit);
        }
    }
    next
}

/// Largest magnitude over `x` of
/// `beta(x,x+1,+) + beta(x,x+1,-) + beta(x,x-1,+) + beta(x,x-1,-)` and
/// `beta(x+1,x,+) + beta(x-1,x,+)`.
pub fn check_beta_constraint(b: &BetaField) -> f64 {
    let r = b.radius + 1;
    (-r..=r)
        .map(|x| {
            let outgoing =
                b.get(x, x + 1, PLUS) + b.get(x, x + 1, MINUS) + b.get(x, x - 1, PLUS) + b.get(x, x - 1, MINUS);
            let incoming = b.get(x + 1, x, PLUS) + b.get(x - 1, x, PLUS);
            outgoing.norm().max(incoming.norm())
        })
        .fold(0.0, f64::max)
}

/// Amplitudes `alpha(x, c)` of the memoryless walk, `|x| <= radius`.
#[derive(Debug, Clone, PartialEq)]
pub struct AlphaField {
    pub t: usize,
    radius: i64,
    data: Vec<Complex64>,
}

impl AlphaField {
    pub fn zero(radius: i64) -> Self {
        Self { t: 0, radius, data: vec![ZERO; (2 * radius as usize + 1) * 2] }
    }

    /// `|0> (|+1> + i |-1>) / sqrt 2`
    pub fn symmetric_initial() -> Self {
        let mut a = Self::zero(0);
        a.set(0, PLUS, Complex64::new(FRAC_1_SQRT_2, 0.0));
        a.set(0, MINUS, Complex64::new(0.0, FRAC_1_SQRT_2));
        a
    }

    pub fn radius(&self) -> i64 {
        self.radius
    }

    pub fn get(&self, x: i64, c: usize) -> Complex64 {
        if x.abs() > self.radius {
            ZERO
        } else {
            self.data[((x + self.radius) as usize) * 2 + c]
        }
    }

    pub fn set(&mut self, x: i64, c: usize, value: Complex64) {
        assert!(x.abs() <= self.radius, "alpha entry outside the field");
        self.data[((x + self.radius) as usize) * 2 + c] = value;
    }

    pub fn norm_sqr(&self) -> f64 {
        self.data.iter().map(|a| a.norm_sqr()).sum()
    }

    pub fn marginal(&self) -> PositionDistribution {
        PositionDistribution::from_pairs(
            self.t,
            (-self.radius..=self.radius).map(|x| (x, self.get(x, PLUS).norm_sqr() + self.get(x, MINUS).norm_sqr())),
        )
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        let r = self.radius.max(other.radius);
        (-r..=r).flat_map(|x| [PLUS, MINUS].map(|c| (self.get(x, c) - other.get(x, c)).norm())).fold(0.0, f64::max)
    }
}

/// One Hadamard step of the memoryless walk:
/// `alpha'(x,+) = (alpha(x-1,+) + alpha(x-1,-))/sqrt 2`,
/// `alpha'(x,-) = (alpha(x+1,+) - alpha(x+1,-))/sqrt 2`.
pub fn qwom_step(a: &AlphaField) -> AlphaField {
    let mut next = AlphaField::zero(a.radius + 1);
    next.t = a.t + 1;
    for x in -next.radius..=next.radius {
        next.set(x, PLUS, (a.get(x - 1, PLUS) + a.get(x - 1, MINUS)) * FRAC_1_SQRT_2);
        next.set(x, MINUS, (a.get(x + 1, PLUS) - a.get(x + 1, MINUS)) * FRAC_1_SQRT_2);
    }
    next
}

/// Maps a reflect/transmit field at time `t` to memoryless amplitudes:
///
/// ```text
/// alpha(x,+1) = (-1)^((t+x)/2) e^{i pi/4} (-i beta(x-1,x,+1) - beta(x-1,x,-1))
/// alpha(x,-1) = (-1)^((t+x)/2) e^{i pi/4} (-beta(x+1,x,+1) + i beta(x+1,x,-1))
/// ```
///
/// Only sites with `t + x` even are mapped; every other site must be empty.
pub fn alpha_from_beta(b: &BetaField, t: usize) -> Result<AlphaField> {
    let mut a = AlphaField::zero(b.radius);
    a.t = t;
    let i = Complex64::new(0.0, 1.0);
    let rotation = Complex64::from_polar(1.0, FRAC_PI_4);
    for x in -b.radius..=b.radius {
        let sum = t as i64 + x;
        if sum.rem_euclid(2) != 0 {
            let occupied = [x - 1, x + 1].into_iter().any(|p| b.get(p, x, PLUS) != ZERO || b.get(p, x, MINUS) != ZERO);
            if occupied {
                return Err(QwmError::OffSublattice { x, t });
            }
            continue;
        }
        let sign = if (sum / 2).rem_euclid(2) == 0 { 1.0 } else { -1.0 };
        let phase = rotation * sign;
        a.set(x, PLUS, phase * (-i * b.get(x - 1, x, PLUS) - b.get(x - 1, x, MINUS)));
        a.set(x, MINUS, phase * (-b.get(x + 1, x, PLUS) + i * b.get(x + 1, x, MINUS)));
    }
    Ok(a)
}

/// Reads a walk state on the depth-1 line digraph of a centered cycle as a
/// beta field.
pub fn beta_from_state(host: &RegularDigraph, s: &WalkState) -> Result<BetaField> {
    if host.depth() != 1 || s.degree() != 2 || s.n_vertices() != host.n_vertices() {
        return Err(QwmError::DimensionMismatch { expected: host.n_vertices(), found: s.n_vertices() });
    }
    let window = host.base_coordinates().len() as i64;
    let mut b = BetaField::zero((window - 1) / 2);
    b.t = s.time();
    for v in 0..host.n_vertices() {
        let path = host.path(v);
        let (prev, cur) = (host.base_coordinates()[path[0]], host.base_coordinates()[path[1]]);
        for c in [PLUS, MINUS] {
            let a = s.amplitude(v, c);
            if b.index(prev, cur, c).is_some() {
                b.set(prev, cur, c, a);
            } else if a != ZERO {
                return Err(QwmError::InvalidState(format!("amplitude on wrapped arc ({prev}, {cur})")));
            }
        }
    }
    Ok(b)
}

/// Reads a walk state on a centered cycle (no memory) as an alpha field.
pub fn alpha_from_state(host: &RegularDigraph, s: &WalkState) -> Result<AlphaField> {
    if host.depth() != 0 || s.degree() != 2 || s.n_vertices() != host.n_vertices() {
        return Err(QwmError::DimensionMismatch { expected: host.n_vertices(), found: s.n_vertices() });
    }
    let window = host.n_vertices() as i64;
    let mut a = AlphaField::zero((window - 1) / 2);
    a.t = s.time();
    for v in 0..host.n_vertices() {
        for c in [PLUS, MINUS] {
            a.set(host.coordinate(v), c, s.amplitude(v, c));
        }
    }
    Ok(a)
}
