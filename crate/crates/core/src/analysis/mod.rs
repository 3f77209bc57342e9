//! Position statistics of walk histories.

mod checks;
mod distinct;
mod equivalence;
mod scaling;

pub use checks::{
    random_memory_state, recycled_correspondence, reflect_transmit_correspondence, reflect_transmit_equivalence,
    CorrespondenceReport, EquivalenceReport,
};
pub use distinct::{count_distinct_dicycle_gc2_walks, DistinctWalkReport};
pub use equivalence::{
    alpha_from_beta, alpha_from_state, beta_from_state, beta_recurrence_step, check_beta_constraint, qwom_step,
    AlphaField, BetaField,
};
pub use scaling::{classify_scaling, ScalingFit, ScalingVerdict, BALLISTIC_DOMINANCE, DIFFUSIVE_DOMINANCE};

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{QwmError, Result};
use crate::graph::RegularDigraph;
use crate::walk::WalkState;

/// `P(x)` over current positions at one time step. Exact zeros are omitted.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PositionDistribution {
    pub t: usize,
    pub probs: BTreeMap<i64, f64>,
}

impl PositionDistribution {
    pub fn from_pairs(t: usize, pairs: impl IntoIterator<Item = (i64, f64)>) -> Self {
        let mut probs = BTreeMap::new();
        for (x, p) in pairs {
            if p != 0.0 {
                *probs.entry(x).or_insert(0.0) += p;
            }
        }
        Self { t, probs }
    }

    pub fn get(&self, x: i64) -> f64 {
        self.probs.get(&x).copied().unwrap_or(0.0)
    }

    pub fn total(&self) -> f64 {
        self.probs.values().sum()
    }

    pub fn mean(&self) -> f64 {
        self.probs.iter().map(|(&x, &p)| p * x as f64).sum()
    }

    pub fn iter(&self) -> impl Iterator<Item = (i64, f64)> + '_ {
        self.probs.iter().map(|(&x, &p)| (x, p))
    }

    /// Largest `|P(x) - Q(x)|`.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.probs.keys().chain(other.probs.keys()).map(|&x| (self.get(x) - other.get(x)).abs()).fold(0.0, f64::max)
    }

    /// `1/2 * sum |P(x) - Q(x)|`.
    pub fn total_variation(&self, other: &Self) -> f64 {
        let keys: std::collections::BTreeSet<i64> = self.probs.keys().chain(other.probs.keys()).copied().collect();
        0.5 * keys.iter().map(|&x| (self.get(x) - other.get(x)).abs()).sum::<f64>()
    }
}

/// Sums `|amplitude|^2` over every vertex whose current position is `x`
/// and over all coins.
pub fn position_marginal(host: &RegularDigraph, s: &WalkState) -> PositionDistribution {
    PositionDistribution::from_pairs(
        s.time(),
        s.vertex_probabilities().enumerate().map(|(v, p)| (host.coordinate(v), p)),
    )
}

/// `sum p(x) x^2 - (sum p(x) x)^2`
pub fn variance(d: &PositionDistribution) -> f64 {
    let second: f64 = d.probs.iter().map(|(&x, &p)| p * (x * x) as f64).sum();
    let mean = d.mean();
    second - mean * mean
}

/// Relative slack on the `P(x) >= 1/N` test, so that exactly uniform
/// distributions count every site despite rounding.
const OCCUPANCY_SLACK: f64 = 1e-12;

/// `#{x : P(x) >= 1/N} / N`
pub fn occupancy_rate(d: &PositionDistribution, range: usize) -> Result<f64> {
    if range == 0 {
        return Err(QwmError::InvalidState("occupancy range N must be positive".into()));
    }
    let threshold = (1.0 - OCCUPANCY_SLACK) / range as f64;
    let count = d.probs.values().filter(|&&p| p >= threshold).count();
    Ok(count as f64 / range as f64)
}

/// `P(0, t)` for every step of a history.
pub fn origin_probability_series(history: &[PositionDistribution]) -> Vec<f64> {
    history.iter().map(|d| d.get(0)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coin::{MINUS, PLUS};
    use crate::graph::{iterate_line_digraph, make_bidirected_cycle};
    use num_complex::Complex64;

    fn dist(pairs: &[(i64, f64)]) -> PositionDistribution {
        PositionDistribution::from_pairs(0, pairs.iter().copied())
    }

    #[test]
    fn marginal_over_memory_and_coin() {
        let host = iterate_line_digraph(&make_bidirected_cycle(7).unwrap(), 1).unwrap();
        let g = host.graph();
        let a = g.vertex_of_path(&[6, 0]).unwrap();
        let b = g.vertex_of_path(&[0, 1]).unwrap();
        let s = WalkState::basis(14, 2, a, PLUS);
        assert_eq!(position_marginal(g, &s).probs, BTreeMap::from([(0, 1.0)]));
        let h = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
        let s = WalkState::from_entries(14, 2, &[(a, PLUS, h), (b, MINUS, h)]).unwrap();
        let m = position_marginal(g, &s);
        assert!((m.get(0) - 0.5).abs() < 1e-15 && (m.get(1) - 0.5).abs() < 1e-15);
    }

    #[test]
    fn variance_examples() {
        assert_eq!(variance(&dist(&[(0, 1.0)])), 0.0);
        assert_eq!(variance(&dist(&[(-1, 0.5), (1, 0.5)])), 1.0);
    }

    #[test]
    fn occupancy_examples() {
        let n = 7;
        let uniform = dist(&(0..n).map(|x| (x as i64, 1.0 / n as f64)).collect::<Vec<_>>());
        assert_eq!(occupancy_rate(&uniform, n).unwrap(), 1.0);
        assert_eq!(occupancy_rate(&dist(&[(3, 1.0)]), 100).unwrap(), 0.01);
        assert!(occupancy_rate(&uniform, 0).is_err());
    }

    #[test]
    fn origin_series_starts_at_one() {
        let h = vec![dist(&[(0, 1.0)]), dist(&[(-1, 0.5), (1, 0.5)])];
        assert_eq!(origin_probability_series(&h), vec![1.0, 0.0]);
    }

    #[test]
    fn tv_distance() {
        let a = dist(&[(0, 0.5), (1, 0.5)]);
        let b = dist(&[(0, 0.5), (2, 0.5)]);
        assert_eq!(a.total_variation(&b), 0.5);
        assert_eq!(a.max_abs_diff(&b), 0.5);
    }
}
