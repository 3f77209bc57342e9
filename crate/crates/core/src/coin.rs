//! Coin labels and coin matrices.
//!
//! Internally coins are indices `0..m`. For two-state coins index 0 is
//! rendered as `+1` and index 1 as `-1`; for larger coins labels are 1-based.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{QwmError, Result};
use crate::UNITARY_TOL;

pub const PLUS: usize = 0;
pub const MINUS: usize = 1;

pub fn coin_label(k: usize, m: usize) -> i64 {
    if m == 2 {
        if k == PLUS {
            1
        } else {
            -1
        }
    } else {
        k as i64 + 1
    }
}

pub fn coin_from_label(label: i64, m: usize) -> Option<usize> {
    if m == 2 {
        match label {
            1 => Some(PLUS),
            -1 => Some(MINUS),
            _ => None,
        }
    } else if label >= 1 && (label as usize) <= m {
        Some(label as usize - 1)
    } else {
        None
    }
}

/// Unitary `m x m` coin matrix `A`, row-major. The coin step sends
/// `|v,c>` to `sum_j A[c][j] |v,j>`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CoinMatrix {
    m: usize,
    entries: Vec<Complex64>,
}

impl CoinMatrix {
    pub fn new(m: usize, entries: Vec<Complex64>) -> Result<Self> {
        if entries.len() != m * m {
            return Err(QwmError::DimensionMismatch { expected: m * m, found: entries.len() });
        }
        let a = Self { m, entries };
        let residual = a.unitarity_residual();
        if residual > UNITARY_TOL {
            return Err(QwmError::InvalidState(format!("coin matrix is not unitary (residual {residual:e})")));
        }
        Ok(a)
    }

    pub fn hadamard() -> Self {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        Self { m: 2, entries: [h, h, h, -h].into_iter().map(|x| Complex64::new(x, 0.0)).collect() }
    }

    pub fn identity(m: usize) -> Self {
        let entries = (0..m * m)
            .map(|i| if i / m == i % m { Complex64::new(1.0, 0.0) } else { Complex64::new(0.0, 0.0) })
            .collect();
        Self { m, entries }
    }

    pub fn from_rows(rows: &[Vec<[f64; 2]>]) -> Result<Self> {
        let m = rows.len();
        if let Some(r) = rows.iter().find(|r| r.len() != m) {
            return Err(QwmError::DimensionMismatch { expected: m, found: r.len() });
        }
        Self::new(m, rows.iter().flatten().map(|&[re, im]| Complex64::new(re, im)).collect())
    }

    pub fn dim(&self) -> usize {
        self.m
    }

    pub fn get(&self, row: usize, col: usize) -> Complex64 {
        self.entries[row * self.m + col]
    }

    /// Max entry of `|A^dagger A - I|`.
    pub fn unitarity_residual(&self) -> f64 {
        let m = self.m;
        let mut worst = 0.0f64;
        for i in 0..m {
            for j in 0..m {
                let dot: Complex64 = (0..m).map(|k| self.get(k, i).conj() * self.get(k, j)).sum();
                let target = if i == j { 1.0 } else { 0.0 };
                worst = worst.max((dot - target).norm());
            }
        }
        worst
    }

    /// Applies the coin to one vertex's block of amplitudes in place.
    pub(crate) fn apply(&self, block: &mut [Complex64], scratch: &mut [Complex64]) {
        let m = self.m;
        for (j, s) in scratch.iter_mut().enumerate().take(m) {
            *s = (0..m).map(|c| self.entries[c * m + j] * block[c]).sum();
        }
        block.copy_from_slice(&scratch[..m]);
    }
}
