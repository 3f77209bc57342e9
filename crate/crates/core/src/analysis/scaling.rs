use serde::{Deserialize, Serialize};

use crate::error::{QwmError, Result};

/// Ballistic when `K2 t^2 > BALLISTIC_DOMINANCE * |K1| t` at the last sample.
pub const BALLISTIC_DOMINANCE: f64 = 4.0;
/// Diffusive when `K1 t > DIFFUSIVE_DOMINANCE * |K2| t^2` at the last sample.
pub const DIFFUSIVE_DOMINANCE: f64 = 4.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ScalingVerdict {
    Ballistic,
    Diffusive,
    Indeterminate,
}

/// Least-squares fit of `sigma^2(t) = K2 t^2 + K1 t + K0^2`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScalingFit {
    pub k2: f64,
    pub k1: f64,
    pub k0_sq: f64,
    /// Root-mean-square residual of the fit.
    pub residual: f64,
    pub verdict: ScalingVerdict,
}

/// Fits a variance series given as `(t, variance)` samples with increasing
/// `t`, spanning `[t1, t2]` with `t2 >= 2 t1 >= 40`.
pub fn classify_scaling(series: &[(usize, f64)]) -> Result<ScalingFit> {
    let (Some(&(t1, _)), Some(&(t2, _))) = (series.first(), series.last()) else {
        return Err(QwmError::SeriesTooShort("empty variance series".into()));
    };
    if t1 < 20 || t2 < 2 * t1 || series.len() < 3 {
        return Err(QwmError::SeriesTooShort(format!(
            "need t2 >= 2 t1 >= 40 and at least 3 samples, got [{t1}, {t2}] with {} samples",
            series.len()
        )));
    }
    // Work in s = t / t2 for conditioning.
    let scale = t2 as f64;
    let mut normal = [[0.0f64; 4]; 3];
    for &(t, y) in series {
        let s = t as f64 / scale;
        let basis = [s * s, s, 1.0];
        for i in 0..3 {
            for j in 0..3 {
                normal[i][j] += basis[i] * basis[j];
            }
            normal[i][3] += basis[i] * y;
        }
    }
    let [a, b, c] = solve3(normal);
    let (k2, k1, k0_sq) = (a / (scale * scale), b / scale, c);
    let residual = (series
        .iter()
        .map(|&(t, y)| {
            let t = t as f64;
            (k2 * t * t + k1 * t + k0_sq - y).powi(2)
        })
        .sum::<f64>()
        / series.len() as f64)
        .sqrt();

    let quad = k2 * scale * scale;
    let lin = k1 * scale;
    let verdict = if k2 > 0.0 && quad > BALLISTIC_DOMINANCE * lin.abs() {
        ScalingVerdict::Ballistic
    } else if k1 > 0.0 && lin > DIFFUSIVE_DOMINANCE * quad.abs() {
        ScalingVerdict::Diffusive
    } else {
        ScalingVerdict::Indeterminate
    };
    Ok(ScalingFit { k2, k1, k0_sq, residual, verdict })
}

/// Gaussian elimination with partial pivoting on an augmented 3x4 system.
fn solve3(mut m: [[f64; 4]; 3]) -> [f64; 3] {
    for col in 0..3 {
        let pivot = (col..3).max_by(|&i, &j| m[i][col].abs().total_cmp(&m[j][col].abs())).unwrap();
        m.swap(col, pivot);
        for row in col + 1..3 {
            let f = m[row][col] / m[col][col];
            for k in col..4 {
                m[row][k] -= f * m[col][k];
            }
        }
    }
    let mut x = [0.0; 3];
    for row in (0..3).rev() {
        let tail: f64 = (row + 1..3).map(|k| m[row][k] * x[k]).sum();
        x[row] = (m[row][3] - tail) / m[row][row];
    }
    x
}

#[cfg(test)]
mod tests {
    use super::*;

    fn series(f: impl Fn(f64) -> f64) -> Vec<(usize, f64)> {
        (50..=200).map(|t| (t, f(t as f64))).collect()
    }

    #[test]
    fn pure_quadratic_is_ballistic() {
        let fit = classify_scaling(&series(|t| 0.3 * t * t)).unwrap();
        assert_eq!(fit.verdict, ScalingVerdict::Ballistic);
        assert!((fit.k2 - 0.3).abs() < 1e-9);
        assert!(fit.k1.abs() < 1e-6);
    }

    #[test]
    fn linear_is_diffusive() {
        let fit = classify_scaling(&series(|t| 2.0 * t)).unwrap();
        assert_eq!(fit.verdict, ScalingVerdict::Diffusive);
        assert!(fit.k2.abs() < 1e-9);
        assert!((fit.k1 - 2.0).abs() < 1e-6);
    }

    #[test]
    fn recovers_all_three_coefficients() {
        let fit = classify_scaling(&series(|t| 0.1 * t * t + 3.0 * t + 7.0)).unwrap();
        assert!((fit.k2 - 0.1).abs() < 1e-9);
        assert!((fit.k1 - 3.0).abs() < 1e-6);
        assert!((fit.k0_sq - 7.0).abs() < 1e-4);
        assert!(fit.residual < 1e-6);
    }

    #[test]
    fn short_series_rejected() {
        let s: Vec<(usize, f64)> = (10..=30).map(|t| (t, t as f64)).collect();
        assert!(matches!(classify_scaling(&s), Err(QwmError::SeriesTooShort(_))));
        assert!(classify_scaling(&[]).is_err());
    }
}
