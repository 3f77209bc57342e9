//! The two memory walks written directly in their own memory bases.
//!
//! These do not touch partitions, coin shifts or line digraphs, so they
//! serve as independent references for the generic engine.

use num_complex::Complex64;

use crate::analysis::PositionDistribution;
use crate::coin::{coin_from_label, CoinMatrix, MINUS, PLUS};
use crate::error::{QwmError, Result};
use crate::graph::{centered_coordinate, label_of_coordinate};

fn check_window(window: usize) -> Result<()> {
    if window < 3 || window.is_multiple_of(2) {
        return Err(QwmError::InvalidGraph(format!("window must be odd and >= 3, got {window}")));
    }
    Ok(())
}

fn sign(bit: usize) -> i64 {
    if bit == PLUS {
        1
    } else {
        -1
    }
}

fn bit_of(label: i64) -> Result<usize> {
    coin_from_label(label, 2).ok_or_else(|| QwmError::InvalidState(format!("coin label {label} is not +-1")))
}

/// Recycled-coin walk with `d` memory coins, basis `|x, c_1, ..., c_d, c>`.
///
/// `C` mixes the last register; `S` sends `|x, c_1..c_d, c>` to
/// `|x + c, c, c_1, ..., c_{d-1}, c_d>`, so the oldest memory coin becomes the
/// next coin. `initial` lists `(x, [c_1, ..., c_d, c], amplitude)` with
/// coin labels `+-1`. Returns `P(x, t)` for `t = 0..=t_max`.
pub fn memory_walk_recycled(
    d: usize,
    coin: &CoinMatrix,
    window: usize,
    initial: &[(i64, Vec<i64>, Complex64)],
    t_max: usize,
) -> Result<Vec<PositionDistribution>> {
    if !(1..=2).contains(&d) {
        return Err(QwmError::Unsupported(format!("recycled-coin reference supports d in {{1, 2}}, got {d}")));
    }
    if coin.dim() != 2 {
        return Err(QwmError::DimensionMismatch { expected: 2, found: coin.dim() });
    }
    check_window(window)?;
    let regs = 1usize << (d + 1);
    let coin_bit = d;
    let mut amps = vec![Complex64::new(0.0, 0.0); window * regs];
    for (x, coins, a) in initial {
        if coins.len() != d + 1 {
            return Err(QwmError::InvalidState(format!("expected {} coin labels, got {}", d + 1, coins.len())));
        }
        let mut r = 0;
        for (i, &label) in coins.iter().enumerate() {
            r |= bit_of(label)? << i;
        }
        amps[label_of_coordinate(*x, window) * regs + r] += *a;
    }

    let marginal = |amps: &[Complex64], t: usize| {
        PositionDistribution::from_pairs(
            t,
            amps.chunks(regs)
                .enumerate()
                .map(|(p, b)| (centered_coordinate(p, window), b.iter().map(|a| a.norm_sqr()).sum())),
        )
    };

    let mut out = Vec::with_capacity(t_max + 1);
    out.push(marginal(&amps, 0));
    let mut next = vec![Complex64::new(0.0, 0.0); amps.len()];
    for t in 1..=t_max {
        // coin on the last register
        for p in 0..window {
            let block = &mut amps[p * regs..(p + 1) * regs];
            for rest in 0..(regs >> 1) {
                let i0 = rest; // coin bit is the top bit
                let i1 = rest | (1 << coin_bit);
                let (a0, a1) = (block[i0], block[i1]);
                block[i0] = coin.get(PLUS, PLUS) * a0 + coin.get(MINUS, PLUS) * a1;
                block[i1] = coin.get(PLUS, MINUS) * a0 + coin.get(MINUS, MINUS) * a1;
            }
        }
        next.iter_mut().for_each(|a| *a = Complex64::new(0.0, 0.0));
        for p in 0..window {
            for r in 0..regs {
                let a = amps[p * regs + r];
                if a == Complex64::new(0.0, 0.0) {
                    continue;
                }
                let c = (r >> coin_bit) & 1;
                let memory = r & ((1 << d) - 1);
                let oldest = (memory >> (d - 1)) & 1;
                // new memory: (c, c_1, ..., c_{d-1}); new coin: c_d
                let shifted = ((memory << 1) | c) & ((1 << d) - 1);
                let nr = shifted | (oldest << coin_bit);
                let np = label_of_coordinate(centered_coordinate(p, window) + sign(c), window);
                next[np * regs + nr] += a;
            }
        }
        std::mem::swap(&mut amps, &mut next);
        out.push(marginal(&amps, t));
    }
    Ok(out)
}

/// Reflect/transmit walk with one memory position, basis `|x_0, x_1, c>`
/// where `x_1 = x_0 +- 1` is the previous position.
///
/// Coin `+1` reflects (`|x_1, x_0, +1>`), coin `-1` transmits
/// (`|2x_0 - x_1, x_0, -1>`). `initial` lists `(x_0, x_1, c, amplitude)`.
pub fn memory_walk_mcgettrick(
    d: usize,
    coin: &CoinMatrix,
    window: usize,
    initial: &[(i64, i64, i64, Complex64)],
    t_max: usize,
) -> Result<Vec<PositionDistribution>> {
    if d != 1 {
        return Err(QwmError::Unsupported(format!("reflect/transmit reference supports d = 1, got {d}")));
    }
    if coin.dim() != 2 {
        return Err(QwmError::DimensionMismatch { expected: 2, found: coin.dim() });
    }
    check_window(window)?;
    // index: (p * 2 + side) * 2 + c, side 0 means x_1 = x_0 - 1
    let mut amps = vec![Complex64::new(0.0, 0.0); window * 4];
    for &(x0, x1, c, a) in initial {
        let side = match x1 - x0 {
            -1 => 0,
            1 => 1,
            _ => return Err(QwmError::InvalidState(format!("previous position {x1} is not adjacent to {x0}"))),
        };
        amps[(label_of_coordinate(x0, window) * 2 + side) * 2 + bit_of(c)?] += a;
    }
    let marginal = |amps: &[Complex64], t: usize| {
        PositionDistribution::from_pairs(
            t,
            amps.chunks(4)
                .enumerate()
                .map(|(p, b)| (centered_coordinate(p, window), b.iter().map(|a| a.norm_sqr()).sum())),
        )
    };

    let mut out = Vec::with_capacity(t_max + 1);
    out.push(marginal(&amps, 0));
    let mut next = vec![Complex64::new(0.0, 0.0); amps.len()];
    for t in 1..=t_max {
        for pair in amps.chunks_mut(2) {
            let (a0, a1) = (pair[PLUS], pair[MINUS]);
            pair[PLUS] = coin.get(PLUS, PLUS) * a0 + coin.get(MINUS, PLUS) * a1;
            pair[MINUS] = coin.get(PLUS, MINUS) * a0 + coin.get(MINUS, MINUS) * a1;
        }
        next.iter_mut().for_each(|a| *a = Complex64::new(0.0, 0.0));
        for p in 0..window {
            let x0 = centered_coordinate(p, window);
            for side in 0..2 {
                let x1 = if side == 0 { x0 - 1 } else { x0 + 1 };
                for c in [PLUS, MINUS] {
                    let a = amps[(p * 2 + side) * 2 + c];
                    if a == Complex64::new(0.0, 0.0) {
                        continue;
                    }
                    let (nx0, nx1) = if c == PLUS { (x1, x0) } else { (2 * x0 - x1, x0) };
                    let nside = if nx1 == nx0 - 1 { 0 } else { 1 };
                    next[(label_of_coordinate(nx0, window) * 2 + nside) * 2 + c] += a;
                }
            }
        }
        std::mem::swap(&mut amps, &mut next);
        out.push(marginal(&amps, t));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn one() -> Complex64 {
        Complex64::new(1.0, 0.0)
    }

    #[test]
    fn identity_coin_streams_right() {
        let id = CoinMatrix::identity(2);
        let h = memory_walk_recycled(1, &id, 11, &[(0, vec![1, 1], one())], 3).unwrap();
        assert_eq!(h[3].get(3), 1.0);
    }

    #[test]
    fn recycled_unsupported_depth() {
        let id = CoinMatrix::identity(2);
        assert!(matches!(memory_walk_recycled(3, &id, 11, &[], 1), Err(QwmError::Unsupported(_))));
    }

    #[test]
    fn pure_transmit() {
        let id = CoinMatrix::identity(2);
        let h = memory_walk_mcgettrick(1, &id, 11, &[(0, -1, -1, one())], 3).unwrap();
        assert_eq!(h[3].get(3), 1.0);
    }

    #[test]
    fn pure_reflect_oscillates() {
        let id = CoinMatrix::identity(2);
        let h = memory_walk_mcgettrick(1, &id, 11, &[(0, -1, 1, one())], 4).unwrap();
        let expected = [0, -1, 0, -1, 0];
        for (t, &x) in expected.iter().enumerate() {
            assert_eq!(h[t].get(x), 1.0, "t={t}");
        }
        assert!(memory_walk_mcgettrick(2, &id, 11, &[], 1).is_err());
    }
}
