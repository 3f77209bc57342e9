//! Quantum walks with memory on regular graphs.
//!
//! A walk that remembers its last `d` moves on an `m`-regular graph `G` is
//! run as an ordinary coined walk on the `d`-fold line digraph of `G`, whose
//! vertices are the `d`-step paths of `G`. The walk is fixed by three
//! choices: a partition of the line digraph's arcs into `m` classes (which
//! class the coin selects), a coin-shift function (how the coin is rewritten
//! after the move), and a unitary coin matrix.
//!
//! ```
//! use qwm_core::prelude::*;
//!
//! let host = iterate_line_digraph(&make_bidirected_cycle(41).unwrap(), 1).unwrap();
//! let p = named_partition(NamedPartition::Pi2, &host).unwrap();
//! let walk = Walk::new(&p, &gc2(&p).unwrap(), CoinMatrix::hadamard()).unwrap();
//! let start = host.graph().vertex_of_path(&[40, 0]).unwrap();
//! let history = walk.evolve(&WalkState::basis(host.n_vertices(), 2, start, PLUS), 10).unwrap();
//! let p10 = position_marginal(host.graph(), &history[10]);
//! assert!((p10.total() - 1.0).abs() < 1e-12);
//! ```

pub mod analysis;
pub mod calibration;
pub mod coin;
pub mod coin_shift;
pub mod error;
pub mod experiment;
pub mod graph;
pub mod partition;
pub mod walk;

pub use error::{QwmError, Result};

/// Tolerance for unitarity and norm residuals.
pub const UNITARY_TOL: f64 = 1e-12;
/// Tolerance for comparing distributions or amplitudes across independent
/// implementations.
pub const ORACLE_TOL: f64 = 1e-10;

pub mod prelude {
    pub use crate::analysis::{occupancy_rate, position_marginal, variance, PositionDistribution};
    pub use crate::coin::{CoinMatrix, MINUS, PLUS};
    pub use crate::coin_shift::{gc1, gc2, validate_coin_shift, CoinShift};
    pub use crate::experiment::{ExperimentSpec, InitialPreset, WalkClass};
    pub use crate::graph::{iterate_line_digraph, make_bidirected_cycle, LineDigraph, RegularDigraph};
    pub use crate::partition::{named_partition, NamedPartition, Partition};
    pub use crate::walk::{Walk, WalkState};
    pub use crate::{QwmError, Result};
}
