//! Discrete-time quantum walks on the square lattice driven by a tensor-square
//! coin `U ⊗ U`.
//!
//! The crate is `no_std` (it needs `alloc`). Enable `parallel` to spread the
//! lattice update, Gram accumulation and quadrature over a rayon pool; every
//! reduction runs in a fixed order, so results are bit-identical for any
//! thread count.
//!
//! Module map:
//!
//! * [`coin`]: U(2) coins, their tensor square and the four direction slices.
//! * [`evolution`]: amplitude fields, the lattice step, the path-sum oracle.
//! * [`entropy`]: reduced coin density, von Neumann / Shannon / conditional
//!   entropies.
//! * [`asymptotics`]: singular-edge quadrature of limiting overlaps,
//!   trailing-window extrapolation, scaling fits, limit reports.
//! * [`classical`]: the symmetric random-walk baseline.
//! * [`linalg`]: the small dense kernels the rest is built on.
#![cfg_attr(not(feature = "std"), no_std)]
#![allow(clippy::needless_range_loop, clippy::neg_cmp_op_on_partial_ord)]

extern crate alloc;

pub mod asymptotics;
pub mod classical;
pub mod coin;
pub mod entropy;
pub mod evolution;
pub mod linalg;
mod math;
mod par;

pub use num_complex::Complex64 as C64;

pub use coin::{Chirality, CoinError, CoinParameters, DirectionMatrices, TensorCoin};
pub use entropy::{CoinDensity, EntropyError, EntropyRecord, SpectralPair};
pub use evolution::{
    AmplitudeField, EvolutionError, InitialState, MemoryCap, ProbabilityGrid, Walk,
};
