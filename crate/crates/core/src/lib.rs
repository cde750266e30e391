//! Point configurations with small discrete Riesz energy near compact sets in `R^d`.
//!
//! The crate builds approximate Fekete points (projected gradient descent on the
//! product of the set) and Leja sequences (greedy minimization of the Newtonian
//! potential), and measures how close their counting measures come to the
//! equilibrium measure of the set:
//!
//! - [`kernel`]: the Riesz kernel `|x|^(alpha - d)` and its gradient.
//! - [`sets`]: compact sets with distance, projection, sampling and equilibrium oracles.
//! - [`measures`]: discrete energies and potentials, `m_E`, smoothed measures, moments.
//! - [`configurations`]: Fekete search, Leja sequences, random baselines.
//! - [`discrepancy`]: test functions, modulus of continuity, Dirichlet integrals,
//!   the discrepancy bound and the potential error estimates for near-Fekete sets.
//!
//! The crate is `no_std` (with `alloc`) when the default `std` feature is off.
//! The `parallel` feature evaluates pairwise sums on the rayon pool; results are
//! bitwise identical for any number of workers.
#![cfg_attr(not(feature = "std"), no_std)]

extern crate alloc;

pub mod configurations;
pub mod discrepancy;
mod error;
pub mod kernel;
pub mod math;
pub mod measures;
mod point;
pub mod reduce;
pub mod rng;
pub mod sets;

pub use error::{Error, Result};
pub use kernel::{KernelSpec, RadialKernel};
pub use point::PointConfig;
pub use sets::{CompactSet, EquilibriumOracle, Holder, Shape};
