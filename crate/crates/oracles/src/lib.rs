//! Brute-force and quadrature references for discrete Riesz energies and the
//! Newtonian equilibrium of a sphere.
//!
//! Everything here is single-threaded and written independently of
//! `riesz-core`: plain double loops, exhaustive grid search, tensor-product
//! quadrature. The functions are slow by design and exist to produce the
//! reference values the main crates are tested against, recorded in
//! `oracle_ledger.csv`.

mod energy;
mod grid;
pub mod ledger;
mod monte_carlo;
mod quadrature;

pub use energy::{reference_energy, NeumaierSum};
pub use grid::{grid_fekete, GridFekete, GRID_BUDGET, MAX_GRID_SIZE};
pub use ledger::OracleRecord;
pub use monte_carlo::{mc_sphere_potential, uniform_sphere_samples};
pub use quadrature::{gauss_legendre, sphere_potential_quadrature, Quadrature};

/// Failures of the reference computations.
#[derive(Debug, thiserror::Error, PartialEq)]
pub enum OracleError {
    #[error("points {first} and {second} coincide")]
    Coincident { first: usize, second: usize },
    #[error("need at least {needed} points, got {found}")]
    TooFewPoints { needed: usize, found: usize },
    #[error("search over {requested} configurations exceeds the budget of {limit}")]
    Budget { requested: u128, limit: u128 },
    #[error("invalid input: {0}")]
    InvalidInput(&'static str),
}

pub type Result<T> = std::result::Result<T, OracleError>;
