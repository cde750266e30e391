//! Library side of the `riesz` command: set files, point files, manifests,
//! the subcommands and the acceptance criteria.

pub mod acceptance;
pub mod commands;
pub mod error;
pub mod io;
pub mod setfile;

pub use error::{CliError, Result};
