//! Parallel Monte Carlo campaigns, output formats and the command-line front
//! end built on `mixlim-core`.

pub mod cli;
pub mod driver;
pub mod error;
pub mod grid;
pub mod output;
pub mod verify;

pub use error::{Error, Result};
