//! File formats, instance generators, benchmarks and the `fairclust` command line.

pub mod bench;
pub mod cli;
pub mod error;
pub mod generate;
pub mod io;

pub use error::{CliError, Result};
