//! Experiment runner: sweeps, scheme comparisons, closed-form adjudication
//! and single-point queries, all emitting deterministic CSV.

pub mod config;
pub mod error;
pub mod grid;
pub mod point;
pub mod run;
pub mod sweep;
pub mod validate;

pub use error::{CliError, Result};
