//! Experiment driver for exponential integrators: order scans, sharpness
//! probes, Galerkin scans, φ self-tests and the `expint` command line.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod config;
pub mod error;
pub mod experiments;
pub mod output;
pub mod quadrature;

pub use cli::{execute, run as run_cli, Command};
pub use config::RunConfig;
pub use error::{LabError, LabResult, EXIT_CONFIG, EXIT_GATE, EXIT_IO};
