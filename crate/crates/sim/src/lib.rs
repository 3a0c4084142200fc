//! Command-line front end for `congestion-core`: configuration files with
//! per-value provenance, CSV snapshots and diagnostics, and run manifests.

pub mod app;
pub mod cli;
pub mod config;
pub mod error;
pub mod output;

pub use error::{SimError, SimResult};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");
