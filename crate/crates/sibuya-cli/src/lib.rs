//! Command-line front end for the default-model library.
//!
//! Models come in as JSON documents (single-sector or hierarchical),
//! results go out as plain decimals, single-line JSON, or CSV files.
//! All numeric output is locale-independent with 17 significant
//! digits, so emitted fixtures round-trip exactly.

pub mod commands;
pub mod config;
pub mod error;
pub mod output;
pub mod parallel;

pub use error::CliError;
