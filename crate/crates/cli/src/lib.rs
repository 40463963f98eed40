//! Command-line harness around `labeleval-core`: evaluation and ablation
//! reports, synthetic corpus generation and stratified splits.

pub mod commands;
pub mod config;
pub mod error;
pub mod io;
pub mod report;

pub use error::{CliError, Result};
