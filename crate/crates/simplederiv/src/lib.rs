//! Command-line front end, parameter grids and JSON reports for the
//! derivation checks in `simplederiv-core`.

pub mod cli;
pub mod config;
pub mod format;
pub mod report;
pub mod run;

pub use simplederiv_core as core;
