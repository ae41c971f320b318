//! Configuration, scenario execution and deterministic output for the
//! damped three-oscillator dynamics.

pub mod config;
pub mod error;
pub mod report;
pub mod timeseries;

pub use config::{parse_config, RunConfig};
pub use error::CliError;
pub use report::run_stationary_report;
pub use timeseries::{run_timeseries, write_csv, TimeSeries};
