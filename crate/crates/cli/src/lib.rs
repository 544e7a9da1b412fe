//! Command-line front end and experiment harness for the difference-DAG
//! estimator.

pub mod benchmark;
pub mod config;
pub mod error;
pub mod estimate;
pub mod metrics;
pub mod simulate;

pub use benchmark::{cmd_benchmark, run_benchmark, run_trial, BenchmarkOutput};
pub use config::{output_dir, ExperimentConfig, InitChoice, Protocol, OUTPUT_DIR_ENV};
pub use error::{CliError, CliResult};
pub use estimate::{cmd_estimate, EstimateOptions};
pub use metrics::MetricsRow;
pub use simulate::cmd_simulate;
