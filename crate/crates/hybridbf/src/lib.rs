//! Experiment runner for `hybridbf-core`: scenario files, the five sweeps,
//! CSV output and gnuplot scripts.

pub mod config;
pub mod experiment;
pub mod output;
pub mod plot;

pub use config::{load_scenario, ConfigError, ExperimentId, ExperimentSpec, RawConfig};
pub use experiment::{run_experiment, ExperimentError, ResultTable};
pub use output::{emit_csv, parse_csv, read_csv, OutputError};
