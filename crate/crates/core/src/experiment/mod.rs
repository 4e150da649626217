//! Config-driven experiments behind the `ris-capacity` binary: SNR and
//! RIS-size sweeps, phase optimization and the validation report.

mod commands;
pub mod config;
pub mod csv;
mod validate;

pub use commands::{cmd_optimize, cmd_sweep_res, cmd_sweep_snr, experiment_paths, ResMode};
pub use config::{ExperimentConfig, GaOverrides, PhaseMode};
pub use validate::{cmd_validate, SuiteResult, ValidateOptions, ValidationReport, Z_LIMIT};
