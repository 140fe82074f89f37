//! Config-driven experiment runner: parses JSON experiment configs,
//! dispatches to the determinant engine and the Monte Carlo module, fits
//! convergence rates, and writes deterministic CSV or JSON reports.

pub mod cache;
mod config;
mod error;
mod float_repr;
mod report;
mod run;

pub use config::{ExperimentConfig, ExperimentKind, McConfig, SpecGrid, Tolerances};
pub use error::{CliError, ConfigError};
pub use report::{emit, read_report, render, to_csv, to_json, write_atomic, Format, CSV_HEADER};
pub use run::{
    fit_rows, replay_row, run, run_with, ExperimentReport, FitSummary, Metadata, Row, RunOptions, NSIGMA, TOOL,
    VERSION,
};
