//! Scenario ingestion, configuration, synthetic generation, and report
//! emission.
//!
//! Input tables are CSV with a header row; the first column is the period
//! index `0..T-1`. Loads and solar are in MW, prices in $/MWh. The run
//! configuration is a TOML file; the structured report is JSON.

mod config;
mod emit;
mod synth;
mod tables;

use std::path::PathBuf;

use thiserror::Error;

use crate::model::ValidationFinding;

pub use config::{
    load_config, AllocationSection, BessUnitSpec, DispatchSection, FilesSection, OutputSection,
    RunConfig, SolarUnitSpec, SolverSection, TariffSection, TimeSection,
};
pub use emit::{
    config_for_scenario, emit_report, write_scenario, ALLOCATION_BY_LOAD_FILE, BATTERY_SOC_FILE,
    REPORT_FILE, SYSTEM_POWER_FILE,
};
pub use synth::{generate_synthetic, ScenarioProfile, ScenarioShape};
pub use tables::load_scenario;

#[derive(Debug, Error)]
pub enum IoError {
    #[error("cannot read {path}: {source}")]
    Read {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("cannot write {path}: {source}")]
    Write {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("{path}: invalid config: {message}")]
    Config { path: PathBuf, message: String },
    #[error("{file}: no participants (header has no data columns)")]
    NoParticipants { file: String },
    #[error("{file}: {got} data rows, expected {expected}")]
    LengthMismatch {
        file: String,
        expected: usize,
        got: usize,
    },
    #[error("{file}: row {row}, column '{column}': non-numeric cell '{cell}'")]
    NonNumeric {
        file: String,
        row: usize,
        column: String,
        cell: String,
    },
    #[error("{file}: row {row}: period index '{got}', expected {expected}")]
    PeriodIndex {
        file: String,
        row: usize,
        expected: usize,
        got: String,
    },
    #[error("{file}: duplicate column id '{id}'")]
    DuplicateId { file: String, id: String },
    #[error("{file}: expected exactly one data column, found {found}")]
    ColumnCount { file: String, found: usize },
    #[error("scenario validation failed:\n{}", format_findings(findings))]
    Validation { findings: Vec<ValidationFinding> },
    #[error("{file}: malformed csv: {source}")]
    Csv { file: String, source: csv::Error },
    #[error("cannot serialize report: {0}")]
    Serialize(String),
}

fn format_findings(findings: &[ValidationFinding]) -> String {
    findings
        .iter()
        .map(|f| format!("  {f}"))
        .collect::<Vec<_>>()
        .join("\n")
}
