//! Survey data model: voucher kinds, bracket schedules, demographics,
//! stratification, and validated CSV ingestion.

mod config;
mod dataset;
mod ingest;
mod schedule;
mod scheme;
mod types;

pub use config::{VoucherConfig, VoucherSpec};
pub use dataset::Dataset;
pub use ingest::{ingest, validate_stream, IngestReport, RowError, SURVEY_HEADER};
pub use schedule::BracketSchedule;
pub use scheme::{stratify, stratify_records, Dimension, GroupKey, StratificationScheme};
pub use types::{AgeBand, AgeGroup, DemographicProfile, Gender, Residence, ResidenceGroup, SurveyRecord, VoucherKind, Wave};

use thiserror::Error;

/// Errors raised by the survey data model and ingestion.
#[derive(Debug, Error)]
pub enum SurveyError {
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),
    #[error("missing header row (expected `{expected}`)")]
    MissingHeader { expected: String },
    #[error("header mismatch: expected `{expected}`, found `{found}`")]
    HeaderMismatch { expected: String, found: String },
    #[error("row {row}: {message}")]
    Row { row: u64, message: String },
    #[error("bracket schedule: {0}")]
    Schedule(String),
    #[error("stratification: {0}")]
    Scheme(String),
    #[error("voucher config: {0}")]
    Config(String),
}
