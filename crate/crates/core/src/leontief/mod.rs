//! Regional input–output impact model.
//!
//! The sector table holds a Leontief inverse `L = (I − A)⁻¹` and a
//! value-added coefficient vector. A demand change `ΔF` propagates through
//! inter-industry linkages as
//!
//! ```text
//! gdp_i = va_i · (L ΔF)_i
//! ```
//!
//! and the output multiplier is total GDP change over the original program
//! expenditure. Scenarios adjust each voucher's original amount by the
//! behavioral factor `(1 − ES) × (1 + IC)` (or accept an adjusted amount
//! directly) and map it onto the voucher's target sector.

mod impact;
mod scenario;
mod table;

pub use impact::{impact, induced_demand, scenario_compare, DemandVector, ImpactReport, ScenarioDiff};
pub use scenario::{ScenarioEntry, ScenarioSet, ScenarioSpec, VoucherAdjustment};
pub use table::{load_table, spectral_radius, technical_from_inverse, SectorTable};

use thiserror::Error;

#[derive(Debug, Error)]
pub enum LeontiefError {
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),
    #[error("sector table: {0}")]
    Table(String),
    #[error("not a Leontief inverse: diagonal entry {value} at sector {sector} is below 1 (a technical-coefficient matrix must be converted first)")]
    DiagonalBelowOne { sector: usize, value: f64 },
    #[error("matrix is numerically singular")]
    Singular,
    #[error("scenario `{0}`: {1}")]
    Scenario(String, String),
    #[error("voucher {voucher} targets sector {sector}, but the table has {dim} sectors")]
    SectorOutOfRange { voucher: crate::survey::VoucherKind, sector: usize, dim: usize },
    #[error("dimension mismatch: demand vector has {demand} entries, table has {dim} sectors")]
    DimensionMismatch { demand: usize, dim: usize },
    #[error("reports do not share a sector ordering")]
    MismatchedSectors,
}
