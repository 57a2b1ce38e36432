//! Sector table loading and validation.
//!
//! File format: comma-separated, one named row per sector (the name in the
//! first field, then one coefficient per sector), closed by a final
//! `added_value` row with the value-added coefficients. The matrix is the
//! Leontief inverse, recognizable by diagonal entries ≥ 1; a file holding
//! raw technical coefficients (diagonal < 1) is rejected with a pointer to
//! [`technical_from_inverse`]'s companion conversion.

use super::LeontiefError;
use nalgebra::{DMatrix, DVector};
use std::io::Read;
use std::sync::OnceLock;

const VALUE_ADDED_LABEL: &str = "added_value";
const BUILTIN_TABLE: &str = include_str!("../../data/sector_table.csv");

/// A validated sector table: names, Leontief inverse, value-added vector.
#[derive(Debug, Clone, PartialEq)]
pub struct SectorTable {
    names: Vec<String>,
    inverse: DMatrix<f64>,
    value_added: DVector<f64>,
}

impl SectorTable {
    /// The shipped 19-sector regional table.
    pub fn builtin() -> &'static SectorTable {
        static BUILTIN: OnceLock<SectorTable> = OnceLock::new();
        BUILTIN.get_or_init(|| {
            load_table(BUILTIN_TABLE.as_bytes()).expect("builtin sector table is valid")
        })
    }

    pub fn new(
        names: Vec<String>,
        inverse: DMatrix<f64>,
        value_added: DVector<f64>,
    ) -> Result<Self, LeontiefError> {
        let dim = names.len();
        if dim == 0 {
            return Err(LeontiefError::Table("table has no sectors".into()));
        }
        if inverse.nrows() != dim || inverse.ncols() != dim || value_added.len() != dim {
            return Err(LeontiefError::Table(format!(
                "inconsistent dimensions: {} names, {}×{} matrix, {} value-added entries",
                dim,
                inverse.nrows(),
                inverse.ncols(),
                value_added.len()
            )));
        }
        for i in 0..dim {
            for j in 0..dim {
                let v = inverse[(i, j)];
                if !v.is_finite() || v < 0.0 {
                    return Err(LeontiefError::Table(format!(
                        "entry ({}, {}) is {v}; Leontief inverse entries must be finite and ≥ 0",
                        i + 1,
                        j + 1
                    )));
                }
            }
            let diag = inverse[(i, i)];
            if diag < 1.0 {
                return Err(LeontiefError::DiagonalBelowOne { sector: i + 1, value: diag });
            }
            let va = value_added[i];
            if !(va > 0.0 && va <= 1.0) {
                return Err(LeontiefError::Table(format!(
                    "value-added coefficient {va} at sector {} outside (0, 1]",
                    i + 1
                )));
            }
        }
        Ok(Self { names, inverse, value_added })
    }

    pub fn dim(&self) -> usize {
        self.names.len()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn leontief_inverse(&self) -> &DMatrix<f64> {
        &self.inverse
    }

    pub fn value_added(&self) -> &DVector<f64> {
        &self.value_added
    }
}

/// Load and validate a sector table.
pub fn load_table<R: Read>(reader: R) -> Result<SectorTable, LeontiefError> {
    let mut csv_reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .comment(Some(b'#'))
        .from_reader(reader);

    let mut names = Vec::new();
    let mut rows: Vec<Vec<f64>> = Vec::new();
    let mut value_added: Option<Vec<f64>> = None;
    for record in csv_reader.records() {
        let record = record?;
        if record.len() < 2 {
            return Err(LeontiefError::Table(format!(
                "row {} has no coefficients",
                rows.len() + 1
            )));
        }
        let name = record[0].trim().to_string();
        let values: Vec<f64> = record
            .iter()
            .skip(1)
            .map(|f| {
                f.trim()
                    .parse::<f64>()
                    .map_err(|_| LeontiefError::Table(format!("`{f}` is not a number (row `{name}`)")))
            })
            .collect::<Result<_, _>>()?;
        if value_added.is_some() {
            return Err(LeontiefError::Table(format!(
                "`{VALUE_ADDED_LABEL}` must be the final row, found `{name}` after it"
            )));
        }
        if name == VALUE_ADDED_LABEL {
            value_added = Some(values);
        } else {
            names.push(name);
            rows.push(values);
        }
    }

    let value_added =
        value_added.ok_or_else(|| LeontiefError::Table(format!("missing `{VALUE_ADDED_LABEL}` row")))?;
    let dim = names.len();
    for (i, row) in rows.iter().enumerate() {
        if row.len() != dim {
            return Err(LeontiefError::Table(format!(
                "row `{}` has {} coefficients, expected {dim}",
                names[i],
                row.len()
            )));
        }
    }
    if value_added.len() != dim {
        return Err(LeontiefError::Table(format!(
            "`{VALUE_ADDED_LABEL}` row has {} coefficients, expected {dim}",
            value_added.len()
        )));
    }
    let inverse = DMatrix::from_fn(dim, dim, |i, j| rows[i][j]);
    SectorTable::new(names, inverse, DVector::from_vec(value_added))
}

/// Recover the technical-coefficient matrix `A = I − L⁻¹` from a Leontief
/// inverse.
pub fn technical_from_inverse(inverse: &DMatrix<f64>) -> Result<DMatrix<f64>, LeontiefError> {
    let dim = inverse.nrows();
    let inv = inverse
        .clone()
        .lu()
        .try_inverse()
        .ok_or(LeontiefError::Singular)?;
    Ok(DMatrix::identity(dim, dim) - inv)
}

/// Largest eigenvalue modulus. For a productive economy the technical matrix
/// must have spectral radius below 1.
pub fn spectral_radius(matrix: &DMatrix<f64>) -> f64 {
    matrix
        .complex_eigenvalues()
        .iter()
        .map(|z| z.norm())
        .fold(0.0, f64::max)
}
