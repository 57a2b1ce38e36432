//! Synthetic populations with known ground truth.
//!
//! The generator realizes the `y = θ + B + ε` measurement model on the
//! survey's discrete response space. For the substitution answer, the group
//! bias shifts the "No" probability from `θ_j` to `θ_j + D·B_j`, sampled
//! through a shared latent uniform so every individual's realized bias has
//! the sign `D`. For bracketed spending, the bias is a stochastic one-bracket
//! shift in the direction of `D` (clamped at the schedule ends); midpoints
//! increase with the bracket index, so individual biases again carry the
//! sign. Noise is the centered sampling residual of the draws themselves.
//!
//! Ground truth is computed analytically from the generating spec — the
//! shifted bracket distributions and response probabilities — never from the
//! sampled records, which is what makes it usable as an oracle for estimator
//! consistency and bootstrap coverage.

mod coverage;
mod generate;
mod spec;

pub use coverage::{coverage_experiment, CoverageRow, CoverageSummary, CoverageTarget};
pub use generate::{generate, generate_with_seed, GroundTruth, GroupTruth, VoucherTruth};
pub use spec::{GroupSpec, PopulationSpec, VoucherPopulation};

use thiserror::Error;

#[derive(Debug, Error)]
pub enum SynthError {
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
    #[error("population spec: {0}")]
    Spec(String),
    #[error("population spec, voucher {voucher}: {message}")]
    Voucher { voucher: crate::survey::VoucherKind, message: String },
    #[error(transparent)]
    Survey(#[from] crate::survey::SurveyError),
    #[error(transparent)]
    Inference(#[from] crate::inference::InferenceError),
}
