//! Partial-identification bounds and stratified bootstrap inference.
//!
//! Observed survey responses are modeled as `y = θ + B + ε`: the true effect
//! plus a one-sided reporting bias plus mean-zero noise. Group means identify
//! only `θ_j + B_j`, so the minimum subgroup estimate serves as a
//! conservative bias bound `B̂ = min_j ŷ_j`, giving the interval
//! `[ŷ_j − B̂, ŷ_j]` for every group (and for coarser aggregates, using the
//! same `B̂`). A stratified bootstrap — resampling within each stratum,
//! preserving stratum sizes — yields percentile confidence intervals for both
//! endpoints; the hull of the two intervals is reported as the combined
//! confidence region.

mod bootstrap;
mod bounds;
mod model;
mod percentile;

pub use bootstrap::{
    intensity_interval, replication, stratified_bootstrap, stratified_bootstrap_with_reports,
    BootstrapConfig, BootstrapRun, ConfidenceRegion, IntensityRegion, Interval, Metric,
    PercentileMode, PreparedStrata, ReplicationStats,
};
pub use bounds::{bias_bound, bounded_estimates, BoundedEstimate};
pub use model::{BiasSign, NoiseDistribution, NoiseModelSpec};
pub use percentile::percentile;

use crate::survey::GroupKey;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum InferenceError {
    #[error("no group estimates supplied")]
    NoGroups,
    #[error("empty sample list")]
    EmptySamples,
    #[error("quantile {0} outside [0, 1]")]
    BadQuantile(f64),
    #[error("empty stratum `{0}`; choose a coarser stratification or drop the voucher")]
    EmptyStratum(GroupKey),
    #[error("replications must be ≥ 1")]
    NoReplications,
    #[error("alpha {0} outside (0, 1]")]
    BadAlpha(f64),
    #[error("reporting scheme `{report}` is not a coarsening of the bias stratification `{bias}`")]
    IncompatibleSchemes { report: String, bias: String },
    #[error("no {wave}-wave records for voucher {voucher}")]
    MissingWave { voucher: crate::survey::VoucherKind, wave: crate::survey::Wave },
    #[error(transparent)]
    Estimator(#[from] crate::estimators::EstimatorError),
}
