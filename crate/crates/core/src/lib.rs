//! Analysis toolkit for sector-restricted consumption-voucher programs.
//!
//! The library estimates three behavioral parameters from bracketed survey
//! responses — the expenditure substitution rate (voucher spending that merely
//! replaces planned cash spending), the induced consumption rate
//! (out-of-pocket spending beyond the voucher face value, as a ratio to that
//! face value), and the intensity of treatment (the spending difference
//! between full-value and small bonus vouchers). Because self-reported
//! answers may carry a one-sided reporting bias, point estimates are wrapped
//! in conservative bounds (the minimum subgroup estimate serves as the bias
//! bound) and a stratified bootstrap produces paired percentile confidence
//! intervals for both bounds.
//!
//! Behaviorally adjusted demand, `amount × (1 − ES) × (1 + IC)` per voucher,
//! is then pushed through a regional Leontief model to report sector-level
//! GDP contributions and output multipliers under alternative scenarios.
//!
//! Module map:
//! - [`survey`] — data model, bracket schedules, stratification, CSV ingest
//! - [`estimators`] — ES / IC / bracket-share / intensity point estimators
//! - [`inference`] — bias bounds, stratified bootstrap, confidence regions
//! - [`leontief`] — sector table, demand adjustment, impact and multipliers
//! - [`synth`] — synthetic populations with known ground truth
//! - [`report`] — tabular/JSON emission, run manifests, interval plots
//! - [`cli`] — the `voucherkit` command-line surface

pub mod cli;
pub mod estimators;
pub mod inference;
pub mod leontief;
pub mod report;
pub mod rng;
pub mod survey;
pub mod synth;
