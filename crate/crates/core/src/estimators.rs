//! Point estimators.
//!
//! For a record subset of one voucher type with `n` members:
//!
//! ```text
//! ES  = (# answering "No") / n                       substitution rate, ∈ [0,1]
//! b_c = (# with bracket index c) / n                 bracket shares, Σ b_c = 1
//! IC  = Σ_c midpoint(c) · b_c / F                    induced rate, ≥ 0
//! IT  = Σ_c midpoint(c) · (b_c,orig − b_c,extra)     intensity, NT$ per respondent
//! ```
//!
//! All sums run in bracket-index order so results are bitwise reproducible;
//! ES and the shares are plain integer-count ratios. Estimators are pure
//! functions of immutable inputs and safe to call from any thread.

use crate::survey::{GroupKey, SurveyRecord, VoucherKind, VoucherSpec};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum EstimatorError {
    #[error("undefined estimate: empty record subset for group `{group}`")]
    EmptySubset { group: GroupKey },
    #[error("record subset mixes voucher kinds ({first} and {second})")]
    MixedVouchers { first: VoucherKind, second: VoucherKind },
    #[error("record has bracket index {index} outside the schedule (C = {count})")]
    BracketOutOfRange { index: usize, count: usize },
}

/// A rate estimate: a proportion for ES, a ratio to face value for IC.
#[derive(Debug, Clone, PartialEq)]
pub struct RateEstimate {
    pub voucher: VoucherKind,
    pub group: GroupKey,
    pub value: f64,
    pub n: usize,
}

/// Per-bracket response shares.
#[derive(Debug, Clone, PartialEq)]
pub struct BracketDistribution {
    pub counts: Vec<usize>,
    pub shares: Vec<f64>,
    pub n: usize,
}

/// Intensity of treatment: the average-spending gap between original-wave
/// and bonus-wave respondents, NT$ per respondent.
#[derive(Debug, Clone, PartialEq)]
pub struct IntensityEstimate {
    pub voucher: VoucherKind,
    pub value: f64,
    pub n_original: usize,
    pub n_extra: usize,
}

impl IntensityEstimate {
    /// Program-scale total in NT$ millions, given a redeeming-respondent
    /// count for the voucher.
    pub fn scaled_millions(&self, recipients: f64) -> f64 {
        self.value * recipients / 1.0e6
    }
}

fn check_subset(records: &[&SurveyRecord], group: &GroupKey) -> Result<VoucherKind, EstimatorError> {
    let first = records
        .first()
        .ok_or_else(|| EstimatorError::EmptySubset { group: group.clone() })?
        .voucher;
    for rec in &records[1..] {
        if rec.voucher != first {
            return Err(EstimatorError::MixedVouchers { first, second: rec.voucher });
        }
    }
    Ok(first)
}

/// Expenditure substitution rate: the share of respondents whose spending
/// would have happened anyway (answer "No").
pub fn substitution_rate(
    records: &[&SurveyRecord],
    group: GroupKey,
) -> Result<RateEstimate, EstimatorError> {
    let voucher = check_subset(records, &group)?;
    let substituted = records.iter().filter(|r| r.substituted()).count();
    let n = records.len();
    Ok(RateEstimate { voucher, group, value: substituted as f64 / n as f64, n })
}

/// Per-bracket shares of the additional-spending answer.
pub fn bracket_distribution(
    records: &[&SurveyRecord],
    spec: &VoucherSpec,
    group: GroupKey,
) -> Result<BracketDistribution, EstimatorError> {
    check_subset(records, &group)?;
    let c = spec.schedule.bracket_count();
    let mut counts = vec![0usize; c];
    for rec in records {
        if rec.bracket_index >= c {
            return Err(EstimatorError::BracketOutOfRange { index: rec.bracket_index, count: c });
        }
        counts[rec.bracket_index] += 1;
    }
    let n = records.len();
    let shares = counts.iter().map(|&k| k as f64 / n as f64).collect();
    Ok(BracketDistribution { counts, shares, n })
}

/// Induced consumption rate: midpoint-imputed mean additional spending as a
/// ratio to the voucher face value `F`.
pub fn induced_rate(
    records: &[&SurveyRecord],
    spec: &VoucherSpec,
    group: GroupKey,
) -> Result<RateEstimate, EstimatorError> {
    let voucher = check_subset(records, &group)?;
    let dist = bracket_distribution(records, spec, group.clone())?;
    let midpoints = spec.schedule.midpoints();
    // Σ m_c · count_c is exact in f64 (half-integer midpoints times integer
    // counts); the single division keeps the result deterministic.
    let mut weighted = 0.0;
    for (m, k) in midpoints.iter().zip(&dist.counts) {
        weighted += m * *k as f64;
    }
    let n = dist.n;
    let value = weighted / (n as f64 * spec.face_value_original as f64);
    Ok(RateEstimate { voucher, group, value, n })
}

/// Intensity of treatment: the midpoint-weighted gap between the
/// original-wave and bonus-wave bracket distributions.
pub fn treatment_intensity(
    original: &[&SurveyRecord],
    extra: &[&SurveyRecord],
    spec: &VoucherSpec,
) -> Result<IntensityEstimate, EstimatorError> {
    let group = GroupKey::overall();
    let kind_original = check_subset(original, &group)?;
    let kind_extra = check_subset(extra, &group)?;
    if kind_original != kind_extra {
        return Err(EstimatorError::MixedVouchers { first: kind_original, second: kind_extra });
    }
    let d1 = bracket_distribution(original, spec, group.clone())?;
    let d2 = bracket_distribution(extra, spec, group)?;
    let midpoints = spec.schedule.midpoints();
    let mut value = 0.0;
    for (c, m) in midpoints.iter().enumerate() {
        value += m * (d1.shares[c] - d2.shares[c]);
    }
    Ok(IntensityEstimate {
        voucher: kind_original,
        value,
        n_original: d1.n,
        n_extra: d2.n,
    })
}
