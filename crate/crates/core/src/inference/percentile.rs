//! Order-statistic quantiles.

use super::InferenceError;

/// Quantile with linear interpolation between closest ranks: the value at
/// fractional rank `q·(n−1)` of the sorted sample.
///
/// This is the common default convention; it is isolated here so an
/// alternative convention can be swapped behind the same signature.
pub fn percentile(samples: &[f64], q: f64) -> Result<f64, InferenceError> {
    if samples.is_empty() {
        return Err(InferenceError::EmptySamples);
    }
    if !(0.0..=1.0).contains(&q) || q.is_nan() {
        return Err(InferenceError::BadQuantile(q));
    }
    let mut sorted = samples.to_vec();
    sorted.sort_unstable_by(f64::total_cmp);
    Ok(at_sorted(&sorted, q))
}

/// Same convention on an already-sorted slice.
pub(crate) fn at_sorted(sorted: &[f64], q: f64) -> f64 {
    let rank = q * (sorted.len() - 1) as f64;
    let lo = rank.floor() as usize;
    let hi = rank.ceil() as usize;
    if lo == hi {
        sorted[lo]
    } else {
        let frac = rank - lo as f64;
        sorted[lo] + frac * (sorted[hi] - sorted[lo])
    }
}
