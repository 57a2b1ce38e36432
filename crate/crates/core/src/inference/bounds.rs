//! Conservative bias-bound construction.

use super::InferenceError;
use crate::survey::GroupKey;

/// A point estimate with its conservative interval: `lower = point − B̂`
/// (bias-adjusted) and `upper = point` (unadjusted), where
/// `B̂ = min_j ŷ_j` over the finest stratification.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundedEstimate {
    pub group: GroupKey,
    pub point: f64,
    pub bias_bound: f64,
    pub lower: f64,
    pub upper: f64,
}

/// The most conservative bias estimate: the minimum group estimate.
pub fn bias_bound(group_estimates: &[(GroupKey, f64)]) -> Result<f64, InferenceError> {
    group_estimates
        .iter()
        .map(|(_, v)| *v)
        .min_by(f64::total_cmp)
        .ok_or(InferenceError::NoGroups)
}

/// Interval estimates for every group plus the overall sample, all adjusted
/// by the same bias bound taken over `group_estimates` (the finest cells).
pub fn bounded_estimates(
    group_estimates: &[(GroupKey, f64)],
    overall: f64,
) -> Result<Vec<BoundedEstimate>, InferenceError> {
    let bound = bias_bound(group_estimates)?;
    let make = |group: GroupKey, point: f64| BoundedEstimate {
        group,
        point,
        bias_bound: bound,
        lower: point - bound,
        upper: point,
    };
    let mut out: Vec<BoundedEstimate> = group_estimates
        .iter()
        .map(|(g, v)| make(g.clone(), *v))
        .collect();
    out.push(make(GroupKey::overall(), overall));
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn keys(values: &[f64]) -> Vec<(GroupKey, f64)> {
        values
            .iter()
            .enumerate()
            .map(|(i, &v)| (GroupKey::from(format!("g{i}")), v))
            .collect()
    }

    #[test]
    fn bound_is_the_minimum() {
        assert_eq!(bias_bound(&keys(&[0.3, 0.2, 0.5])).unwrap(), 0.2);
    }

    #[test]
    fn single_group_bounds_itself_to_zero() {
        let ests = keys(&[0.4]);
        assert_eq!(bias_bound(&ests).unwrap(), 0.4);
        let bounds = bounded_estimates(&ests, 0.4).unwrap();
        assert_eq!(bounds[0].lower, 0.0);
        assert_eq!(bounds[0].upper, 0.4);
    }

    #[test]
    fn empty_list_is_an_error() {
        assert!(bias_bound(&[]).is_err());
    }

    #[test]
    fn subtraction_oracle_on_three_groups() {
        let bounds = bounded_estimates(&keys(&[0.3, 0.2, 0.5]), 0.35).unwrap();
        let expect = [(0.1, 0.3), (0.0, 0.2), (0.3, 0.5), (0.15, 0.35)];
        assert_eq!(bounds.len(), 4);
        for (b, (lo, up)) in bounds.iter().zip(expect) {
            assert!((b.lower - lo).abs() < 1e-12, "{} vs {lo}", b.lower);
            assert_eq!(b.upper, up);
            assert_eq!(b.bias_bound, 0.2);
        }
        assert!(bounds[3].group.is_overall());
    }

    #[test]
    fn homogeneous_groups_collapse_lowers_to_zero() {
        let bounds = bounded_estimates(&keys(&[0.37, 0.37, 0.37]), 0.37).unwrap();
        for b in bounds {
            assert_eq!(b.lower, 0.0);
            assert_eq!(b.upper, 0.37);
        }
    }

    #[test]
    fn zero_minimum_leaves_points_untouched() {
        let bounds = bounded_estimates(&keys(&[0.0, 0.9]), 0.45).unwrap();
        assert_eq!(bounds[0].lower, 0.0);
        assert_eq!(bounds[0].upper, 0.0);
        assert_eq!(bounds[1].lower, 0.9);
        assert_eq!(bounds[1].upper, 0.9);
    }

    #[test]
    fn shifting_all_estimates_moves_uppers_not_lowers() {
        let base = [0.23, 0.41, 0.35];
        let delta = 0.125; // dyadic so the shift is exact in f64
        let shifted: Vec<f64> = base.iter().map(|v| v + delta).collect();
        let b0 = bounded_estimates(&keys(&base), 0.3).unwrap();
        let b1 = bounded_estimates(&keys(&shifted), 0.3 + delta).unwrap();
        for (a, b) in b0.iter().zip(&b1) {
            assert!((a.lower - b.lower).abs() < 1e-12);
            assert!((b.upper - a.upper - delta).abs() < 1e-12);
        }
    }

    #[test]
    fn exactly_one_group_attains_zero_lower_without_ties() {
        let bounds = bounded_estimates(&keys(&[0.3, 0.2, 0.5]), 0.35).unwrap();
        let zero_lowers = bounds.iter().filter(|b| !b.group.is_overall() && b.lower == 0.0).count();
        assert_eq!(zero_lowers, 1);
    }
}
