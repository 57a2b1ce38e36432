//! Demand construction and impact propagation.

use super::scenario::ScenarioSpec;
use super::table::SectorTable;
use super::LeontiefError;
use crate::survey::VoucherConfig;
use nalgebra::DVector;

/// A final-demand change per sector, NT$ millions. Negative entries are
/// permitted only when the vector is flagged as a contraction.
#[derive(Debug, Clone, PartialEq)]
pub struct DemandVector {
    values: DVector<f64>,
    allow_negative: bool,
}

impl DemandVector {
    pub fn new(values: Vec<f64>, allow_negative: bool) -> Result<Self, LeontiefError> {
        for (i, v) in values.iter().enumerate() {
            if !v.is_finite() {
                return Err(LeontiefError::Table(format!("demand entry {} is {v}", i + 1)));
            }
            if *v < 0.0 && !allow_negative {
                return Err(LeontiefError::Table(format!(
                    "demand entry {} is negative ({v}) and the vector is not flagged as a contraction",
                    i + 1
                )));
            }
        }
        Ok(Self { values: DVector::from_vec(values), allow_negative })
    }

    pub fn values(&self) -> &DVector<f64> {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

/// Behaviorally adjusted demand: each voucher's adjusted amount lands on its
/// configured target sector; untargeted sectors stay at zero.
pub fn induced_demand(
    scenario: &ScenarioSpec,
    config: &VoucherConfig,
    dim: usize,
) -> Result<DemandVector, LeontiefError> {
    let mut values = vec![0.0; dim];
    for (kind, entry) in &scenario.vouchers {
        let sector = config.spec(*kind).target_sector;
        if sector == 0 || sector > dim {
            return Err(LeontiefError::SectorOutOfRange { voucher: *kind, sector, dim });
        }
        values[sector - 1] += entry.adjusted_amount();
    }
    DemandVector::new(values, scenario.allow_contraction)
}

/// Sector-level impact of one demand change.
#[derive(Debug, Clone, PartialEq)]
pub struct ImpactReport {
    pub label: String,
    pub sector_names: Vec<String>,
    /// The demand change that produced this report, NT$ millions.
    pub demand: Vec<f64>,
    /// GDP contribution per sector: `va_i · (L ΔF)_i`, NT$ millions.
    pub gdp: Vec<f64>,
    /// Sum of the per-sector contributions, NT$ millions.
    pub total: f64,
    /// Original program expenditure behind the multiplier, NT$ millions.
    pub original_total: f64,
    /// `total / original_total` (0 when the denominator is 0).
    pub multiplier: f64,
}

/// Propagate a demand change through the table.
pub fn impact(
    table: &SectorTable,
    demand: &DemandVector,
    original_total: f64,
    label: &str,
) -> Result<ImpactReport, LeontiefError> {
    if demand.len() != table.dim() {
        return Err(LeontiefError::DimensionMismatch { demand: demand.len(), dim: table.dim() });
    }
    let gross = table.leontief_inverse() * demand.values();
    let gdp: Vec<f64> = gross
        .iter()
        .zip(table.value_added().iter())
        .map(|(y, va)| va * y)
        .collect();
    let total: f64 = gdp.iter().sum();
    let multiplier = if original_total == 0.0 { 0.0 } else { total / original_total };
    Ok(ImpactReport {
        label: label.to_string(),
        sector_names: table.names().to_vec(),
        demand: demand.values().iter().copied().collect(),
        gdp,
        total,
        original_total,
        multiplier,
    })
}

/// Per-sector and total differences of one scenario against the baseline.
#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioDiff {
    pub label: String,
    pub base_label: String,
    pub gdp_diff: Vec<f64>,
    pub total_diff: f64,
}

/// Differences of every report against the first (the baseline).
pub fn scenario_compare(reports: &[ImpactReport]) -> Result<Vec<ScenarioDiff>, LeontiefError> {
    let Some(base) = reports.first() else {
        return Ok(Vec::new());
    };
    reports[1..]
        .iter()
        .map(|r| {
            if r.sector_names != base.sector_names {
                return Err(LeontiefError::MismatchedSectors);
            }
            Ok(ScenarioDiff {
                label: r.label.clone(),
                base_label: base.label.clone(),
                gdp_diff: r.gdp.iter().zip(&base.gdp).map(|(a, b)| a - b).collect(),
                total_diff: r.total - base.total,
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::leontief::ScenarioSet;
    use crate::rng::substream;
    use approx::assert_relative_eq;
    use rand::Rng;

    fn table() -> &'static SectorTable {
        SectorTable::builtin()
    }

    /// Independent naive evaluation of va ∘ (L ΔF) with explicit loops.
    fn naive_gdp(table: &SectorTable, demand: &[f64]) -> (Vec<f64>, f64) {
        let dim = table.dim();
        let l = table.leontief_inverse();
        let va = table.value_added();
        let mut gdp = vec![0.0; dim];
        for i in 0..dim {
            let mut acc = 0.0;
            for j in 0..dim {
                acc += l[(i, j)] * demand[j];
            }
            gdp[i] = va[i] * acc;
        }
        let total = gdp.iter().sum();
        (gdp, total)
    }

    #[test]
    fn zero_demand_gives_a_zero_report() {
        let demand = DemandVector::new(vec![0.0; 19], false).unwrap();
        let report = impact(table(), &demand, 584.53, "null").unwrap();
        assert!(report.gdp.iter().all(|&g| g == 0.0));
        assert_eq!(report.total, 0.0);
        assert_eq!(report.multiplier, 0.0);
    }

    #[test]
    fn baseline_demand_mapping_matches_sector_sums() {
        let set = ScenarioSet::builtin();
        let demand = induced_demand(&set.scenarios[0], VoucherConfig::builtin(), 19).unwrap();
        let v = demand.values();
        assert_relative_eq!(v[12], 11.28, epsilon = 1e-12); // accommodation
        assert_relative_eq!(v[10], 412.85 + 95.80 + 21.04, epsilon = 1e-12); // retail + food
        assert_relative_eq!(v[17], 29.04 + 14.52, epsilon = 1e-12); // arts
        let zero_sectors = v.iter().filter(|&&x| x == 0.0).count();
        assert_eq!(zero_sectors, 16);
    }

    #[test]
    fn impact_agrees_with_the_naive_triple_loop() {
        let set = ScenarioSet::builtin();
        for scenario in &set.scenarios {
            let demand = induced_demand(scenario, VoucherConfig::builtin(), 19).unwrap();
            let report = impact(table(), &demand, scenario.original_total(), &scenario.label).unwrap();
            let (gdp, total) = naive_gdp(table(), &report.demand);
            for (a, b) in report.gdp.iter().zip(&gdp) {
                assert_relative_eq!(a, b, epsilon = 1e-12, max_relative = 1e-12);
            }
            assert_relative_eq!(report.total, total, max_relative = 1e-12);
        }
    }

    #[test]
    fn linearity_on_random_demand_vectors() {
        let mut rng = substream(31, &[0]);
        for _ in 0..20 {
            let d1: Vec<f64> = (0..19).map(|_| rng.random::<f64>() * 100.0).collect();
            let d2: Vec<f64> = (0..19).map(|_| rng.random::<f64>() * 100.0).collect();
            let a: f64 = rng.random::<f64>() * 3.0;
            let b: f64 = rng.random::<f64>() * 3.0;
            let combo: Vec<f64> = d1.iter().zip(&d2).map(|(x, y)| a * x + b * y).collect();

            let r1 = impact(table(), &DemandVector::new(d1, false).unwrap(), 1.0, "d1").unwrap();
            let r2 = impact(table(), &DemandVector::new(d2, false).unwrap(), 1.0, "d2").unwrap();
            let rc = impact(table(), &DemandVector::new(combo, false).unwrap(), 1.0, "combo").unwrap();
            for i in 0..19 {
                let expected = a * r1.gdp[i] + b * r2.gdp[i];
                assert_relative_eq!(rc.gdp[i], expected, max_relative = 1e-9, epsilon = 1e-12);
            }
        }
    }

    #[test]
    fn multiplier_is_scale_invariant() {
        let set = ScenarioSet::builtin();
        let scenario = &set.scenarios[0];
        let demand = induced_demand(scenario, VoucherConfig::builtin(), 19).unwrap();
        let r = impact(table(), &demand, scenario.original_total(), "base").unwrap();
        let c = 3.75;
        let scaled: Vec<f64> = r.demand.iter().map(|d| d * c).collect();
        let rs = impact(
            table(),
            &DemandVector::new(scaled, false).unwrap(),
            scenario.original_total() * c,
            "scaled",
        )
        .unwrap();
        assert_relative_eq!(r.multiplier, rs.multiplier, max_relative = 1e-12);
    }

    #[test]
    fn raising_demand_never_lowers_any_sector() {
        let base: Vec<f64> = (0..19).map(|i| (i as f64) * 2.0 + 1.0).collect();
        let r0 = impact(table(), &DemandVector::new(base.clone(), false).unwrap(), 1.0, "b").unwrap();
        for j in 0..19 {
            let mut bumped = base.clone();
            bumped[j] += 10.0;
            let r1 = impact(table(), &DemandVector::new(bumped, false).unwrap(), 1.0, "b+").unwrap();
            for i in 0..19 {
                assert!(r1.gdp[i] >= r0.gdp[i] - 1e-12);
            }
        }
    }

    #[test]
    fn self_difference_is_zero() {
        let set = ScenarioSet::builtin();
        let demand = induced_demand(&set.scenarios[0], VoucherConfig::builtin(), 19).unwrap();
        let r = impact(table(), &demand, set.scenarios[0].original_total(), "baseline").unwrap();
        let diffs = scenario_compare(&[r.clone(), r]).unwrap();
        assert_eq!(diffs.len(), 1);
        assert!(diffs[0].gdp_diff.iter().all(|&d| d == 0.0));
        assert_eq!(diffs[0].total_diff, 0.0);
    }

    #[test]
    fn mismatched_sector_sets_are_rejected() {
        let set = ScenarioSet::builtin();
        let demand = induced_demand(&set.scenarios[0], VoucherConfig::builtin(), 19).unwrap();
        let a = impact(table(), &demand, 584.53, "a").unwrap();
        let mut b = a.clone();
        b.sector_names[0] = "renamed".into();
        assert!(matches!(scenario_compare(&[a, b]), Err(LeontiefError::MismatchedSectors)));
    }

    #[test]
    fn demand_dimension_must_match_table() {
        let demand = DemandVector::new(vec![1.0; 5], false).unwrap();
        assert!(matches!(
            impact(table(), &demand, 1.0, "x"),
            Err(LeontiefError::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn target_sector_out_of_range_names_the_voucher() {
        let set = ScenarioSet::builtin();
        let err = induced_demand(&set.scenarios[0], VoucherConfig::builtin(), 5).unwrap_err();
        assert!(matches!(err, LeontiefError::SectorOutOfRange { .. }));
        assert!(err.to_string().contains("sector"));
    }

    #[test]
    fn negative_demand_needs_the_contraction_flag() {
        assert!(DemandVector::new(vec![-1.0, 0.0], false).is_err());
        assert!(DemandVector::new(vec![-1.0, 0.0], true).is_ok());
        assert!(DemandVector::new(vec![f64::NAN], true).is_err());
    }
}
