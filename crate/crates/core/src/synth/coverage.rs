//! Monte-Carlo coverage experiments for the bootstrap intervals.

use super::generate::generate_with_seed;
use super::spec::PopulationSpec;
use super::SynthError;
use crate::inference::{stratified_bootstrap, BootstrapConfig, Metric};
use crate::rng::substream;
use crate::survey::{GroupKey, VoucherConfig};
use rand_chacha::rand_core::RngCore;
use rayon::prelude::*;
use std::collections::BTreeMap;

/// Which interval of the confidence region is being checked.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum CoverageTarget {
    /// `ci_upper` against the unadjusted observed-mean estimand.
    Upper,
    /// `ci_lower` against the `observed − min_j observed` estimand.
    Lower,
}

impl CoverageTarget {
    pub fn as_str(self) -> &'static str {
        match self {
            CoverageTarget::Upper => "upper",
            CoverageTarget::Lower => "lower",
        }
    }
}

/// Coverage of one (voucher, group, metric, interval) cell.
#[derive(Debug, Clone)]
pub struct CoverageRow {
    pub voucher: crate::survey::VoucherKind,
    pub group: GroupKey,
    pub metric: Metric,
    pub target: CoverageTarget,
    pub estimand: f64,
    pub hits: usize,
    pub trials: usize,
}

impl CoverageRow {
    pub fn rate(&self) -> f64 {
        self.hits as f64 / self.trials as f64
    }
}

/// Full experiment output.
#[derive(Debug, Clone)]
pub struct CoverageSummary {
    pub rows: Vec<CoverageRow>,
    pub trials: usize,
}

impl CoverageSummary {
    /// Mean coverage over the scheme groups (excluding `overall`) for one
    /// metric and target.
    pub fn pooled_rate(&self, metric: Metric, target: CoverageTarget) -> f64 {
        let rows: Vec<&CoverageRow> = self
            .rows
            .iter()
            .filter(|r| r.metric == metric && r.target == target && !r.group.is_overall())
            .collect();
        let hits: usize = rows.iter().map(|r| r.hits).sum();
        let total: usize = rows.iter().map(|r| r.trials).sum();
        hits as f64 / total as f64
    }

    pub fn row(
        &self,
        group: &str,
        metric: Metric,
        target: CoverageTarget,
    ) -> Option<&CoverageRow> {
        self.rows
            .iter()
            .find(|r| r.group.as_str() == group && r.metric == metric && r.target == target)
    }
}

/// Repeatedly generate data from `spec` and bootstrap it, counting how often
/// each interval covers its analytic estimand. The scheme's cells must line
/// up with (unions of) the generating groups; trial `t` draws its data and
/// bootstrap seeds from substreams of `(spec.seed, t)` and `(cfg.seed, t)`,
/// so the experiment is deterministic at any parallelism.
pub fn coverage_experiment(
    spec: &PopulationSpec,
    cfg: &BootstrapConfig,
    trials: usize,
    config: &VoucherConfig,
) -> Result<CoverageSummary, SynthError> {
    if trials < 100 {
        return Err(SynthError::Spec(format!(
            "coverage experiments need at least 100 trials, got {trials}"
        )));
    }
    spec.validate(config)?;
    cfg.validate()?;

    // analytic estimands per scheme cell: merge generating groups that land
    // in the same cell, weighting by their sizes
    let mut targets: Vec<(usize, BTreeMap<GroupKey, CellTruth>, BTreeMap<GroupKey, CellTruth>)> =
        Vec::new();
    for (v_idx, vp) in spec.vouchers.iter().enumerate() {
        let midpoints = config.spec(vp.kind).schedule.midpoints();
        let face = config.spec(vp.kind).face_value_original as f64;
        let mut es: BTreeMap<GroupKey, CellTruth> = BTreeMap::new();
        let mut ic: BTreeMap<GroupKey, CellTruth> = BTreeMap::new();
        for (g_idx, group) in vp.groups.iter().enumerate() {
            if group.n == 0 {
                continue;
            }
            let cell = cfg.scheme.group_key(cfg.scheme.group_index(&group.profile()));
            let shifted = super::generate::shifted(&group.bracket_probs, vp.sign, group.bracket_shift);
            let ic_observed =
                shifted.iter().zip(&midpoints).map(|(p, m)| p * m).sum::<f64>() / face;
            es.entry(cell.clone()).or_default().add(vp.observed_no_prob(g_idx), group.n);
            ic.entry(cell).or_default().add(ic_observed, group.n);
        }
        finish_cells(&mut es);
        finish_cells(&mut ic);
        targets.push((v_idx, es, ic));
    }

    let trial_results: Vec<Vec<(usize, GroupKey, Metric, CoverageTarget, bool)>> = (0..trials)
        .into_par_iter()
        .map(|t| {
            let data_seed = substream(spec.seed, &[t as u64]).next_u64();
            let boot_seed = substream(cfg.seed, &[t as u64]).next_u64();
            let (ds, _) = generate_with_seed(spec, config, data_seed)?;
            let mut hits = Vec::new();
            for (v_idx, es_cells, ic_cells) in &targets {
                let vp = &spec.vouchers[*v_idx];
                for (metric, cells) in [(Metric::Substitution, es_cells), (Metric::Induced, ic_cells)] {
                    let mut trial_cfg = cfg.clone();
                    trial_cfg.seed = substream(boot_seed, &[*v_idx as u64, metric as u64]).next_u64();
                    let run = stratified_bootstrap(&ds, metric, &trial_cfg, vp.kind, config)?;
                    for region in &run.regions {
                        let truth = if region.group.is_overall() {
                            overall_truth(cells)
                        } else {
                            match cells.get(&region.group) {
                                Some(cell) => cell.clone(),
                                None => continue,
                            }
                        };
                        hits.push((
                            *v_idx,
                            region.group.clone(),
                            metric,
                            CoverageTarget::Upper,
                            region.ci_upper.contains(truth.upper),
                        ));
                        hits.push((
                            *v_idx,
                            region.group.clone(),
                            metric,
                            CoverageTarget::Lower,
                            region.ci_lower.contains(truth.lower),
                        ));
                    }
                }
            }
            Ok(hits)
        })
        .collect::<Result<_, SynthError>>()?;

    let mut counts: BTreeMap<(usize, GroupKey, &'static str, CoverageTarget), usize> = BTreeMap::new();
    let mut estimands: BTreeMap<(usize, GroupKey, &'static str, CoverageTarget), f64> = BTreeMap::new();
    for (v_idx, cells_es, cells_ic) in &targets {
        for (metric, cells) in [(Metric::Substitution, cells_es), (Metric::Induced, cells_ic)] {
            for (key, cell) in cells {
                estimands.insert((*v_idx, key.clone(), metric.as_str(), CoverageTarget::Upper), cell.upper);
                estimands.insert((*v_idx, key.clone(), metric.as_str(), CoverageTarget::Lower), cell.lower);
            }
            let overall = overall_truth(cells);
            estimands.insert(
                (*v_idx, GroupKey::overall(), metric.as_str(), CoverageTarget::Upper),
                overall.upper,
            );
            estimands.insert(
                (*v_idx, GroupKey::overall(), metric.as_str(), CoverageTarget::Lower),
                overall.lower,
            );
        }
    }
    for trial in &trial_results {
        for (v_idx, group, metric, target, covered) in trial {
            *counts.entry((*v_idx, group.clone(), metric.as_str(), *target)).or_insert(0) +=
                *covered as usize;
        }
    }

    let rows = counts
        .into_iter()
        .map(|((v_idx, group, metric_str, target), hits)| CoverageRow {
            voucher: spec.vouchers[v_idx].kind,
            group: group.clone(),
            metric: if metric_str == "es" { Metric::Substitution } else { Metric::Induced },
            target,
            estimand: estimands[&(v_idx, group, metric_str, target)],
            hits,
            trials,
        })
        .collect();
    Ok(CoverageSummary { rows, trials })
}

#[derive(Debug, Clone, Default)]
struct CellTruth {
    weighted: f64,
    weight: usize,
    upper: f64,
    lower: f64,
}

impl CellTruth {
    fn add(&mut self, estimand: f64, n: usize) {
        self.weighted += estimand * n as f64;
        self.weight += n;
    }
}

fn finish_cells(cells: &mut BTreeMap<GroupKey, CellTruth>) {
    for cell in cells.values_mut() {
        cell.upper = cell.weighted / cell.weight as f64;
    }
    let bound = cells.values().map(|c| c.upper).fold(f64::INFINITY, f64::min);
    for cell in cells.values_mut() {
        cell.lower = cell.upper - bound;
    }
}

fn overall_truth(cells: &BTreeMap<GroupKey, CellTruth>) -> CellTruth {
    let weight: usize = cells.values().map(|c| c.weight).sum();
    let weighted: f64 = cells.values().map(|c| c.upper * c.weight as f64).sum();
    let upper = weighted / weight as f64;
    let bound = cells.values().map(|c| c.upper).fold(f64::INFINITY, f64::min);
    CellTruth { weighted, weight, upper, lower: upper - bound }
}
