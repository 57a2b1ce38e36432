//! Stratified bootstrap for the bound pair.
//!
//! Each replication resamples `n_j` observations with replacement inside
//! every stratum (so all stratum sizes are preserved), recomputes the group
//! estimates `ŷ*_j`, takes the replication's bias bound `B̂* = min_j ŷ*_j`,
//! and stores the bound statistics `lower* = ŷ*_g − B̂*` and `upper* = ŷ*_g`
//! for every reporting group `g`. Percentile intervals of the stored
//! statistics form the confidence region.
//!
//! Replication `r` draws from an RNG substream derived solely from
//! `(seed, r, stratum)`, so results are bitwise identical under any parallel
//! execution order or worker count. Replications run in parallel and are
//! reduced in replication-index order.

use super::percentile::at_sorted;
use super::InferenceError;
use crate::rng::substream;
use crate::survey::{Dataset, GroupKey, StratificationScheme, VoucherConfig, VoucherKind, Wave};
use rand::Rng;
use rayon::prelude::*;

/// Which estimator the bootstrap resamples.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Metric {
    /// Expenditure substitution rate.
    Substitution,
    /// Induced consumption rate.
    Induced,
}

impl Metric {
    pub fn as_str(self) -> &'static str {
        match self {
            Metric::Substitution => "es",
            Metric::Induced => "ic",
        }
    }
}

impl std::fmt::Display for Metric {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Percentile convention for the reported intervals.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum PercentileMode {
    /// Two-sided equal-tail interval at `α/2` and `1 − α/2`.
    #[default]
    TwoSided,
    /// One-sided convention reporting the `α` and `1 − α` percentiles.
    OneSided,
}

/// Bootstrap parameters.
#[derive(Debug, Clone)]
pub struct BootstrapConfig {
    /// Number of replications `B_s`.
    pub replications: u32,
    /// Significance level; `(0, 1]`, where 1 degenerates to the median.
    pub alpha: f64,
    pub seed: u64,
    /// Stratification used both for resampling and for the bias bound.
    pub scheme: StratificationScheme,
    pub mode: PercentileMode,
}

impl BootstrapConfig {
    pub fn new(replications: u32, alpha: f64, seed: u64, scheme: StratificationScheme) -> Self {
        Self { replications, alpha, seed, scheme, mode: PercentileMode::TwoSided }
    }

    pub fn validate(&self) -> Result<(), InferenceError> {
        if self.replications == 0 {
            return Err(InferenceError::NoReplications);
        }
        if !(self.alpha > 0.0 && self.alpha <= 1.0) {
            return Err(InferenceError::BadAlpha(self.alpha));
        }
        Ok(())
    }

    /// The `(low, high)` quantiles implied by `alpha` and the mode.
    pub fn quantile_pair(&self) -> (f64, f64) {
        match self.mode {
            PercentileMode::TwoSided => (self.alpha / 2.0, 1.0 - self.alpha / 2.0),
            PercentileMode::OneSided => {
                (self.alpha.min(0.5), 1.0 - self.alpha.min(0.5))
            }
        }
    }

    /// Percentiles thinner than `1/B_s` cannot be resolved; warn, don't fail.
    pub fn resolution_warning(&self) -> Option<String> {
        let (lo, hi) = self.quantile_pair();
        let tail = lo.min(1.0 - hi);
        if tail > 0.0 && (self.replications as f64) < 1.0 / tail {
            Some(format!(
                "B_s = {} is too small to resolve the {:.3}/{:.3} percentiles; use at least {} replications",
                self.replications,
                lo,
                hi,
                (1.0 / tail).ceil() as u64
            ))
        } else {
            None
        }
    }
}

/// A closed interval.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
}

impl Interval {
    pub fn contains(&self, x: f64) -> bool {
        self.lo <= x && x <= self.hi
    }

    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }
}

/// Paired percentile intervals for one reporting group: the bias-adjusted
/// lower-bound statistic, the unadjusted upper-bound statistic, and their
/// hull.
#[derive(Debug, Clone, PartialEq)]
pub struct ConfidenceRegion {
    pub voucher: VoucherKind,
    pub group: GroupKey,
    pub metric: Metric,
    /// Full-sample point estimate for the group (unadjusted).
    pub point: f64,
    pub ci_lower: Interval,
    pub ci_upper: Interval,
    pub combined: Interval,
}

/// Bootstrap output: one region per reporting group plus `overall`.
#[derive(Debug, Clone)]
pub struct BootstrapRun {
    pub regions: Vec<ConfidenceRegion>,
    pub warnings: Vec<String>,
}

/// Percentile interval for the treatment-intensity statistic.
#[derive(Debug, Clone, PartialEq)]
pub struct IntensityRegion {
    pub voucher: VoucherKind,
    pub point: f64,
    pub interval: Interval,
    pub n_original: usize,
    pub n_extra: usize,
}

struct Stratum {
    key: GroupKey,
    substituted: Vec<bool>,
    bracket: Vec<u8>,
}

struct ReportGroup {
    key: GroupKey,
    members: Vec<usize>,
}

/// Records of one voucher type, split into bias strata and mapped onto the
/// reporting groups. Construction fails on any empty stratum.
pub struct PreparedStrata {
    kind: VoucherKind,
    face_value: f64,
    midpoints: Vec<f64>,
    strata: Vec<Stratum>,
    reports: Vec<ReportGroup>,
}

/// Per-replication statistics, indexed like [`PreparedStrata`]: stratum
/// vectors follow the bias scheme's cell order, `lower`/`upper` follow the
/// reporting-group order.
#[derive(Debug, Clone)]
pub struct ReplicationStats {
    /// Number of observations drawn per stratum (always `n_j`).
    pub stratum_sizes: Vec<usize>,
    /// Resampled estimate `ŷ*_j` per stratum.
    pub stratum_estimates: Vec<f64>,
    /// The replication's bias bound `B̂* = min_j ŷ*_j`.
    pub bias: f64,
    pub lower: Vec<f64>,
    pub upper: Vec<f64>,
}

impl PreparedStrata {
    pub fn new(
        ds: &Dataset,
        kind: VoucherKind,
        config: &VoucherConfig,
        bias_scheme: &StratificationScheme,
        report_schemes: &[StratificationScheme],
        wave: Option<Wave>,
    ) -> Result<Self, InferenceError> {
        for scheme in report_schemes {
            if !scheme.is_coarsening_of(bias_scheme) {
                return Err(InferenceError::IncompatibleSchemes {
                    report: scheme.to_string(),
                    bias: bias_scheme.to_string(),
                });
            }
        }

        let records = ds.records_of(kind, wave);
        let cells = bias_scheme.group_count();
        let mut strata: Vec<Stratum> = (0..cells)
            .map(|i| Stratum {
                key: bias_scheme.group_key(i),
                substituted: Vec::new(),
                bracket: Vec::new(),
            })
            .collect();
        for rec in records {
            let cell = bias_scheme.group_index(&rec.profile);
            strata[cell].substituted.push(rec.substituted());
            strata[cell].bracket.push(rec.bracket_index as u8);
        }
        if let Some(empty) = strata.iter().find(|s| s.substituted.is_empty()) {
            return Err(InferenceError::EmptyStratum(empty.key.clone()));
        }

        let mut reports = Vec::new();
        for scheme in report_schemes {
            for g in 0..scheme.group_count() {
                reports.push(ReportGroup { key: scheme.group_key(g), members: Vec::new() });
            }
        }
        // map each bias cell into every reporting scheme via a representative
        // profile of the cell
        let mut offset = 0;
        for scheme in report_schemes {
            for (cell, _) in strata.iter().enumerate() {
                let profile = bias_scheme.representative_profile(cell);
                let g = scheme.group_index(&profile);
                reports[offset + g].members.push(cell);
            }
            offset += scheme.group_count();
        }
        reports.push(ReportGroup { key: GroupKey::overall(), members: (0..cells).collect() });

        let spec = config.spec(kind);
        Ok(Self {
            kind,
            face_value: spec.face_value_original as f64,
            midpoints: spec.schedule.midpoints(),
            strata,
            reports,
        })
    }

    pub fn kind(&self) -> VoucherKind {
        self.kind
    }

    pub fn stratum_count(&self) -> usize {
        self.strata.len()
    }

    pub fn stratum_sizes(&self) -> Vec<usize> {
        self.strata.iter().map(|s| s.substituted.len()).collect()
    }

    pub fn report_keys(&self) -> Vec<GroupKey> {
        self.reports.iter().map(|r| r.key.clone()).collect()
    }

    fn stratum_counts(&self, metric: Metric, s: &Stratum) -> StratumCounts {
        match metric {
            Metric::Substitution => {
                StratumCounts::Substitution(s.substituted.iter().filter(|&&v| v).count() as u64)
            }
            Metric::Induced => {
                let mut counts = vec![0u64; self.midpoints.len()];
                for &b in &s.bracket {
                    counts[b as usize] += 1;
                }
                StratumCounts::Induced(counts)
            }
        }
    }

    fn estimate(&self, metric: Metric, counts: &StratumCounts, n: u64) -> f64 {
        match (metric, counts) {
            (Metric::Substitution, StratumCounts::Substitution(c)) => *c as f64 / n as f64,
            (Metric::Induced, StratumCounts::Induced(counts)) => {
                let mut weighted = 0.0;
                for (m, &c) in self.midpoints.iter().zip(counts) {
                    weighted += m * c as f64;
                }
                weighted / (n as f64 * self.face_value)
            }
            _ => unreachable!("metric/count mismatch"),
        }
    }

    /// Full-sample (non-resampled) estimates: per stratum and per reporting
    /// group.
    pub fn point_estimates(&self, metric: Metric) -> (Vec<f64>, Vec<f64>) {
        let counts: Vec<StratumCounts> =
            self.strata.iter().map(|s| self.stratum_counts(metric, s)).collect();
        let sizes: Vec<u64> = self.strata.iter().map(|s| s.substituted.len() as u64).collect();
        let per_stratum: Vec<f64> = counts
            .iter()
            .zip(&sizes)
            .map(|(c, &n)| self.estimate(metric, c, n))
            .collect();
        let per_report = self
            .reports
            .iter()
            .map(|r| {
                let mut acc = StratumCounts::zero(metric, self.midpoints.len());
                let mut n = 0;
                for &m in &r.members {
                    acc.add(&counts[m]);
                    n += sizes[m];
                }
                self.estimate(metric, &acc, n)
            })
            .collect();
        (per_stratum, per_report)
    }
}

enum StratumCounts {
    Substitution(u64),
    Induced(Vec<u64>),
}

impl StratumCounts {
    fn zero(metric: Metric, brackets: usize) -> Self {
        match metric {
            Metric::Substitution => StratumCounts::Substitution(0),
            Metric::Induced => StratumCounts::Induced(vec![0; brackets]),
        }
    }

    fn add(&mut self, other: &StratumCounts) {
        match (self, other) {
            (StratumCounts::Substitution(a), StratumCounts::Substitution(b)) => *a += b,
            (StratumCounts::Induced(a), StratumCounts::Induced(b)) => {
                for (x, y) in a.iter_mut().zip(b) {
                    *x += y;
                }
            }
            _ => unreachable!("metric/count mismatch"),
        }
    }
}

/// Run replication `r`: resample every stratum with replacement (preserving
/// its size), recompute estimates, and derive the bound statistics.
pub fn replication(prep: &PreparedStrata, metric: Metric, seed: u64, r: u32) -> ReplicationStats {
    let mut stratum_sizes = Vec::with_capacity(prep.strata.len());
    let mut stratum_counts = Vec::with_capacity(prep.strata.len());
    for (s_idx, stratum) in prep.strata.iter().enumerate() {
        let n = stratum.substituted.len();
        let mut rng = substream(seed, &[r as u64, s_idx as u64]);
        let mut drawn = 0usize;
        let counts = match metric {
            Metric::Substitution => {
                let mut c = 0u64;
                for _ in 0..n {
                    let i = rng.random_range(0..n);
                    c += stratum.substituted[i] as u64;
                    drawn += 1;
                }
                StratumCounts::Substitution(c)
            }
            Metric::Induced => {
                let mut counts = vec![0u64; prep.midpoints.len()];
                for _ in 0..n {
                    let i = rng.random_range(0..n);
                    counts[stratum.bracket[i] as usize] += 1;
                    drawn += 1;
                }
                StratumCounts::Induced(counts)
            }
        };
        stratum_sizes.push(drawn);
        stratum_counts.push(counts);
    }

    let sizes: Vec<u64> = stratum_sizes.iter().map(|&n| n as u64).collect();
    let stratum_estimates: Vec<f64> = stratum_counts
        .iter()
        .zip(&sizes)
        .map(|(c, &n)| prep.estimate(metric, c, n))
        .collect();
    let bias = stratum_estimates.iter().copied().min_by(f64::total_cmp).expect("non-empty strata");

    let mut lower = Vec::with_capacity(prep.reports.len());
    let mut upper = Vec::with_capacity(prep.reports.len());
    for report in &prep.reports {
        let mut acc = StratumCounts::zero(metric, prep.midpoints.len());
        let mut n = 0;
        for &m in &report.members {
            acc.add(&stratum_counts[m]);
            n += sizes[m];
        }
        let est = prep.estimate(metric, &acc, n);
        lower.push(est - bias);
        upper.push(est);
    }

    ReplicationStats { stratum_sizes, stratum_estimates, bias, lower, upper }
}

/// Bootstrap with explicit reporting schemes (each must be a coarsening of
/// `cfg.scheme`); regions are emitted per reporting group in scheme order,
/// then `overall`.
pub fn stratified_bootstrap_with_reports(
    ds: &Dataset,
    metric: Metric,
    cfg: &BootstrapConfig,
    kind: VoucherKind,
    config: &VoucherConfig,
    report_schemes: &[StratificationScheme],
    wave: Option<Wave>,
) -> Result<BootstrapRun, InferenceError> {
    cfg.validate()?;
    let default_reports = [cfg.scheme.clone()];
    let reports: &[StratificationScheme] =
        if report_schemes.is_empty() { &default_reports } else { report_schemes };
    let prep = PreparedStrata::new(ds, kind, config, &cfg.scheme, reports, wave)?;
    let warnings = cfg.resolution_warning().into_iter().collect();

    let stats: Vec<ReplicationStats> = (0..cfg.replications)
        .into_par_iter()
        .map(|r| replication(&prep, metric, cfg.seed, r))
        .collect();

    let (_, points) = prep.point_estimates(metric);
    let (q_lo, q_hi) = cfg.quantile_pair();
    let n_groups = prep.reports.len();
    let mut regions = Vec::with_capacity(n_groups);
    for g in 0..n_groups {
        let mut lower_stats: Vec<f64> = stats.iter().map(|s| s.lower[g]).collect();
        let mut upper_stats: Vec<f64> = stats.iter().map(|s| s.upper[g]).collect();
        lower_stats.sort_unstable_by(f64::total_cmp);
        upper_stats.sort_unstable_by(f64::total_cmp);
        let ci_lower = Interval { lo: at_sorted(&lower_stats, q_lo), hi: at_sorted(&lower_stats, q_hi) };
        let ci_upper = Interval { lo: at_sorted(&upper_stats, q_lo), hi: at_sorted(&upper_stats, q_hi) };
        let combined = Interval { lo: ci_lower.lo.min(ci_upper.lo), hi: ci_upper.hi.max(ci_lower.hi) };
        regions.push(ConfidenceRegion {
            voucher: kind,
            group: prep.reports[g].key.clone(),
            metric,
            point: points[g],
            ci_lower,
            ci_upper,
            combined,
        });
    }
    Ok(BootstrapRun { regions, warnings })
}

/// Bootstrap confidence regions per stratum of `cfg.scheme` plus `overall`.
///
/// Original-wave records only; the bonus wave enters through
/// [`intensity_interval`].
pub fn stratified_bootstrap(
    ds: &Dataset,
    metric: Metric,
    cfg: &BootstrapConfig,
    kind: VoucherKind,
    config: &VoucherConfig,
) -> Result<BootstrapRun, InferenceError> {
    stratified_bootstrap_with_reports(ds, metric, cfg, kind, config, &[], Some(Wave::Original))
}

/// Percentile interval for the treatment-intensity statistic, resampling the
/// original and bonus waves independently within each stratum. Stratum cells
/// empty in one wave contribute no draws for that wave; each wave must be
/// non-empty overall.
pub fn intensity_interval(
    ds: &Dataset,
    cfg: &BootstrapConfig,
    kind: VoucherKind,
    config: &VoucherConfig,
) -> Result<IntensityRegion, InferenceError> {
    cfg.validate()?;
    let spec = config.spec(kind);
    let midpoints = spec.schedule.midpoints();

    let mut waves: Vec<Vec<Vec<u8>>> = Vec::with_capacity(2);
    for wave in [Wave::Original, Wave::Extra] {
        let records = ds.records_of(kind, Some(wave));
        if records.is_empty() {
            return Err(InferenceError::MissingWave { voucher: kind, wave });
        }
        let mut cells: Vec<Vec<u8>> = vec![Vec::new(); cfg.scheme.group_count()];
        for rec in records {
            cells[cfg.scheme.group_index(&rec.profile)].push(rec.bracket_index as u8);
        }
        waves.push(cells);
    }

    let point = intensity_from_cells(&waves[0], &waves[1], &midpoints, None, 0);

    let stats: Vec<f64> = (0..cfg.replications)
        .into_par_iter()
        .map(|r| intensity_from_cells(&waves[0], &waves[1], &midpoints, Some(cfg.seed), r))
        .collect();
    let mut sorted = stats;
    sorted.sort_unstable_by(f64::total_cmp);
    let (q_lo, q_hi) = cfg.quantile_pair();
    let interval = Interval { lo: at_sorted(&sorted, q_lo), hi: at_sorted(&sorted, q_hi) };

    Ok(IntensityRegion {
        voucher: kind,
        point,
        interval,
        n_original: waves[0].iter().map(Vec::len).sum(),
        n_extra: waves[1].iter().map(Vec::len).sum(),
    })
}

/// Compute IT from per-cell bracket lists, optionally resampling each cell.
/// The RNG path tags the wave so the two waves draw independent streams.
fn intensity_from_cells(
    original: &[Vec<u8>],
    extra: &[Vec<u8>],
    midpoints: &[f64],
    resample_seed: Option<u64>,
    r: u32,
) -> f64 {
    let mut shares = [vec![0u64; midpoints.len()], vec![0u64; midpoints.len()]];
    let mut totals = [0u64; 2];
    for (w, cells) in [original, extra].into_iter().enumerate() {
        for (cell_idx, cell) in cells.iter().enumerate() {
            let n = cell.len();
            if n == 0 {
                continue;
            }
            match resample_seed {
                Some(seed) => {
                    let mut rng = substream(seed, &[r as u64, w as u64, cell_idx as u64]);
                    for _ in 0..n {
                        let i = rng.random_range(0..n);
                        shares[w][cell[i] as usize] += 1;
                    }
                }
                None => {
                    for &b in cell {
                        shares[w][b as usize] += 1;
                    }
                }
            }
            totals[w] += n as u64;
        }
    }
    let mut it = 0.0;
    for (c, m) in midpoints.iter().enumerate() {
        let b1 = shares[0][c] as f64 / totals[0] as f64;
        let b2 = shares[1][c] as f64 / totals[1] as f64;
        it += m * (b1 - b2);
    }
    it
}
