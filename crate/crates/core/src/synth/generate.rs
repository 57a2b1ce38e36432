//! Sampling and analytic ground truth.

use super::spec::{GroupSpec, PopulationSpec, VoucherPopulation};
use super::SynthError;
use crate::inference::BiasSign;
use crate::rng::substream;
use crate::survey::{Dataset, SurveyRecord, VoucherConfig, VoucherKind, Wave};
use rand::Rng;
use rand_chacha::ChaCha12Rng;
use serde::Serialize;

/// Analytic truth for one generating group.
#[derive(Debug, Clone, Serialize)]
pub struct GroupTruth {
    pub group: String,
    pub n: usize,
    pub n_extra: usize,
    /// True substitution probability `θ_j`.
    pub es_true: f64,
    /// Observed-mean estimand `θ_j + D·B_j` targeted by the unadjusted
    /// estimator.
    pub es_observed: f64,
    /// True induced rate from the unshifted bracket distribution.
    pub ic_true: f64,
    /// Induced-rate estimand after the bias shift.
    pub ic_observed: f64,
    /// Estimand of the bias-adjusted lower bound, `observed − min_j observed`.
    pub es_lower_target: f64,
    pub es_upper_target: f64,
    pub ic_lower_target: f64,
    pub ic_upper_target: f64,
}

/// Analytic truth for one voucher type.
#[derive(Debug, Clone, Serialize)]
pub struct VoucherTruth {
    pub voucher: VoucherKind,
    /// `min_j` of the observed ES estimands (the bias-bound estimand).
    pub es_bias_bound: f64,
    pub ic_bias_bound: f64,
    pub groups: Vec<GroupTruth>,
    pub overall: GroupTruth,
    /// Pooled treatment-intensity estimand, present when any group has a
    /// bonus wave.
    pub intensity: Option<f64>,
    /// Groups declared with size 0: absent from the data and from `groups`.
    pub empty_groups: Vec<String>,
}

/// The ground-truth sidecar accompanying a generated survey.
#[derive(Debug, Clone, Serialize)]
pub struct GroundTruth {
    pub seed: u64,
    pub vouchers: Vec<VoucherTruth>,
}

impl GroundTruth {
    pub fn voucher(&self, kind: VoucherKind) -> Option<&VoucherTruth> {
        self.vouchers.iter().find(|v| v.voucher == kind)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("ground truth serializes")
    }
}

/// Generate a dataset and its analytic truth from `spec.seed`.
pub fn generate(
    spec: &PopulationSpec,
    config: &VoucherConfig,
) -> Result<(Dataset, GroundTruth), SynthError> {
    generate_with_seed(spec, config, spec.seed)
}

/// Same, with the seed overridden (used by repeated-trial experiments).
pub fn generate_with_seed(
    spec: &PopulationSpec,
    config: &VoucherConfig,
    seed: u64,
) -> Result<(Dataset, GroundTruth), SynthError> {
    spec.validate(config)?;
    let mut records = Vec::new();
    let mut vouchers = Vec::new();
    let mut next_id = 0u64;

    for (v_idx, vp) in spec.vouchers.iter().enumerate() {
        let midpoints = config.spec(vp.kind).schedule.midpoints();
        let face = config.spec(vp.kind).face_value_original as f64;
        let mut groups = Vec::new();
        let mut empty_groups = Vec::new();

        for (g_idx, group) in vp.groups.iter().enumerate() {
            if group.n == 0 && group.n_extra == 0 {
                empty_groups.push(group.label());
                continue;
            }
            let mut rng = substream(seed, &[v_idx as u64, g_idx as u64]);
            sample_group(vp, group, g_idx, &mut rng, &mut next_id, &mut records);
            groups.push(group_truth(vp, group, g_idx, &midpoints, face));
        }

        let overall = pooled_truth(&groups, "overall");
        let es_bias_bound = groups.iter().map(|g| g.es_observed).fold(f64::INFINITY, f64::min);
        let ic_bias_bound = groups.iter().map(|g| g.ic_observed).fold(f64::INFINITY, f64::min);
        let mut groups: Vec<GroupTruth> = groups
            .into_iter()
            .map(|g| finish_targets(g, es_bias_bound, ic_bias_bound))
            .collect();
        let overall = finish_targets(overall, es_bias_bound, ic_bias_bound);
        groups.sort_by(|a, b| a.group.cmp(&b.group));

        let intensity = intensity_estimand(vp, &midpoints);
        vouchers.push(VoucherTruth {
            voucher: vp.kind,
            es_bias_bound,
            ic_bias_bound,
            groups,
            overall,
            intensity,
            empty_groups,
        });
    }

    let dataset = Dataset::from_records(records, config)?;
    Ok((dataset, GroundTruth { seed, vouchers }))
}

fn sample_group(
    vp: &VoucherPopulation,
    group: &GroupSpec,
    g_idx: usize,
    rng: &mut ChaCha12Rng,
    next_id: &mut u64,
    records: &mut Vec<SurveyRecord>,
) {
    let p_true = vp.true_no_prob(g_idx);
    let p_obs = vp.observed_no_prob(g_idx);
    let profile = group.profile();
    for (wave, count, probs) in [
        (Wave::Original, group.n, Some(&group.bracket_probs)),
        (Wave::Extra, group.n_extra, group.extra_bracket_probs.as_ref()),
    ] {
        let Some(probs) = probs else { continue };
        for _ in 0..count {
            // shared latent uniform: the realized individual bias
            // (answered-No change) always carries the sign D
            let u: f64 = rng.random();
            let no_true = u < p_true;
            let no_observed = u < p_obs;
            debug_assert!(
                (no_observed as i8 - no_true as i8) as f64 * vp.sign.factor() >= 0.0
            );
            let bracket_true = sample_bracket(probs, rng.random());
            let bracket = biased_bracket(bracket_true, probs.len(), vp.sign, group.bracket_shift, rng);
            let id = format!("s{:07}", *next_id);
            *next_id += 1;
            records.push(SurveyRecord {
                respondent_id: id,
                voucher: vp.kind,
                profile,
                triggered: !no_observed,
                bracket_index: bracket,
                wave,
            });
        }
    }
}

fn sample_bracket(probs: &[f64], u: f64) -> usize {
    let mut acc = 0.0;
    for (c, p) in probs.iter().enumerate() {
        acc += p;
        if u < acc {
            return c;
        }
    }
    probs.len() - 1
}

/// Apply the one-bracket bias shift, clamped at the schedule ends.
fn biased_bracket(c: usize, brackets: usize, sign: BiasSign, shift: f64, rng: &mut ChaCha12Rng) -> usize {
    if shift > 0.0 && rng.random::<f64>() < shift {
        match sign {
            BiasSign::Positive => (c + 1).min(brackets - 1),
            BiasSign::Negative => c.saturating_sub(1),
        }
    } else {
        c
    }
}

/// Analytic bracket distribution after the bias shift.
pub(crate) fn shifted(probs: &[f64], sign: BiasSign, shift: f64) -> Vec<f64> {
    let c = probs.len();
    let mut out = vec![0.0; c];
    for (i, &p) in probs.iter().enumerate() {
        let target = match sign {
            BiasSign::Positive => (i + 1).min(c - 1),
            BiasSign::Negative => i.saturating_sub(1),
        };
        out[i] += p * (1.0 - shift);
        out[target] += p * shift;
    }
    out
}

fn induced_rate_of(probs: &[f64], midpoints: &[f64], face: f64) -> f64 {
    probs.iter().zip(midpoints).map(|(p, m)| p * m).sum::<f64>() / face
}

fn group_truth(
    vp: &VoucherPopulation,
    group: &GroupSpec,
    g_idx: usize,
    midpoints: &[f64],
    face: f64,
) -> GroupTruth {
    let biased = shifted(&group.bracket_probs, vp.sign, group.bracket_shift);
    GroupTruth {
        group: group.label(),
        n: group.n,
        n_extra: group.n_extra,
        es_true: vp.true_no_prob(g_idx),
        es_observed: vp.observed_no_prob(g_idx),
        ic_true: induced_rate_of(&group.bracket_probs, midpoints, face),
        ic_observed: induced_rate_of(&biased, midpoints, face),
        es_lower_target: 0.0,
        es_upper_target: 0.0,
        ic_lower_target: 0.0,
        ic_upper_target: 0.0,
    }
}

fn pooled_truth(groups: &[GroupTruth], label: &str) -> GroupTruth {
    let n: usize = groups.iter().map(|g| g.n).sum();
    let n_extra: usize = groups.iter().map(|g| g.n_extra).sum();
    let weight_total: f64 = groups.iter().map(|g| g.n as f64).sum();
    let pool = |f: fn(&GroupTruth) -> f64| -> f64 {
        if weight_total == 0.0 {
            0.0
        } else {
            groups.iter().map(|g| f(g) * g.n as f64).sum::<f64>() / weight_total
        }
    };
    GroupTruth {
        group: label.to_string(),
        n,
        n_extra,
        es_true: pool(|g| g.es_true),
        es_observed: pool(|g| g.es_observed),
        ic_true: pool(|g| g.ic_true),
        ic_observed: pool(|g| g.ic_observed),
        es_lower_target: 0.0,
        es_upper_target: 0.0,
        ic_lower_target: 0.0,
        ic_upper_target: 0.0,
    }
}

fn finish_targets(mut g: GroupTruth, es_bound: f64, ic_bound: f64) -> GroupTruth {
    g.es_lower_target = g.es_observed - es_bound;
    g.es_upper_target = g.es_observed;
    g.ic_lower_target = g.ic_observed - ic_bound;
    g.ic_upper_target = g.ic_observed;
    g
}

/// Pooled `Σ m (b₁ − b₂)` estimand over the biased distributions; `None`
/// when no group generates a bonus wave.
fn intensity_estimand(vp: &VoucherPopulation, midpoints: &[f64]) -> Option<f64> {
    let n1: f64 = vp.groups.iter().map(|g| g.n as f64).sum();
    let n2: f64 = vp.groups.iter().map(|g| g.n_extra as f64).sum();
    if n1 == 0.0 || n2 == 0.0 {
        return None;
    }
    let c = midpoints.len();
    let mut b1 = vec![0.0; c];
    let mut b2 = vec![0.0; c];
    for g in &vp.groups {
        let original = shifted(&g.bracket_probs, vp.sign, g.bracket_shift);
        for (i, p) in original.iter().enumerate() {
            b1[i] += p * g.n as f64 / n1;
        }
        if let Some(extra) = &g.extra_bracket_probs {
            let bonus = shifted(extra, vp.sign, g.bracket_shift);
            for (i, p) in bonus.iter().enumerate() {
                b2[i] += p * g.n_extra as f64 / n2;
            }
        }
    }
    Some(midpoints.iter().enumerate().map(|(i, m)| m * (b1[i] - b2[i])).sum())
}
