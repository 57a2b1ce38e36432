//! Population specification and its TOML form.

use super::SynthError;
use crate::inference::{BiasSign, NoiseDistribution, NoiseModelSpec};
use crate::survey::{AgeBand, DemographicProfile, Gender, Residence, VoucherConfig, VoucherKind};
use serde::Deserialize;
use std::path::Path;

/// One generating stratum: a demographic cell with its effect and bias
/// parameters.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GroupSpec {
    pub gender: Gender,
    pub residence: Residence,
    pub age_band: AgeBand,
    /// Original-wave respondents to generate.
    pub n: usize,
    /// Bonus-wave respondents to generate.
    #[serde(default)]
    pub n_extra: usize,
    /// Group deviation `η_j` of the true substitution probability.
    #[serde(default)]
    pub eta: f64,
    /// Group deviation `ν_j` of the reporting bias.
    #[serde(default)]
    pub nu: f64,
    /// True bracket distribution of the original wave (length = bracket
    /// count of the voucher's schedule).
    pub bracket_probs: Vec<f64>,
    /// Probability that a bracket answer shifts one step in the bias
    /// direction.
    #[serde(default)]
    pub bracket_shift: f64,
    /// True bracket distribution of the bonus wave; required when
    /// `n_extra > 0`.
    #[serde(default)]
    pub extra_bracket_probs: Option<Vec<f64>>,
}

impl GroupSpec {
    pub fn profile(&self) -> DemographicProfile {
        DemographicProfile { gender: self.gender, residence: self.residence, age_band: self.age_band }
    }

    pub fn label(&self) -> String {
        format!("{}/{}/{}", self.gender.as_str(), self.residence.as_str(), self.age_band.as_str())
    }
}

/// Generating parameters for one voucher type.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VoucherPopulation {
    pub kind: VoucherKind,
    /// Bias direction `D`.
    pub sign: BiasSign,
    /// Mean true substitution probability `θ`.
    pub theta: f64,
    /// Mean reporting bias `B` on the substitution answer.
    #[serde(default)]
    pub bias_mean: f64,
    #[serde(rename = "group")]
    pub groups: Vec<GroupSpec>,
}

impl VoucherPopulation {
    /// The group-decomposed measurement model implied by this population.
    pub fn noise_model(&self) -> NoiseModelSpec {
        NoiseModelSpec {
            theta: self.theta,
            eta: self.groups.iter().map(|g| g.eta).collect(),
            bias_mean: self.bias_mean,
            nu: self.groups.iter().map(|g| g.nu).collect(),
            sign: self.sign,
            noise: NoiseDistribution::Sampling,
        }
    }

    /// True "No" probability `θ_j` of group `j`.
    pub fn true_no_prob(&self, j: usize) -> f64 {
        self.theta + self.groups[j].eta
    }

    /// Observed "No" probability `θ_j + D·B_j` of group `j`.
    pub fn observed_no_prob(&self, j: usize) -> f64 {
        self.noise_model().observed_mean(j)
    }
}

/// A full synthetic-survey specification.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PopulationSpec {
    pub seed: u64,
    #[serde(rename = "voucher")]
    pub vouchers: Vec<VoucherPopulation>,
}

const BUILTIN_TOML: &str = include_str!("../../data/popspec.toml");

impl PopulationSpec {
    /// The shipped demonstration spec: every voucher type, all twelve
    /// coarse demographic cells populated.
    pub fn builtin() -> PopulationSpec {
        let spec = Self::from_toml_str(BUILTIN_TOML).expect("builtin population spec parses");
        spec.validate(VoucherConfig::builtin()).expect("builtin population spec is valid");
        spec
    }

    pub fn from_toml_str(text: &str) -> Result<Self, SynthError> {
        toml::from_str(text).map_err(|e| SynthError::Spec(e.to_string()))
    }

    pub fn load(path: &Path) -> Result<Self, SynthError> {
        let text = std::fs::read_to_string(path)?;
        Self::from_toml_str(&text)
    }

    pub fn validate(&self, config: &VoucherConfig) -> Result<(), SynthError> {
        if self.vouchers.is_empty() {
            return Err(SynthError::Spec("no vouchers defined".into()));
        }
        for vp in &self.vouchers {
            let fail = |message: String| SynthError::Voucher { voucher: vp.kind, message };
            let mut seen = std::collections::HashSet::new();
            for (i, g) in vp.groups.iter().enumerate() {
                if !seen.insert(g.profile()) {
                    return Err(fail(format!("duplicate group profile `{}`", g.label())));
                }
                let brackets = config.spec(vp.kind).schedule.bracket_count();
                check_distribution(&g.bracket_probs, brackets)
                    .map_err(|m| fail(format!("group `{}` bracket_probs: {m}", g.label())))?;
                if !(0.0..=1.0).contains(&g.bracket_shift) {
                    return Err(fail(format!(
                        "group `{}`: bracket_shift {} outside [0, 1]",
                        g.label(),
                        g.bracket_shift
                    )));
                }
                match &g.extra_bracket_probs {
                    Some(probs) => check_distribution(probs, brackets)
                        .map_err(|m| fail(format!("group `{}` extra_bracket_probs: {m}", g.label())))?,
                    None if g.n_extra > 0 => {
                        return Err(fail(format!(
                            "group `{}` has n_extra = {} but no extra_bracket_probs",
                            g.label(),
                            g.n_extra
                        )))
                    }
                    None => {}
                }
                for (name, p) in [("true", vp.true_no_prob(i)), ("observed", vp.observed_no_prob(i))] {
                    if !(0.0..=1.0).contains(&p) {
                        return Err(fail(format!(
                            "group `{}`: {name} substitution probability {p:.4} outside [0, 1]",
                            g.label()
                        )));
                    }
                }
            }
            let weights: Vec<usize> = vp.groups.iter().map(|g| g.n).collect();
            vp.noise_model().validate(&weights).map_err(|m| fail(m))?;
        }
        Ok(())
    }
}

fn check_distribution(probs: &[f64], brackets: usize) -> Result<(), String> {
    if probs.len() != brackets {
        return Err(format!("has {} entries, schedule has {brackets} brackets", probs.len()));
    }
    if probs.iter().any(|p| !p.is_finite() || *p < 0.0) {
        return Err("entries must be finite and ≥ 0".into());
    }
    let sum: f64 = probs.iter().sum();
    if (sum - 1.0).abs() > 1e-9 {
        return Err(format!("sums to {sum}, expected 1"));
    }
    Ok(())
}
