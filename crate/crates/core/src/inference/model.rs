//! The measurement model behind the bounds.
//!
//! An observed response decomposes as `y = θ + B + ε`: the true effect
//! `θ_j = θ + η_j` (group deviations `η` average to zero), a one-sided
//! reporting bias `B_j = B + ν_j` (deviations `ν` average to zero, and every
//! individual bias shares the known sign `D`), and mean-zero noise `ε`. Under
//! this model a group mean identifies `θ_j + B_j` only, which is what makes
//! the minimum-subgroup bias bound conservative.
//!
//! This type is shared with the synthetic generator, which realizes the model
//! concretely: the bias shifts the substitution answer probability, and for
//! bracketed spending it stochastically shifts answers one bracket in the
//! direction of `D`; `ε` is the centered Bernoulli/categorical sampling
//! residual.

use serde::{Deserialize, Serialize};

/// Known direction of the reporting bias.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum BiasSign {
    #[serde(rename = "positive")]
    Positive,
    #[serde(rename = "negative")]
    Negative,
}

impl BiasSign {
    pub fn factor(self) -> f64 {
        match self {
            BiasSign::Positive => 1.0,
            BiasSign::Negative => -1.0,
        }
    }
}

/// Distribution family of the idiosyncratic noise `ε`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum NoiseDistribution {
    /// The centered sampling residual of the discrete response itself
    /// (Bernoulli for the substitution answer, categorical for brackets).
    #[default]
    #[serde(rename = "sampling")]
    Sampling,
}

/// Group-decomposed effect and bias parameters for one voucher type.
#[derive(Debug, Clone, PartialEq)]
pub struct NoiseModelSpec {
    /// Mean true effect `θ` (≥ 0).
    pub theta: f64,
    /// Group deviations `η_j`; weighted mean 0.
    pub eta: Vec<f64>,
    /// Mean reporting bias `B`.
    pub bias_mean: f64,
    /// Group bias deviations `ν_j`; weighted mean 0.
    pub nu: Vec<f64>,
    /// Sign constraint `D`: every individual bias satisfies `B_ik · D ≥ 0`.
    pub sign: BiasSign,
    pub noise: NoiseDistribution,
}

impl NoiseModelSpec {
    /// Validate the decomposition against group weights (sizes `n_j`):
    /// weighted deviations must average to zero within `1e-12` of the total
    /// magnitude, and the group bias `B + ν_j` must carry the sign `D`.
    pub fn validate(&self, weights: &[usize]) -> Result<(), String> {
        if self.eta.len() != weights.len() || self.nu.len() != weights.len() {
            return Err(format!(
                "deviation vectors have {} / {} entries for {} groups",
                self.eta.len(),
                self.nu.len(),
                weights.len()
            ));
        }
        if self.theta < 0.0 {
            return Err(format!("theta must be ≥ 0, got {}", self.theta));
        }
        let total: f64 = weights.iter().map(|&w| w as f64).sum();
        if total > 0.0 {
            for (name, dev) in [("eta", &self.eta), ("nu", &self.nu)] {
                let weighted: f64 =
                    dev.iter().zip(weights).map(|(d, &w)| d * w as f64).sum::<f64>() / total;
                if weighted.abs() > 1e-12 {
                    return Err(format!("weighted mean of {name} is {weighted:.3e}, not 0"));
                }
            }
        }
        for (j, nu) in self.nu.iter().enumerate() {
            let group_bias = self.bias_mean + nu;
            if group_bias * self.sign.factor() < 0.0 {
                return Err(format!(
                    "group {j}: bias {group_bias} contradicts the sign constraint"
                ));
            }
        }
        Ok(())
    }

    /// Observed-mean estimand `θ_j + B_j` for group `j` (the quantity the
    /// unadjusted estimator targets). The bias enters with its sign.
    pub fn observed_mean(&self, j: usize) -> f64 {
        self.true_mean(j) + self.sign.factor() * (self.bias_mean + self.nu[j])
    }

    /// True-effect estimand `θ_j = θ + η_j`.
    pub fn true_mean(&self, j: usize) -> f64 {
        self.theta + self.eta[j]
    }
}
