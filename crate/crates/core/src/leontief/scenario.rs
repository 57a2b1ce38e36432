//! Scenario configuration.
//!
//! A scenario file lists one or more scenarios; the first is the comparison
//! baseline. Each voucher entry carries its original program amount (NT$
//! millions) and either behavioral rates (`es`, `ic`) or a directly supplied
//! `induced_amount` that bypasses the formula — useful when the adjusted
//! demand was computed elsewhere.

use super::LeontiefError;
use crate::survey::VoucherKind;
use serde::Deserialize;
use std::collections::BTreeMap;
use std::path::Path;
use std::sync::OnceLock;

const BUILTIN_TOML: &str = include_str!("../../data/scenarios.toml");

/// How one voucher's original amount becomes final demand.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum VoucherAdjustment {
    /// `amount × (1 − es) × (1 + ic)`.
    Rates { es: f64, ic: f64 },
    /// Use this adjusted amount verbatim.
    Direct { induced_amount: f64 },
}

/// One voucher line of a scenario.
#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioEntry {
    /// Original program expenditure, NT$ millions.
    pub original_amount: f64,
    pub adjustment: VoucherAdjustment,
}

impl ScenarioEntry {
    /// The demand change this entry contributes, NT$ millions.
    pub fn adjusted_amount(&self) -> f64 {
        match self.adjustment {
            VoucherAdjustment::Rates { es, ic } => self.original_amount * (1.0 - es) * (1.0 + ic),
            VoucherAdjustment::Direct { induced_amount } => induced_amount,
        }
    }
}

/// A named scenario over the configured vouchers.
#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioSpec {
    pub label: String,
    pub vouchers: BTreeMap<VoucherKind, ScenarioEntry>,
    /// Permit negative adjusted amounts (contraction analysis).
    pub allow_contraction: bool,
}

impl ScenarioSpec {
    /// Total original expenditure — the multiplier denominator.
    pub fn original_total(&self) -> f64 {
        self.vouchers.values().map(|e| e.original_amount).sum()
    }
}

/// All scenarios of a configuration file, in file order.
#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioSet {
    pub scenarios: Vec<ScenarioSpec>,
}

#[derive(Debug, Deserialize)]
struct ScenarioFile {
    #[serde(rename = "scenario")]
    scenarios: Vec<ScenarioEntryFile>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct ScenarioEntryFile {
    label: String,
    #[serde(default)]
    allow_contraction: bool,
    vouchers: BTreeMap<String, VoucherEntryFile>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct VoucherEntryFile {
    original_amount: f64,
    #[serde(default)]
    es: Option<f64>,
    #[serde(default)]
    ic: Option<f64>,
    #[serde(default)]
    induced_amount: Option<f64>,
}

impl ScenarioSet {
    /// The shipped baseline / pessimistic / optimistic scenario set.
    pub fn builtin() -> &'static ScenarioSet {
        static BUILTIN: OnceLock<ScenarioSet> = OnceLock::new();
        BUILTIN.get_or_init(|| {
            ScenarioSet::from_toml_str(BUILTIN_TOML).expect("builtin scenario set is valid")
        })
    }

    pub fn from_toml_str(text: &str) -> Result<Self, LeontiefError> {
        let file: ScenarioFile =
            toml::from_str(text).map_err(|e| LeontiefError::Scenario("<config>".into(), e.to_string()))?;
        if file.scenarios.is_empty() {
            return Err(LeontiefError::Scenario("<config>".into(), "no scenarios defined".into()));
        }
        let mut scenarios = Vec::with_capacity(file.scenarios.len());
        for raw in file.scenarios {
            let mut vouchers = BTreeMap::new();
            for (name, entry) in raw.vouchers {
                let kind = VoucherKind::parse(&name).ok_or_else(|| {
                    LeontiefError::Scenario(raw.label.clone(), format!("unknown voucher `{name}`"))
                })?;
                let fail = |msg: String| LeontiefError::Scenario(raw.label.clone(), msg);
                if !entry.original_amount.is_finite() || entry.original_amount < 0.0 {
                    return Err(fail(format!(
                        "{kind}: original_amount must be ≥ 0, got {}",
                        entry.original_amount
                    )));
                }
                let adjustment = match (entry.induced_amount, entry.es, entry.ic) {
                    (Some(direct), None, None) => {
                        if !direct.is_finite() || (direct < 0.0 && !raw.allow_contraction) {
                            return Err(fail(format!(
                                "{kind}: induced_amount {direct} is negative (set allow_contraction to permit contractions)"
                            )));
                        }
                        VoucherAdjustment::Direct { induced_amount: direct }
                    }
                    (Some(_), _, _) => {
                        return Err(fail(format!(
                            "{kind}: give either induced_amount or es/ic, not both"
                        )))
                    }
                    (None, es, ic) => {
                        let es = es.unwrap_or(0.0);
                        let ic = ic.unwrap_or(0.0);
                        if !(0.0..=1.0).contains(&es) {
                            return Err(fail(format!("{kind}: es must lie in [0, 1], got {es}")));
                        }
                        if !ic.is_finite() || ic < 0.0 {
                            return Err(fail(format!("{kind}: ic must be ≥ 0, got {ic}")));
                        }
                        VoucherAdjustment::Rates { es, ic }
                    }
                };
                vouchers.insert(kind, ScenarioEntry { original_amount: entry.original_amount, adjustment });
            }
            if vouchers.is_empty() {
                return Err(LeontiefError::Scenario(raw.label.clone(), "no vouchers listed".into()));
            }
            scenarios.push(ScenarioSpec {
                label: raw.label,
                vouchers,
                allow_contraction: raw.allow_contraction,
            });
        }
        Ok(Self { scenarios })
    }

    pub fn load(path: &Path) -> Result<Self, LeontiefError> {
        let text = std::fs::read_to_string(path)?;
        Self::from_toml_str(&text)
    }
}
