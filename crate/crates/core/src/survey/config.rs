//! Voucher configuration: face values, bracket schedules, target sectors.

use super::schedule::BracketSchedule;
use super::types::VoucherKind;
use super::SurveyError;
use serde::Deserialize;
use std::collections::BTreeMap;
use std::path::Path;
use std::sync::OnceLock;

/// Static description of one voucher type.
#[derive(Debug, Clone, PartialEq)]
pub struct VoucherSpec {
    pub kind: VoucherKind,
    /// Face value `F_k` of the first-round voucher set, NT$.
    pub face_value_original: u64,
    /// Face value of the second-round bonus voucher, NT$.
    pub face_value_extra: u64,
    pub schedule: BracketSchedule,
    /// 1-based index of the sector absorbing this voucher's demand.
    pub target_sector: usize,
    /// Optional redeeming-respondent count; converts per-respondent
    /// intensity estimates (NT$) into program totals (NT$ millions).
    pub recipients: Option<f64>,
}

/// The full six-voucher configuration.
#[derive(Debug, Clone, PartialEq)]
pub struct VoucherConfig {
    specs: BTreeMap<VoucherKind, VoucherSpec>,
}

#[derive(Debug, Deserialize)]
struct ConfigFile {
    vouchers: BTreeMap<String, VoucherEntry>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct VoucherEntry {
    face_value_original: u64,
    face_value_extra: u64,
    bracket_bounds: Vec<u64>,
    target_sector: usize,
    #[serde(default)]
    recipients: Option<f64>,
}

const BUILTIN_TOML: &str = include_str!("../../data/vouchers.toml");

impl VoucherConfig {
    /// The shipped default configuration (program face values, questionnaire
    /// bracket schedules, and the voucher → sector mapping).
    pub fn builtin() -> &'static VoucherConfig {
        static BUILTIN: OnceLock<VoucherConfig> = OnceLock::new();
        BUILTIN.get_or_init(|| {
            VoucherConfig::from_toml_str(BUILTIN_TOML).expect("builtin voucher config is valid")
        })
    }

    pub fn from_toml_str(text: &str) -> Result<Self, SurveyError> {
        let file: ConfigFile =
            toml::from_str(text).map_err(|e| SurveyError::Config(e.to_string()))?;
        let mut specs = BTreeMap::new();
        for (name, entry) in file.vouchers {
            let kind = VoucherKind::parse(&name)
                .ok_or_else(|| SurveyError::Config(format!("unknown voucher kind `{name}`")))?;
            if entry.face_value_extra == 0 || entry.face_value_original <= entry.face_value_extra {
                return Err(SurveyError::Config(format!(
                    "{kind}: face values must satisfy original > extra > 0 (got {} and {})",
                    entry.face_value_original, entry.face_value_extra
                )));
            }
            if entry.target_sector == 0 {
                return Err(SurveyError::Config(format!("{kind}: target_sector is 1-based")));
            }
            if let Some(r) = entry.recipients {
                if !(r > 0.0) {
                    return Err(SurveyError::Config(format!("{kind}: recipients must be > 0")));
                }
            }
            let schedule = BracketSchedule::from_bounds(&entry.bracket_bounds)
                .map_err(|e| SurveyError::Config(format!("{kind}: {e}")))?;
            specs.insert(
                kind,
                VoucherSpec {
                    kind,
                    face_value_original: entry.face_value_original,
                    face_value_extra: entry.face_value_extra,
                    schedule,
                    target_sector: entry.target_sector,
                    recipients: entry.recipients,
                },
            );
        }
        for kind in VoucherKind::ALL {
            if !specs.contains_key(&kind) {
                return Err(SurveyError::Config(format!("missing voucher kind `{kind}`")));
            }
        }
        Ok(Self { specs })
    }

    pub fn load(path: &Path) -> Result<Self, SurveyError> {
        let text = std::fs::read_to_string(path)?;
        Self::from_toml_str(&text)
    }

    pub fn spec(&self, kind: VoucherKind) -> &VoucherSpec {
        &self.specs[&kind]
    }

    pub fn specs(&self) -> impl Iterator<Item = &VoucherSpec> {
        self.specs.values()
    }
}
