//! The validated, immutable record collection.

use super::config::VoucherConfig;
use super::ingest::SURVEY_HEADER;
use super::types::{SurveyRecord, VoucherKind, Wave};
use super::SurveyError;
use std::collections::{BTreeMap, HashMap};
use std::io::Write;

/// A validated survey dataset. Immutable after construction, so shared reads
/// from concurrent workers are safe.
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    records: Vec<SurveyRecord>,
    counts: BTreeMap<(VoucherKind, Wave), usize>,
}

impl Dataset {
    /// Validate and assemble records: bracket indices must fit the voucher's
    /// schedule and `(respondent_id, voucher, wave)` must be unique. Row
    /// numbers in errors are 1-based positions within `records`.
    pub fn from_records(
        records: Vec<SurveyRecord>,
        config: &VoucherConfig,
    ) -> Result<Self, SurveyError> {
        let mut seen: HashMap<(String, VoucherKind, Wave), usize> = HashMap::new();
        let mut counts = BTreeMap::new();
        for (i, rec) in records.iter().enumerate() {
            let row = (i + 1) as u64;
            let schedule = &config.spec(rec.voucher).schedule;
            if !schedule.contains_index(rec.bracket_index) {
                return Err(SurveyError::Row {
                    row,
                    message: format!(
                        "bracket index {} out of range for {} (valid 0..={})",
                        rec.bracket_index,
                        rec.voucher,
                        schedule.bracket_count() - 1
                    ),
                });
            }
            let key = (rec.respondent_id.clone(), rec.voucher, rec.wave);
            if let Some(first) = seen.insert(key, i + 1) {
                return Err(SurveyError::Row {
                    row,
                    message: format!(
                        "duplicate (respondent_id, voucher, wave) = ({}, {}, {}), first seen at row {first}",
                        rec.respondent_id, rec.voucher, rec.wave
                    ),
                });
            }
            *counts.entry((rec.voucher, rec.wave)).or_insert(0) += 1;
        }
        Ok(Self { records, counts })
    }

    pub fn records(&self) -> &[SurveyRecord] {
        &self.records
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    /// `n_k`: respondents of voucher `kind` across both waves.
    pub fn n(&self, kind: VoucherKind) -> usize {
        self.n_wave(kind, Wave::Original) + self.n_wave(kind, Wave::Extra)
    }

    pub fn n_wave(&self, kind: VoucherKind, wave: Wave) -> usize {
        self.counts.get(&(kind, wave)).copied().unwrap_or(0)
    }

    /// Records of one voucher type, optionally restricted to a wave.
    pub fn records_of(&self, kind: VoucherKind, wave: Option<Wave>) -> Vec<&SurveyRecord> {
        self.records
            .iter()
            .filter(|r| r.voucher == kind && wave.is_none_or(|w| r.wave == w))
            .collect()
    }

    /// Serialize to the survey CSV format (ingesting the output reproduces
    /// an identical dataset).
    pub fn write_csv<W: Write>(&self, writer: W) -> Result<(), SurveyError> {
        let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(writer);
        w.write_record(SURVEY_HEADER)?;
        for r in &self.records {
            w.write_record([
                r.respondent_id.as_str(),
                r.voucher.as_str(),
                r.profile.gender.as_str(),
                r.profile.residence.as_str(),
                r.profile.age_band.as_str(),
                if r.triggered { "yes" } else { "no" },
                &r.bracket_index.to_string(),
                r.wave.as_str(),
            ])?;
        }
        w.flush().map_err(SurveyError::Io)?;
        Ok(())
    }

    pub fn to_csv_string(&self) -> Result<String, SurveyError> {
        let mut buf = Vec::new();
        self.write_csv(&mut buf)?;
        Ok(String::from_utf8(buf).expect("csv output is utf-8"))
    }
}
