//! CSV ingestion with per-row validation.
//!
//! The survey file is comma-separated UTF-8 with a mandatory header:
//!
//! ```text
//! respondent_id,voucher_type,gender,residence,age_band,triggered,bracket_index,wave
//! ```
//!
//! [`ingest`] is strict and fails on the first problem; [`validate_stream`]
//! scans the whole file and collects every row error for diagnostics.
//! Invalid rows are rejected, never repaired.

use super::config::VoucherConfig;
use super::types::{AgeBand, DemographicProfile, Gender, Residence, SurveyRecord, VoucherKind, Wave};
use super::{Dataset, SurveyError};
use std::collections::HashMap;
use std::io::Read;

/// Required header, in order.
pub const SURVEY_HEADER: [&str; 8] = [
    "respondent_id",
    "voucher_type",
    "gender",
    "residence",
    "age_band",
    "triggered",
    "bracket_index",
    "wave",
];

/// One rejected row: `row` is the 1-based line number in the file (the
/// header is line 1).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RowError {
    pub row: u64,
    pub message: String,
}

impl std::fmt::Display for RowError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "row {}: {}", self.row, self.message)
    }
}

/// Outcome of a lenient full-file scan.
#[derive(Debug)]
pub struct IngestReport {
    pub valid_rows: usize,
    pub errors: Vec<RowError>,
}

impl IngestReport {
    pub fn is_clean(&self) -> bool {
        self.errors.is_empty()
    }
}

/// Strict ingest: returns a validated [`Dataset`] or the first error.
pub fn ingest<R: Read>(reader: R, config: &VoucherConfig) -> Result<Dataset, SurveyError> {
    let mut records = Vec::new();
    scan(reader, config, |outcome| match outcome {
        Ok(rec) => {
            records.push(rec);
            Ok(())
        }
        Err(e) => Err(SurveyError::Row { row: e.row, message: e.message }),
    })?;
    // from_records re-checks invariants but cannot fail here: scan already
    // validated brackets and duplicates
    Dataset::from_records(records, config)
}

/// Lenient scan: collect every row error. Structural problems (unreadable
/// input, bad header) still fail immediately.
pub fn validate_stream<R: Read>(
    reader: R,
    config: &VoucherConfig,
) -> Result<IngestReport, SurveyError> {
    let mut report = IngestReport { valid_rows: 0, errors: Vec::new() };
    scan(reader, config, |outcome| {
        match outcome {
            Ok(_) => report.valid_rows += 1,
            Err(e) => report.errors.push(e),
        }
        Ok(())
    })?;
    Ok(report)
}

fn scan<R: Read>(
    reader: R,
    config: &VoucherConfig,
    mut sink: impl FnMut(Result<SurveyRecord, RowError>) -> Result<(), SurveyError>,
) -> Result<(), SurveyError> {
    let mut csv_reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .flexible(true)
        .from_reader(reader);

    let expected = SURVEY_HEADER.join(",");
    let headers = csv_reader.headers().map_err(|e| match e.kind() {
        csv::ErrorKind::Io(_) => SurveyError::Csv(e),
        _ => SurveyError::MissingHeader { expected: expected.clone() },
    })?;
    if headers.is_empty() || (headers.len() == 1 && headers[0].is_empty()) {
        return Err(SurveyError::MissingHeader { expected });
    }
    let found: Vec<&str> = headers.iter().collect();
    if found != SURVEY_HEADER {
        return Err(SurveyError::HeaderMismatch { expected, found: found.join(",") });
    }

    let mut seen: HashMap<(String, VoucherKind, Wave), u64> = HashMap::new();
    for result in csv_reader.records() {
        let record = result?;
        let row = record.position().map_or(0, |p| p.line());
        match parse_row(&record, config, &mut seen, row) {
            Ok(rec) => sink(Ok(rec))?,
            Err(message) => sink(Err(RowError { row, message }))?,
        }
    }
    Ok(())
}

fn parse_row(
    record: &csv::StringRecord,
    config: &VoucherConfig,
    seen: &mut HashMap<(String, VoucherKind, Wave), u64>,
    row: u64,
) -> Result<SurveyRecord, String> {
    if record.len() != SURVEY_HEADER.len() {
        return Err(format!(
            "expected {} fields, found {}",
            SURVEY_HEADER.len(),
            record.len()
        ));
    }
    let field = |i: usize| record[i].trim();

    let respondent_id = field(0).to_string();
    if respondent_id.is_empty() {
        return Err("field `respondent_id`: must not be empty".into());
    }
    let voucher = VoucherKind::parse(field(1))
        .ok_or_else(|| format!("field `voucher_type`: unknown voucher kind `{}`", field(1)))?;
    let gender = Gender::parse(field(2))
        .ok_or_else(|| format!("field `gender`: expected male|female, got `{}`", field(2)))?;
    let residence = Residence::parse(field(3)).ok_or_else(|| {
        format!(
            "field `residence`: expected taipei|northern_adjacent|other, got `{}`",
            field(3)
        )
    })?;
    let age_band = AgeBand::parse(field(4))
        .ok_or_else(|| format!("field `age_band`: unknown band `{}`", field(4)))?;
    let triggered = match field(5) {
        "yes" => true,
        "no" => false,
        other => return Err(format!("field `triggered`: expected yes|no, got `{other}`")),
    };
    let bracket_index: usize = field(6)
        .parse()
        .map_err(|_| format!("field `bracket_index`: expected an integer, got `{}`", field(6)))?;
    let schedule = &config.spec(voucher).schedule;
    if !schedule.contains_index(bracket_index) {
        return Err(format!(
            "field `bracket_index`: {bracket_index} out of range for {voucher} (valid 0..={})",
            schedule.bracket_count() - 1
        ));
    }
    let wave = Wave::parse(field(7))
        .map_or_else(|| Err(format!("field `wave`: expected original|extra, got `{}`", field(7))), Ok)?;

    let key = (respondent_id.clone(), voucher, wave);
    if let Some(first) = seen.insert(key, row) {
        return Err(format!(
            "duplicate (respondent_id, voucher, wave) = ({respondent_id}, {voucher}, {wave}), first seen at row {first}"
        ));
    }

    Ok(SurveyRecord {
        respondent_id,
        voucher,
        profile: DemographicProfile { gender, residence, age_band },
        triggered,
        bracket_index,
        wave,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    const HEADER: &str =
        "respondent_id,voucher_type,gender,residence,age_band,triggered,bracket_index,wave\n";

    fn cfg() -> &'static VoucherConfig {
        VoucherConfig::builtin()
    }

    #[test]
    fn empty_source_yields_empty_dataset() {
        let ds = ingest(HEADER.as_bytes(), cfg()).unwrap();
        assert!(ds.is_empty());
        for k in VoucherKind::ALL {
            assert_eq!(ds.n(k), 0);
        }
    }

    #[test]
    fn single_well_formed_row() {
        let text = format!("{HEADER}r001,dining,female,taipei,30_39,yes,0,original\n");
        let ds = ingest(text.as_bytes(), cfg()).unwrap();
        assert_eq!(ds.n(VoucherKind::Dining), 1);
        let rec = &ds.records()[0];
        assert!(rec.triggered);
        assert!(!rec.substituted());
        assert_eq!(rec.bracket_index, 0);
    }

    #[test]
    fn bracket_index_at_c_is_out_of_range() {
        // dining has C = 8 brackets, indices 0..=7
        let text = format!("{HEADER}r001,dining,female,taipei,30_39,yes,8,original\n");
        let err = ingest(text.as_bytes(), cfg()).unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("row 2"), "{msg}");
        assert!(msg.contains("out of range"), "{msg}");
    }

    #[test]
    fn missing_header_is_a_structural_error() {
        let err = ingest("".as_bytes(), cfg()).unwrap_err();
        assert!(matches!(err, SurveyError::MissingHeader { .. }));
        let err = ingest("r001,dining\n".as_bytes(), cfg()).unwrap_err();
        assert!(matches!(err, SurveyError::HeaderMismatch { .. }));
    }

    #[test]
    fn validate_stream_collects_all_errors_with_row_numbers() {
        let text = format!(
            "{HEADER}\
             r001,dining,female,taipei,30_39,yes,0,original\n\
             r002,dinning,female,taipei,30_39,yes,0,original\n\
             r003,dining,female,taipei,30_39,maybe,0,original\n\
             r004,dining,female,taipei,30_39,no,9,original\n\
             r001,dining,female,taipei,30_39,yes,1,original\n"
        );
        let report = validate_stream(text.as_bytes(), cfg()).unwrap();
        assert_eq!(report.valid_rows, 1);
        assert_eq!(report.errors.len(), 4);
        assert_eq!(report.errors[0].row, 3);
        assert!(report.errors[0].message.contains("dinning"));
        assert_eq!(report.errors[1].row, 4);
        assert!(report.errors[1].message.contains("triggered"));
        assert_eq!(report.errors[2].row, 5);
        assert!(report.errors[2].message.contains("out of range"));
        assert_eq!(report.errors[3].row, 6);
        assert!(report.errors[3].message.contains("duplicate"));
        assert!(report.errors[3].message.contains("first seen at row 2"));
    }

    #[test]
    fn wrong_field_count_is_reported() {
        let text = format!("{HEADER}r001,dining,female\n");
        let report = validate_stream(text.as_bytes(), cfg()).unwrap();
        assert_eq!(report.errors.len(), 1);
        assert!(report.errors[0].message.contains("expected 8 fields"));
    }

    #[test]
    fn ingest_round_trips_through_csv() {
        let text = format!(
            "{HEADER}\
             r001,dining,female,taipei,30_39,yes,0,original\n\
             r002,accommodation,male,other,60_plus,no,7,original\n\
             r002,accommodation,male,other,60_plus,yes,3,extra\n\
             r003,market,female,northern_adjacent,under_20,no,2,original\n"
        );
        let ds = ingest(text.as_bytes(), cfg()).unwrap();
        let serialized = ds.to_csv_string().unwrap();
        let ds2 = ingest(serialized.as_bytes(), cfg()).unwrap();
        assert_eq!(ds, ds2);
        assert_eq!(serialized, ds2.to_csv_string().unwrap());
    }
}
