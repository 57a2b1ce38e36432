//! Command implementations.

use super::{CliError, Format, ModeArg};
use crate::estimators;
use crate::inference::{
    intensity_interval, stratified_bootstrap_with_reports, BootstrapConfig, ConfidenceRegion,
    InferenceError, IntensityRegion, Metric, PercentileMode,
};
use crate::leontief::{impact as leontief_impact, induced_demand, scenario_compare, LeontiefError, ScenarioSet, SectorTable};
use crate::report::{
    estimates_csv, estimates_json, impact_json, impact_sectors_csv, impact_summary_csv,
    impact_text, intensity_rows, interval_chart, plot_data_csv, regions_csv, regions_json,
    regions_text, render_text_table, EstimateRow, RegionRow, RunManifest,
};
use crate::survey::{
    ingest, stratify_records, validate_stream, GroupKey, StratificationScheme, SurveyError,
    VoucherConfig, VoucherKind, Wave,
};
use crate::synth::{generate, PopulationSpec, SynthError};
use std::fs;
use std::path::{Path, PathBuf};

const BUILTIN_PATH: &str = "<builtin>";

fn survey_err(e: SurveyError) -> CliError {
    match e {
        SurveyError::Config(_) | SurveyError::Schedule(_) | SurveyError::Scheme(_) => {
            CliError::Config(e.to_string())
        }
        other => CliError::Validation(other.to_string()),
    }
}

fn inference_err(e: InferenceError) -> CliError {
    match e {
        InferenceError::BadAlpha(_)
        | InferenceError::NoReplications
        | InferenceError::IncompatibleSchemes { .. } => CliError::Config(e.to_string()),
        other => CliError::Validation(other.to_string()),
    }
}

fn table_err(e: LeontiefError) -> CliError {
    match e {
        LeontiefError::Singular => CliError::Numeric(e.to_string()),
        LeontiefError::Scenario(..) | LeontiefError::SectorOutOfRange { .. } => {
            CliError::Config(e.to_string())
        }
        other => CliError::Validation(other.to_string()),
    }
}

fn synth_err(e: SynthError) -> CliError {
    match e {
        SynthError::Spec(_) | SynthError::Voucher { .. } => CliError::Config(e.to_string()),
        SynthError::Io(e) => CliError::Config(format!("cannot read population spec: {e}")),
        SynthError::Survey(e) => CliError::Numeric(format!("generator produced invalid data: {e}")),
        SynthError::Inference(e) => CliError::Numeric(e.to_string()),
    }
}

fn load_voucher_config(path: Option<&Path>) -> Result<(VoucherConfig, String, Vec<u8>), CliError> {
    match path {
        Some(p) => {
            let bytes = fs::read(p)
                .map_err(|e| CliError::Config(format!("cannot read config {}: {e}", p.display())))?;
            let text = String::from_utf8(bytes.clone())
                .map_err(|_| CliError::Config(format!("{} is not UTF-8", p.display())))?;
            let cfg = VoucherConfig::from_toml_str(&text).map_err(survey_err)?;
            Ok((cfg, p.display().to_string(), bytes))
        }
        None => {
            let text = include_str!("../../data/vouchers.toml");
            Ok((VoucherConfig::builtin().clone(), BUILTIN_PATH.into(), text.as_bytes().to_vec()))
        }
    }
}

fn read_survey(path: &Path) -> Result<Vec<u8>, CliError> {
    fs::read(path).map_err(|e| CliError::Validation(format!("cannot read survey {}: {e}", path.display())))
}

fn parse_report_schemes(group_by: &[String]) -> Result<Vec<StratificationScheme>, CliError> {
    if group_by.is_empty() {
        return Ok(vec![
            StratificationScheme::parse("gender").unwrap(),
            StratificationScheme::parse("residence").unwrap(),
            StratificationScheme::parse("age").unwrap(),
        ]);
    }
    group_by
        .iter()
        .map(|text| StratificationScheme::parse(text).map_err(|e| CliError::Config(e.to_string())))
        .collect()
}

fn write_output(out_dir: &Path, name: &str, contents: &str) -> Result<PathBuf, CliError> {
    fs::create_dir_all(out_dir)
        .map_err(|e| CliError::Config(format!("cannot create {}: {e}", out_dir.display())))?;
    let path = out_dir.join(name);
    fs::write(&path, contents)
        .map_err(|e| CliError::Config(format!("cannot write {}: {e}", path.display())))?;
    Ok(path)
}

pub fn validate(survey: &Path, config: Option<&Path>) -> Result<(), CliError> {
    let (vconf, _, _) = load_voucher_config(config)?;
    let bytes = read_survey(survey)?;
    let report = validate_stream(bytes.as_slice(), &vconf).map_err(survey_err)?;
    println!("{}: {} valid rows, {} errors", survey.display(), report.valid_rows, report.errors.len());
    for e in &report.errors {
        println!("  {e}");
    }
    if report.is_clean() {
        Ok(())
    } else {
        Err(CliError::Validation(format!("{} validation errors", report.errors.len())))
    }
}

pub fn estimate(
    survey: &Path,
    config: Option<&Path>,
    group_by: &[String],
    include_extra_wave: bool,
    out_dir: &Path,
    format: Format,
) -> Result<(), CliError> {
    let (vconf, config_path, config_bytes) = load_voucher_config(config)?;
    let bytes = read_survey(survey)?;
    let ds = ingest(bytes.as_slice(), &vconf).map_err(survey_err)?;
    let schemes = parse_report_schemes(group_by)?;

    let mut manifest = RunManifest::new("estimate");
    manifest.add_input("survey", &survey.display().to_string(), &bytes);
    manifest.add_input("config", &config_path, &config_bytes);
    let scheme_list = schemes.iter().map(|s| s.to_string()).collect::<Vec<_>>().join(";");
    manifest.add_param("group_by", &scheme_list);
    manifest.add_param("include_extra_wave", include_extra_wave);

    let wave = if include_extra_wave { None } else { Some(Wave::Original) };
    let mut rows: Vec<EstimateRow> = Vec::new();
    let mut notices: Vec<String> = Vec::new();

    for kind in VoucherKind::ALL {
        let records = ds.records_of(kind, wave);
        if records.is_empty() {
            notices.push(format!("{kind}: no records, skipped"));
            continue;
        }
        let spec = vconf.spec(kind);
        let mut emit = |records: &[&crate::survey::SurveyRecord], group: GroupKey| {
            if records.is_empty() {
                notices.push(format!("{kind}: group {group} is empty"));
                return;
            }
            let es = estimators::substitution_rate(records, group.clone()).expect("non-empty");
            let ic = estimators::induced_rate(records, spec, group.clone()).expect("non-empty");
            rows.push(EstimateRow {
                voucher: kind,
                group: group.to_string(),
                metric: "count".into(),
                value: records.len() as f64,
                n: records.len(),
            });
            rows.push(EstimateRow {
                voucher: kind,
                group: group.to_string(),
                metric: "es".into(),
                value: es.value,
                n: es.n,
            });
            rows.push(EstimateRow {
                voucher: kind,
                group: group.to_string(),
                metric: "ic".into(),
                value: ic.value,
                n: ic.n,
            });
        };
        emit(&records, GroupKey::overall());
        for scheme in &schemes {
            for (group, subset) in stratify_records(records.iter().copied(), scheme) {
                emit(&subset, group);
            }
        }

        let original = ds.records_of(kind, Some(Wave::Original));
        let extra = ds.records_of(kind, Some(Wave::Extra));
        if extra.is_empty() {
            notices.push(format!("{kind}: no bonus-wave records; intensity section omitted"));
        } else if original.is_empty() {
            notices.push(format!("{kind}: no original-wave records; intensity section omitted"));
        } else {
            let it = estimators::treatment_intensity(&original, &extra, spec)
                .map_err(|e| CliError::Validation(e.to_string()))?;
            rows.push(EstimateRow {
                voucher: kind,
                group: "overall".into(),
                metric: "it".into(),
                value: it.value,
                n: it.n_original + it.n_extra,
            });
            if let Some(recipients) = spec.recipients {
                rows.push(EstimateRow {
                    voucher: kind,
                    group: "overall".into(),
                    metric: "it_total_millions".into(),
                    value: it.scaled_millions(recipients),
                    n: it.n_original + it.n_extra,
                });
            }
        }
    }

    match format {
        Format::Csv => {
            let path = write_output(out_dir, "estimates.csv", &estimates_csv(&rows, &manifest))?;
            println!("wrote {}", path.display());
        }
        Format::Json => {
            let path = write_output(out_dir, "estimates.json", &estimates_json(&rows, &manifest))?;
            println!("wrote {}", path.display());
        }
        Format::Text => {}
    }

    print_estimates(&rows);
    for notice in &notices {
        println!("note: {notice}");
    }
    Ok(())
}

fn print_estimates(rows: &[EstimateRow]) {
    for kind in VoucherKind::ALL {
        let mine: Vec<&EstimateRow> = rows.iter().filter(|r| r.voucher == kind).collect();
        if mine.is_empty() {
            continue;
        }
        println!("\n{kind}");
        let mut groups: Vec<String> = Vec::new();
        for r in &mine {
            if !groups.contains(&r.group) {
                groups.push(r.group.clone());
            }
        }
        let find = |group: &str, metric: &str| {
            mine.iter().find(|r| r.group == group && r.metric == metric)
        };
        let mut table: Vec<Vec<String>> = Vec::new();
        for group in &groups {
            let Some(count) = find(group, "count") else { continue };
            let fmt = |metric: &str| {
                find(group, metric).map_or("-".into(), |r| format!("{:.4}", r.value))
            };
            table.push(vec![group.clone(), format!("{}", count.n), fmt("es"), fmt("ic")]);
        }
        println!("{}", render_text_table(&["group", "n", "es", "ic"], &table));
        if let Some(it) = find("overall", "it") {
            println!("intensity of treatment: {:.2} NT$/respondent (n = {})", it.value, it.n);
        }
        if let Some(it) = find("overall", "it_total_millions") {
            println!("intensity, program total: {:.3} NT$ millions", it.value);
        }
    }
}

#[allow(clippy::too_many_arguments)]
pub fn bootstrap(
    survey: &Path,
    config: Option<&Path>,
    alpha: f64,
    replications: u32,
    seed: u64,
    group_by: &[String],
    bias_group_by: Option<&str>,
    mode: ModeArg,
    svg: bool,
    include_extra_wave: bool,
    out_dir: &Path,
    format: Format,
) -> Result<(), CliError> {
    let (vconf, config_path, config_bytes) = load_voucher_config(config)?;
    let bytes = read_survey(survey)?;
    let ds = ingest(bytes.as_slice(), &vconf).map_err(survey_err)?;
    let report_schemes = parse_report_schemes(group_by)?;
    let bias_scheme = match bias_group_by {
        Some(text) => StratificationScheme::parse(text).map_err(|e| CliError::Config(e.to_string()))?,
        None => StratificationScheme::finest_default(),
    };

    let mut cfg = BootstrapConfig::new(replications, alpha, seed, bias_scheme);
    cfg.mode = match mode {
        ModeArg::TwoSided => PercentileMode::TwoSided,
        ModeArg::OneSided => PercentileMode::OneSided,
    };
    cfg.validate().map_err(inference_err)?;

    let mut manifest = RunManifest::new("bootstrap");
    manifest.add_input("survey", &survey.display().to_string(), &bytes);
    manifest.add_input("config", &config_path, &config_bytes);
    manifest.add_param("alpha", alpha);
    manifest.add_param("replications", replications);
    manifest.add_param("seed", seed);
    manifest.add_param("bias_group_by", cfg.scheme.to_string());
    let scheme_list = report_schemes.iter().map(|s| s.to_string()).collect::<Vec<_>>().join(";");
    manifest.add_param("group_by", &scheme_list);
    manifest.add_param(
        "percentile_mode",
        match cfg.mode {
            PercentileMode::TwoSided => "two-sided",
            PercentileMode::OneSided => "one-sided",
        },
    );
    manifest.add_param("include_extra_wave", include_extra_wave);

    let wave = if include_extra_wave { None } else { Some(Wave::Original) };
    let mut regions: Vec<ConfidenceRegion> = Vec::new();
    let mut intensities: Vec<IntensityRegion> = Vec::new();
    let mut notices: Vec<String> = Vec::new();
    let mut warnings: Vec<String> = Vec::new();

    for kind in VoucherKind::ALL {
        if ds.records_of(kind, wave).is_empty() {
            notices.push(format!("{kind}: no records, skipped"));
            continue;
        }
        for metric in [Metric::Substitution, Metric::Induced] {
            let run = stratified_bootstrap_with_reports(
                &ds,
                metric,
                &cfg,
                kind,
                &vconf,
                &report_schemes,
                wave,
            )
            .map_err(inference_err)?;
            for w in run.warnings {
                if !warnings.contains(&w) {
                    warnings.push(w);
                }
            }
            regions.extend(run.regions);
        }
        match intensity_interval(&ds, &cfg, kind, &vconf) {
            Ok(region) => intensities.push(region),
            Err(InferenceError::MissingWave { .. }) => {
                notices.push(format!("{kind}: no bonus-wave records; intensity interval omitted"));
            }
            Err(e) => return Err(inference_err(e)),
        }
    }

    let mut rows: Vec<RegionRow> =
        regions.iter().map(|r| RegionRow::from_region(r, replications, alpha, seed)).collect();
    rows.extend(intensity_rows(&intensities, replications, alpha, seed));

    match format {
        Format::Csv => {
            let path = write_output(out_dir, "regions.csv", &regions_csv(&rows, &manifest))?;
            println!("wrote {}", path.display());
            let path =
                write_output(out_dir, "plot_data.csv", &plot_data_csv(&regions, &intensities, &manifest))?;
            println!("wrote {}", path.display());
        }
        Format::Json => {
            let path = write_output(out_dir, "regions.json", &regions_json(&rows, &manifest))?;
            println!("wrote {}", path.display());
            let path =
                write_output(out_dir, "plot_data.csv", &plot_data_csv(&regions, &intensities, &manifest))?;
            println!("wrote {}", path.display());
        }
        Format::Text => {}
    }

    if svg && format != Format::Text {
        let plot_dir = out_dir.join("plots");
        for kind in VoucherKind::ALL {
            for metric in [Metric::Substitution, Metric::Induced] {
                let subset: Vec<ConfidenceRegion> = regions
                    .iter()
                    .filter(|r| r.voucher == kind && r.metric == metric)
                    .cloned()
                    .collect();
                if subset.is_empty() {
                    continue;
                }
                let title = format!("{kind} {metric}");
                let chart = interval_chart(&title, &subset);
                let path =
                    write_output(&plot_dir, &format!("{kind}_{metric}.svg"), &chart)?;
                println!("wrote {}", path.display());
            }
        }
    }

    for kind in VoucherKind::ALL {
        for metric in [Metric::Substitution, Metric::Induced] {
            let subset: Vec<ConfidenceRegion> = regions
                .iter()
                .filter(|r| r.voucher == kind && r.metric == metric)
                .cloned()
                .collect();
            if subset.is_empty() {
                continue;
            }
            println!("\n{kind} {metric} (B_s = {replications}, alpha = {alpha}, seed = {seed})");
            println!("{}", regions_text(&subset));
        }
        if let Some(it) = intensities.iter().find(|r| r.voucher == kind) {
            println!(
                "{kind} intensity: point {:.2}, interval [{:.2}, {:.2}] NT$/respondent",
                it.point, it.interval.lo, it.interval.hi
            );
        }
    }
    for w in &warnings {
        println!("warning: {w}");
    }
    for n in &notices {
        println!("note: {n}");
    }
    Ok(())
}

pub fn impact(
    table_path: Option<&Path>,
    scenarios_path: Option<&Path>,
    config: Option<&Path>,
    out_dir: &Path,
    format: Format,
) -> Result<(), CliError> {
    let (vconf, config_path, config_bytes) = load_voucher_config(config)?;

    let (table, table_display, table_bytes) = match table_path {
        Some(p) => {
            let bytes = fs::read(p)
                .map_err(|e| CliError::Validation(format!("cannot read table {}: {e}", p.display())))?;
            let table = crate::leontief::load_table(bytes.as_slice()).map_err(table_err)?;
            (table, p.display().to_string(), bytes)
        }
        None => {
            let text = include_str!("../../data/sector_table.csv");
            (SectorTable::builtin().clone(), BUILTIN_PATH.into(), text.as_bytes().to_vec())
        }
    };

    let (scenarios, scen_display, scen_bytes) = match scenarios_path {
        Some(p) => {
            let bytes = fs::read(p).map_err(|e| {
                CliError::Config(format!("cannot read scenarios {}: {e}", p.display()))
            })?;
            let text = String::from_utf8(bytes.clone())
                .map_err(|_| CliError::Config(format!("{} is not UTF-8", p.display())))?;
            let set = ScenarioSet::from_toml_str(&text).map_err(table_err)?;
            (set, p.display().to_string(), bytes)
        }
        None => {
            let text = include_str!("../../data/scenarios.toml");
            (ScenarioSet::builtin().clone(), BUILTIN_PATH.into(), text.as_bytes().to_vec())
        }
    };

    let mut manifest = RunManifest::new("impact");
    manifest.add_input("table", &table_display, &table_bytes);
    manifest.add_input("scenarios", &scen_display, &scen_bytes);
    manifest.add_input("config", &config_path, &config_bytes);
    let labels = scenarios.scenarios.iter().map(|s| s.label.clone()).collect::<Vec<_>>().join(";");
    manifest.add_param("scenarios", &labels);

    let mut reports = Vec::new();
    for scenario in &scenarios.scenarios {
        let demand = induced_demand(scenario, &vconf, table.dim()).map_err(table_err)?;
        let report = leontief_impact(&table, &demand, scenario.original_total(), &scenario.label)
            .map_err(table_err)?;
        reports.push(report);
    }
    let diffs = scenario_compare(&reports).map_err(table_err)?;

    match format {
        Format::Csv => {
            let path =
                write_output(out_dir, "impact_sectors.csv", &impact_sectors_csv(&reports, &diffs, &manifest))?;
            println!("wrote {}", path.display());
            let path =
                write_output(out_dir, "impact_summary.csv", &impact_summary_csv(&reports, &diffs, &manifest))?;
            println!("wrote {}", path.display());
        }
        Format::Json => {
            let path = write_output(out_dir, "impact.json", &impact_json(&reports, &diffs, &manifest))?;
            println!("wrote {}", path.display());
        }
        Format::Text => {}
    }

    println!("\n{}", impact_text(&reports, &diffs));
    Ok(())
}

pub fn simulate(popspec: Option<&Path>, seed: Option<u64>, out_dir: &Path) -> Result<(), CliError> {
    let (mut spec, spec_display, spec_bytes) = match popspec {
        Some(p) => {
            let bytes = fs::read(p).map_err(|e| {
                CliError::Config(format!("cannot read population spec {}: {e}", p.display()))
            })?;
            let text = String::from_utf8(bytes.clone())
                .map_err(|_| CliError::Config(format!("{} is not UTF-8", p.display())))?;
            let spec = PopulationSpec::from_toml_str(&text).map_err(synth_err)?;
            (spec, p.display().to_string(), bytes)
        }
        None => {
            let text = include_str!("../../data/popspec.toml");
            (PopulationSpec::builtin(), BUILTIN_PATH.into(), text.as_bytes().to_vec())
        }
    };
    if let Some(seed) = seed {
        spec.seed = seed;
    }

    let vconf = VoucherConfig::builtin();
    let (dataset, truth) = generate(&spec, vconf).map_err(synth_err)?;

    let mut manifest = RunManifest::new("simulate");
    manifest.add_input("popspec", &spec_display, &spec_bytes);
    manifest.add_param("seed", spec.seed);

    let survey_csv = dataset
        .to_csv_string()
        .map_err(|e| CliError::Numeric(format!("serialization failed: {e}")))?;
    let survey_path = write_output(out_dir, "survey.csv", &survey_csv)?;

    #[derive(serde::Serialize)]
    struct Sidecar<'a> {
        manifest: &'a RunManifest,
        ground_truth: &'a crate::synth::GroundTruth,
    }
    let sidecar = serde_json::to_string_pretty(&Sidecar { manifest: &manifest, ground_truth: &truth })
        .expect("serializable");
    let truth_path = write_output(out_dir, "ground_truth.json", &sidecar)?;

    println!("wrote {} ({} records)", survey_path.display(), dataset.len());
    println!("wrote {}", truth_path.display());
    for voucher in &truth.vouchers {
        for empty in &voucher.empty_groups {
            println!("note: {}: group {empty} has size 0, absent from the survey", voucher.voucher);
        }
    }
    Ok(())
}
