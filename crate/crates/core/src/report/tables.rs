//! Tabular emitters for estimates, confidence regions, and impact reports.

use super::manifest::RunManifest;
use crate::inference::{ConfidenceRegion, IntensityRegion};
use crate::leontief::{ImpactReport, ScenarioDiff};
use crate::survey::VoucherKind;
use serde::Serialize;

/// One row of the flat estimates report.
#[derive(Debug, Clone, Serialize)]
pub struct EstimateRow {
    pub voucher: VoucherKind,
    pub group: String,
    pub metric: String,
    pub value: f64,
    pub n: usize,
}

/// One row of the confidence-region report.
#[derive(Debug, Clone, Serialize)]
pub struct RegionRow {
    pub voucher: VoucherKind,
    pub group: String,
    pub metric: String,
    pub lower_ci_lo: f64,
    pub lower_ci_hi: f64,
    pub upper_ci_lo: f64,
    pub upper_ci_hi: f64,
    pub combined_lo: f64,
    pub combined_hi: f64,
    pub b_s: u32,
    pub alpha: f64,
    pub seed: u64,
}

impl RegionRow {
    pub fn from_region(region: &ConfidenceRegion, b_s: u32, alpha: f64, seed: u64) -> Self {
        Self {
            voucher: region.voucher,
            group: region.group.to_string(),
            metric: region.metric.as_str().into(),
            lower_ci_lo: region.ci_lower.lo,
            lower_ci_hi: region.ci_lower.hi,
            upper_ci_lo: region.ci_upper.lo,
            upper_ci_hi: region.ci_upper.hi,
            combined_lo: region.combined.lo,
            combined_hi: region.combined.hi,
            b_s,
            alpha,
            seed,
        }
    }
}

/// Intensity intervals reuse the region row shape: lower and upper CIs
/// coincide for the single IT statistic.
pub fn intensity_rows(regions: &[IntensityRegion], b_s: u32, alpha: f64, seed: u64) -> Vec<RegionRow> {
    regions
        .iter()
        .map(|r| RegionRow {
            voucher: r.voucher,
            group: "overall".into(),
            metric: "it".into(),
            lower_ci_lo: r.interval.lo,
            lower_ci_hi: r.interval.hi,
            upper_ci_lo: r.interval.lo,
            upper_ci_hi: r.interval.hi,
            combined_lo: r.interval.lo,
            combined_hi: r.interval.hi,
            b_s,
            alpha,
            seed,
        })
        .collect()
}

fn num(v: f64) -> String {
    // shortest round-trip representation: persisted values are bit-exact
    format!("{v}")
}

pub fn estimates_csv(rows: &[EstimateRow], manifest: &RunManifest) -> String {
    let mut out = manifest.comment_block();
    out.push_str("voucher,group,metric,value,n\n");
    for r in rows {
        out.push_str(&format!("{},{},{},{},{}\n", r.voucher, r.group, r.metric, num(r.value), r.n));
    }
    out
}

pub fn estimates_json(rows: &[EstimateRow], manifest: &RunManifest) -> String {
    #[derive(Serialize)]
    struct Doc<'a> {
        manifest: &'a RunManifest,
        estimates: &'a [EstimateRow],
    }
    serde_json::to_string_pretty(&Doc { manifest, estimates: rows }).expect("serializable")
}

pub fn regions_csv(rows: &[RegionRow], manifest: &RunManifest) -> String {
    let mut out = manifest.comment_block();
    out.push_str(
        "voucher,group,metric,lower_ci_lo,lower_ci_hi,upper_ci_lo,upper_ci_hi,combined_lo,combined_hi,b_s,alpha,seed\n",
    );
    for r in rows {
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{},{},{},{},{}\n",
            r.voucher,
            r.group,
            r.metric,
            num(r.lower_ci_lo),
            num(r.lower_ci_hi),
            num(r.upper_ci_lo),
            num(r.upper_ci_hi),
            num(r.combined_lo),
            num(r.combined_hi),
            r.b_s,
            num(r.alpha),
            r.seed
        ));
    }
    out
}

pub fn regions_json(rows: &[RegionRow], manifest: &RunManifest) -> String {
    #[derive(Serialize)]
    struct Doc<'a> {
        manifest: &'a RunManifest,
        regions: &'a [RegionRow],
    }
    serde_json::to_string_pretty(&Doc { manifest, regions: rows }).expect("serializable")
}

/// Plot data for interval charts: one row per (group, metric, interval).
pub fn plot_data_csv(
    regions: &[ConfidenceRegion],
    intensity: &[IntensityRegion],
    manifest: &RunManifest,
) -> String {
    let mut out = manifest.comment_block();
    out.push_str("voucher,group,metric,interval,lo,hi,point\n");
    for r in regions {
        for (name, iv) in [("lower", r.ci_lower), ("upper", r.ci_upper), ("combined", r.combined)] {
            out.push_str(&format!(
                "{},{},{},{name},{},{},{}\n",
                r.voucher,
                r.group,
                r.metric,
                num(iv.lo),
                num(iv.hi),
                num(r.point)
            ));
        }
    }
    for r in intensity {
        out.push_str(&format!(
            "{},overall,it,interval,{},{},{}\n",
            r.voucher,
            num(r.interval.lo),
            num(r.interval.hi),
            num(r.point)
        ));
    }
    out
}

pub fn impact_sectors_csv(
    reports: &[ImpactReport],
    diffs: &[ScenarioDiff],
    manifest: &RunManifest,
) -> String {
    let mut out = manifest.comment_block();
    out.push_str("scenario,sector_index,sector,demand,gdp,gdp_diff_vs_baseline\n");
    for (idx, report) in reports.iter().enumerate() {
        let diff = if idx == 0 { None } else { diffs.get(idx - 1) };
        for (i, name) in report.sector_names.iter().enumerate() {
            let d = diff.map_or(0.0, |d| d.gdp_diff[i]);
            out.push_str(&format!(
                "{},{},{},{},{},{}\n",
                csv_field(&report.label),
                i + 1,
                csv_field(name),
                num(report.demand[i]),
                num(report.gdp[i]),
                num(d)
            ));
        }
    }
    out
}

pub fn impact_summary_csv(
    reports: &[ImpactReport],
    diffs: &[ScenarioDiff],
    manifest: &RunManifest,
) -> String {
    let mut out = manifest.comment_block();
    out.push_str("scenario,total_gdp,original_total,output_multiplier,total_diff_vs_baseline\n");
    for (idx, report) in reports.iter().enumerate() {
        let diff = if idx == 0 { 0.0 } else { diffs[idx - 1].total_diff };
        out.push_str(&format!(
            "{},{},{},{},{}\n",
            csv_field(&report.label),
            num(report.total),
            num(report.original_total),
            num(report.multiplier),
            num(diff)
        ));
    }
    out
}

pub fn impact_json(
    reports: &[ImpactReport],
    diffs: &[ScenarioDiff],
    manifest: &RunManifest,
) -> String {
    #[derive(Serialize)]
    struct SectorRow<'a> {
        sector_index: usize,
        sector: &'a str,
        demand: f64,
        gdp: f64,
        gdp_diff_vs_baseline: f64,
    }
    #[derive(Serialize)]
    struct Scenario<'a> {
        label: &'a str,
        total_gdp: f64,
        original_total: f64,
        output_multiplier: f64,
        total_diff_vs_baseline: f64,
        sectors: Vec<SectorRow<'a>>,
    }
    #[derive(Serialize)]
    struct Doc<'a> {
        manifest: &'a RunManifest,
        scenarios: Vec<Scenario<'a>>,
    }
    let scenarios = reports
        .iter()
        .enumerate()
        .map(|(idx, report)| {
            let diff = if idx == 0 { None } else { diffs.get(idx - 1) };
            Scenario {
                label: &report.label,
                total_gdp: report.total,
                original_total: report.original_total,
                output_multiplier: report.multiplier,
                total_diff_vs_baseline: diff.map_or(0.0, |d| d.total_diff),
                sectors: report
                    .sector_names
                    .iter()
                    .enumerate()
                    .map(|(i, name)| SectorRow {
                        sector_index: i + 1,
                        sector: name,
                        demand: report.demand[i],
                        gdp: report.gdp[i],
                        gdp_diff_vs_baseline: diff.map_or(0.0, |d| d.gdp_diff[i]),
                    })
                    .collect(),
            }
        })
        .collect();
    serde_json::to_string_pretty(&Doc { manifest, scenarios }).expect("serializable")
}

fn csv_field(s: &str) -> String {
    if s.contains(',') || s.contains('"') || s.contains('\n') {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

/// Left-align the first column, right-align the rest.
pub fn render_text_table(headers: &[&str], rows: &[Vec<String>]) -> String {
    let cols = headers.len();
    let mut widths: Vec<usize> = headers.iter().map(|h| h.chars().count()).collect();
    for row in rows {
        for (i, cell) in row.iter().enumerate() {
            widths[i] = widths[i].max(cell.chars().count());
        }
    }
    let mut out = String::new();
    let fmt_row = |cells: Vec<String>, widths: &[usize]| -> String {
        let mut line = String::new();
        for (i, cell) in cells.iter().enumerate() {
            if i == 0 {
                line.push_str(&format!("{:<width$}", cell, width = widths[0]));
            } else {
                line.push_str(&format!("  {:>width$}", cell, width = widths[i]));
            }
        }
        line.trim_end().to_string()
    };
    out.push_str(&fmt_row(headers.iter().map(|h| h.to_string()).collect(), &widths));
    out.push('\n');
    for row in rows {
        let mut cells = row.clone();
        cells.resize(cols, String::new());
        out.push_str(&fmt_row(cells, &widths));
        out.push('\n');
    }
    out
}

/// Table-style text block for the bound pair of one voucher × metric.
pub fn regions_text(regions: &[ConfidenceRegion]) -> String {
    let rows: Vec<Vec<String>> = regions
        .iter()
        .map(|r| {
            vec![
                r.group.to_string(),
                format!("{:.3}", r.point),
                format!("[{:.3}, {:.3}]", r.ci_lower.lo, r.ci_lower.hi),
                format!("[{:.3}, {:.3}]", r.ci_upper.lo, r.ci_upper.hi),
                format!("[{:.3}, {:.3}]", r.combined.lo, r.combined.hi),
            ]
        })
        .collect();
    render_text_table(&["group", "point", "lower CI", "upper CI", "combined"], &rows)
}

/// Table-6-style sector report: three decimals, totals and multipliers last.
pub fn impact_text(reports: &[ImpactReport], diffs: &[ScenarioDiff]) -> String {
    let Some(first) = reports.first() else {
        return String::new();
    };
    let mut headers: Vec<String> = vec!["sector".into()];
    headers.extend(reports.iter().map(|r| r.label.clone()));
    headers.extend(diffs.iter().map(|d| format!("diff({})", d.label)));
    let header_refs: Vec<&str> = headers.iter().map(String::as_str).collect();

    let mut rows = Vec::new();
    for (i, name) in first.sector_names.iter().enumerate() {
        let mut row = vec![name.clone()];
        row.extend(reports.iter().map(|r| format!("{:.3}", r.gdp[i])));
        row.extend(diffs.iter().map(|d| format!("{:.3}", d.gdp_diff[i])));
        rows.push(row);
    }
    let mut total_row = vec!["Total".to_string()];
    total_row.extend(reports.iter().map(|r| format!("{:.3}", r.total)));
    total_row.extend(diffs.iter().map(|d| format!("{:.3}", d.total_diff)));
    rows.push(total_row);
    let mut mult_row = vec!["Output multiplier".to_string()];
    mult_row.extend(reports.iter().map(|r| format!("{:.3}", r.multiplier)));
    rows.push(mult_row);

    render_text_table(&header_refs, &rows)
}
