//! Report emission: machine-readable CSV/JSON, aligned text tables, run
//! manifests, and interval-plot SVGs.
//!
//! Machine CSV files carry the run manifest as `#`-prefixed comment lines
//! before the header; numeric fields use the shortest round-trip
//! representation, so persisted values are bit-exact. Text tables round to
//! three decimals for reading. Nothing in any emitted artifact depends on
//! wall-clock time, which keeps repeated runs byte-identical.

mod manifest;
mod svg;
mod tables;

pub use manifest::{InputDigest, RunManifest};
pub use svg::interval_chart;
pub use tables::{
    estimates_csv, estimates_json, impact_json, impact_sectors_csv, impact_summary_csv,
    impact_text, intensity_rows, plot_data_csv, regions_csv, regions_json, regions_text,
    render_text_table, EstimateRow, RegionRow,
};
