//! Minimal static interval charts.
//!
//! One chart per voucher × metric: each group gets a row with the
//! bias-adjusted lower-bound interval, the unadjusted upper-bound interval,
//! and the point estimate. Pure SVG text, no plotting dependency.

use crate::inference::ConfidenceRegion;

const ROW_HEIGHT: f64 = 26.0;
const LABEL_WIDTH: f64 = 180.0;
const PLOT_WIDTH: f64 = 420.0;
const MARGIN: f64 = 16.0;

/// Render the regions (one voucher × metric) as an interval chart.
pub fn interval_chart(title: &str, regions: &[ConfidenceRegion]) -> String {
    let n = regions.len();
    let height = MARGIN * 2.0 + 24.0 + ROW_HEIGHT * n as f64;
    let width = MARGIN * 2.0 + LABEL_WIDTH + PLOT_WIDTH;

    let mut min = f64::INFINITY;
    let mut max = f64::NEG_INFINITY;
    for r in regions {
        min = min.min(r.combined.lo);
        max = max.max(r.combined.hi);
    }
    if !min.is_finite() || !max.is_finite() {
        min = 0.0;
        max = 1.0;
    }
    if max - min < 1e-12 {
        max = min + 1.0;
    }
    let pad = (max - min) * 0.05;
    let (min, max) = (min - pad, max + pad);
    let x = |v: f64| MARGIN + LABEL_WIDTH + (v - min) / (max - min) * PLOT_WIDTH;

    let mut svg = String::new();
    svg.push_str(&format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{width:.0}\" height=\"{height:.0}\" \
         viewBox=\"0 0 {width:.0} {height:.0}\" font-family=\"monospace\" font-size=\"12\">\n"
    ));
    svg.push_str(&format!(
        "<text x=\"{MARGIN}\" y=\"{}\" font-size=\"14\">{}</text>\n",
        MARGIN + 6.0,
        xml_escape(title)
    ));

    for (i, r) in regions.iter().enumerate() {
        let y = MARGIN + 24.0 + ROW_HEIGHT * (i as f64 + 0.5);
        svg.push_str(&format!(
            "<text x=\"{MARGIN}\" y=\"{:.1}\" dominant-baseline=\"middle\">{}</text>\n",
            y,
            xml_escape(r.group.as_str())
        ));
        // lower-bound interval above the row midline, upper-bound below
        let y_lower = y - 4.0;
        let y_upper = y + 4.0;
        svg.push_str(&format!(
            "<line x1=\"{:.1}\" y1=\"{y_lower:.1}\" x2=\"{:.1}\" y2=\"{y_lower:.1}\" stroke=\"#1f77b4\" stroke-width=\"3\"/>\n",
            x(r.ci_lower.lo),
            x(r.ci_lower.hi)
        ));
        svg.push_str(&format!(
            "<line x1=\"{:.1}\" y1=\"{y_upper:.1}\" x2=\"{:.1}\" y2=\"{y_upper:.1}\" stroke=\"#d62728\" stroke-width=\"3\"/>\n",
            x(r.ci_upper.lo),
            x(r.ci_upper.hi)
        ));
        svg.push_str(&format!(
            "<circle cx=\"{:.1}\" cy=\"{y:.1}\" r=\"3\" fill=\"#2c2c2c\"/>\n",
            x(r.point)
        ));
    }
    svg.push_str("</svg>\n");
    svg
}

fn xml_escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}
