//! Hand-written SVG residual plots.
//!
//! One document, a 2x2 grid of 600x450 panels: standardized and studentized
//! residuals against fitted values on top, their squares (`F_null`,
//! `F_trad`) below. All panels share the x range. Observations whose
//! outlier p-value falls below `alpha` get a distinct marker and a label.
//! Output depends only on the inputs, byte for byte.

use std::fmt::Write;

use crate::diagnostics::{DiagnosticRow, DiagnosticsTable};
use crate::error::Result;
use crate::linmodel::{Dims, FCriticalValues};

pub const PANEL_WIDTH: f64 = 600.0;
pub const PANEL_HEIGHT: f64 = 450.0;
pub const MARGIN: f64 = 50.0;
const TICKS: usize = 10;

#[derive(Clone, Copy)]
enum Quantity {
    Standardized,
    Studentized,
    FNull,
    FTrad,
}

impl Quantity {
    fn title(self) -> &'static str {
        match self {
            Quantity::Standardized => "Standardized residuals",
            Quantity::Studentized => "Studentized residuals",
            Quantity::FNull => "F_null (squared standardized)",
            Quantity::FTrad => "F_trad (squared studentized)",
        }
    }

    fn value(self, r: &DiagnosticRow) -> Option<f64> {
        match self {
            Quantity::Standardized => r.standardized,
            Quantity::Studentized => r.studentized,
            Quantity::FNull => r.f_null,
            Quantity::FTrad => r.f_trad,
        }
        .filter(|v| v.is_finite())
    }

    fn squared(self) -> bool {
        matches!(self, Quantity::FNull | Quantity::FTrad)
    }
}

struct Axis {
    lo: f64,
    hi: f64,
}

impl Axis {
    fn new(values: impl Iterator<Item = f64>, include: &[f64]) -> Self {
        let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
        for v in values.chain(include.iter().copied()) {
            lo = lo.min(v);
            hi = hi.max(v);
        }
        if !lo.is_finite() || !hi.is_finite() {
            return Axis { lo: -1.0, hi: 1.0 };
        }
        if hi - lo <= f64::EPSILON * hi.abs().max(lo.abs()).max(1.0) {
            return Axis { lo: lo - 1.0, hi: hi + 1.0 };
        }
        let pad = 0.05 * (hi - lo);
        Axis { lo: lo - pad, hi: hi + pad }
    }

    fn step(&self) -> f64 {
        (self.hi - self.lo) / TICKS as f64
    }

    fn scale(&self, v: f64, from: f64, to: f64) -> f64 {
        from + (v - self.lo) / (self.hi - self.lo) * (to - from)
    }
}

fn tick_label(v: f64, step: f64) -> String {
    let decimals = (2 - step.abs().log10().floor() as i32).clamp(0, 6) as usize;
    let s = format!("{v:.decimals$}");
    // avoid "-0.00"
    if s.trim_start_matches('-').chars().all(|c| c == '0' || c == '.') {
        s.trim_start_matches('-').to_string()
    } else {
        s
    }
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;").replace('"', "&quot;")
}

/// Reference lines drawn in each panel: the size-`alpha` critical values.
fn critical_lines(table: &DiagnosticsTable, alpha: f64, q: Quantity) -> Vec<f64> {
    let dims = Dims { n: table.n, p1: table.p1, p2: 1 };
    let Ok(cv) = FCriticalValues::new(alpha, dims) else {
        return Vec::new();
    };
    match q {
        Quantity::Standardized => vec![-cv.f_null.sqrt(), cv.f_null.sqrt()],
        Quantity::Studentized => vec![-cv.f_trad.sqrt(), cv.f_trad.sqrt()],
        Quantity::FNull => vec![cv.f_null],
        Quantity::FTrad => vec![cv.f_trad],
    }
}

/// Renders the four residual panels. `labels[i]` names observation `i`;
/// missing labels fall back to the 1-based row number.
pub fn emit_residual_plots(table: &DiagnosticsTable, labels: &[String], alpha: f64) -> Result<String> {
    let total_w = 2.0 * PANEL_WIDTH;
    let total_h = 2.0 * PANEL_HEIGHT;
    let mut svg = String::new();
    let _ = writeln!(svg, r#"<?xml version="1.0" encoding="UTF-8"?>"#);
    let _ = writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{total_w}" height="{total_h}" viewBox="0 0 {total_w} {total_h}" font-family="sans-serif" font-size="11">"#
    );
    let _ = writeln!(svg, r#"<rect x="0" y="0" width="{total_w}" height="{total_h}" fill="white"/>"#);

    let x_axis = Axis::new(table.fitted.iter().copied().filter(|v| v.is_finite()), &[]);
    let quantities = [Quantity::Standardized, Quantity::Studentized, Quantity::FNull, Quantity::FTrad];
    for (k, q) in quantities.into_iter().enumerate() {
        let ox = (k % 2) as f64 * PANEL_WIDTH;
        let oy = (k / 2) as f64 * PANEL_HEIGHT;
        panel(&mut svg, table, labels, alpha, q, &x_axis, ox, oy);
    }
    svg.push_str("</svg>\n");
    Ok(svg)
}

#[allow(clippy::too_many_arguments)]
fn panel(
    svg: &mut String,
    table: &DiagnosticsTable,
    labels: &[String],
    alpha: f64,
    q: Quantity,
    x_axis: &Axis,
    ox: f64,
    oy: f64,
) {
    let (left, right) = (ox + MARGIN, ox + PANEL_WIDTH - MARGIN);
    let (top, bottom) = (oy + MARGIN, oy + PANEL_HEIGHT - MARGIN);
    let crit = critical_lines(table, alpha, q);
    let mut include = vec![0.0];
    include.extend(crit.iter().copied());
    let y_axis = Axis::new(table.rows.iter().filter_map(|r| q.value(r)), &include);
    let y_axis = if q.squared() { Axis { lo: y_axis.lo.max(0.0), ..y_axis } } else { y_axis };
    let px = |v: f64| x_axis.scale(v, left, right);
    let py = |v: f64| y_axis.scale(v, bottom, top);

    let _ = writeln!(svg, r#"<g class="panel">"#);
    let _ = writeln!(
        svg,
        r#"<text x="{:.2}" y="{:.2}" text-anchor="middle" font-size="13">{}</text>"#,
        (left + right) / 2.0,
        oy + MARGIN / 2.0,
        q.title()
    );
    let _ = writeln!(
        svg,
        r##"<rect x="{left:.2}" y="{top:.2}" width="{:.2}" height="{:.2}" fill="none" stroke="#333"/>"##,
        right - left,
        bottom - top
    );

    for i in 0..=TICKS {
        let xv = x_axis.lo + i as f64 * x_axis.step();
        let x = px(xv);
        let _ = writeln!(
            svg,
            r##"<line x1="{x:.2}" y1="{bottom:.2}" x2="{x:.2}" y2="{:.2}" stroke="#333"/><text x="{x:.2}" y="{:.2}" text-anchor="middle" font-size="9">{}</text>"##,
            bottom + 4.0,
            bottom + 15.0,
            tick_label(xv, x_axis.step())
        );
        let yv = y_axis.lo + i as f64 * y_axis.step();
        let y = py(yv);
        let _ = writeln!(
            svg,
            r##"<line x1="{:.2}" y1="{y:.2}" x2="{left:.2}" y2="{y:.2}" stroke="#333"/><text x="{:.2}" y="{:.2}" text-anchor="end" font-size="9">{}</text>"##,
            left - 4.0,
            left - 6.0,
            y + 3.0,
            tick_label(yv, y_axis.step())
        );
    }
    let _ = writeln!(
        svg,
        r#"<text x="{:.2}" y="{:.2}" text-anchor="middle">Fitted values</text>"#,
        (left + right) / 2.0,
        bottom + 32.0
    );

    let zero = py(0.0);
    let _ = writeln!(
        svg,
        r##"<line x1="{left:.2}" y1="{zero:.2}" x2="{right:.2}" y2="{zero:.2}" stroke="#999"/>"##
    );
    for c in &crit {
        let y = py(*c);
        let _ = writeln!(
            svg,
            r##"<line class="critical" x1="{left:.2}" y1="{y:.2}" x2="{right:.2}" y2="{y:.2}" stroke="#c44" stroke-dasharray="4 3"/>"##
        );
    }

    for row in &table.rows {
        let (Some(v), Some(&f)) = (q.value(row), table.fitted.get(row.index)) else {
            continue;
        };
        let (x, y) = (px(f), py(v));
        let outlier = row.outlier_p_value.is_some_and(|p| p < alpha);
        if outlier {
            let _ = writeln!(
                svg,
                r##"<path class="outlier" d="M{x:.2} {:.2} L{:.2} {y:.2} L{x:.2} {:.2} L{:.2} {y:.2} Z" fill="#d62728"/>"##,
                y - 5.0,
                x + 5.0,
                y + 5.0,
                x - 5.0
            );
            let name = labels.get(row.index).cloned().unwrap_or_else(|| (row.index + 1).to_string());
            let _ = writeln!(
                svg,
                r##"<text class="label" x="{:.2}" y="{:.2}" fill="#d62728">{}</text>"##,
                x + 7.0,
                y - 6.0,
                escape(&name)
            );
        } else {
            let _ = writeln!(
                svg,
                r##"<circle class="point" cx="{x:.2}" cy="{y:.2}" r="3" fill="#1f77b4"/>"##
            );
        }
    }
    let _ = writeln!(svg, "</g>");
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagnostics::residual_diagnostics;
    use crate::linmodel::DesignMatrix;
    use crate::ttest::Sample;

    fn count(svg: &str, needle: &str) -> usize {
        svg.matches(needle).count()
    }

    #[test]
    fn four_panels_with_one_labelled_outlier() {
        let xs: Vec<f64> = (0..12).map(|i| i as f64).collect();
        let mut ys: Vec<f64> = xs.iter().map(|x| 1.0 + 0.5 * x + 0.1 * (x * 1.7).sin()).collect();
        ys[6] += 5.0;
        let x = DesignMatrix::intercept(12).with_column("x", &xs).unwrap();
        let t = residual_diagnostics(&x, &Sample::new(ys).unwrap()).unwrap();
        let labels: Vec<String> = (0..12).map(|i| format!("obs<{i}>")).collect();
        let svg = emit_residual_plots(&t, &labels, 0.05).unwrap();
        assert_eq!(count(&svg, r#"<g class="panel">"#), 4);
        assert_eq!(count(&svg, r#"class="outlier""#), 4);
        assert_eq!(count(&svg, r#"class="point""#), 44);
        assert_eq!(count(&svg, "obs&lt;6&gt;"), 4);
        assert_eq!(svg, emit_residual_plots(&t, &labels, 0.05).unwrap());
    }

    #[test]
    fn zero_residuals_have_no_labels() {
        let xs = [1.0, 2.0, 3.0, 4.0, 5.0];
        let ys: Vec<f64> = xs.iter().map(|x| 2.0 * x).collect();
        let x = DesignMatrix::intercept(5).with_column("x", &xs).unwrap();
        let t = residual_diagnostics(&x, &Sample::new(ys).unwrap()).unwrap();
        let svg = emit_residual_plots(&t, &[], 0.05).unwrap();
        assert_eq!(count(&svg, r#"class="label""#), 0);
        assert_eq!(count(&svg, r#"class="point""#), 20);
    }

    #[test]
    fn single_observation_table() {
        let t = DiagnosticsTable {
            n: 3,
            p1: 1,
            df: 1,
            fitted: vec![2.0],
            rows: vec![DiagnosticRow {
                index: 0,
                leverage: 0.3,
                raw_residual: 0.4,
                standardized: Some(0.5),
                studentized: Some(0.4),
                f_null: Some(0.25),
                f_trad: Some(0.16),
                outlier_p_value: Some(0.7),
                bonferroni_p_value: Some(1.0),
                gap: Some(0.1),
                full_leverage: false,
            }],
        };
        let svg = emit_residual_plots(&t, &[], 0.05).unwrap();
        assert!(svg.starts_with("<?xml"));
        assert!(svg.trim_end().ends_with("</svg>"));
        assert_eq!(count(&svg, r#"class="point""#), 4);
    }

    #[test]
    fn tick_labels_never_show_negative_zero() {
        assert_eq!(tick_label(-1e-17, 0.1), "0.000");
        assert_eq!(tick_label(12.5, 1.0), "12.50");
    }
}
