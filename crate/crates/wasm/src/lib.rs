//! Browser bindings. Each exported function returns a JSON or SVG string;
//! errors become JavaScript exceptions carrying the message.

use std::fmt::Write as _;

use nullform_core::diagnostics::residual_diagnostics;
use nullform_core::linmodel::{self, DesignMatrix, Dims, FCriticalValues};
use nullform_core::plot::emit_residual_plots;
use nullform_core::specfun;
use nullform_core::ttest::{self, TCriticalValues};
use nullform_core::Sample;
use serde::Serialize;
use wasm_bindgen::prelude::*;

/// Numbers separated by commas, semicolons or whitespace.
pub fn parse_numbers(text: &str) -> Result<Vec<f64>, String> {
    text.split(|c: char| c == ',' || c == ';' || c.is_whitespace())
        .filter(|s| !s.is_empty())
        .map(|s| s.parse::<f64>().map_err(|_| format!("'{s}' is not a number")))
        .collect()
}

#[derive(Serialize)]
struct TTestView {
    result: ttest::TTestResult,
    critical_t: f64,
    critical_t0: f64,
    reject_t: bool,
    reject_t0: bool,
    curve_svg: String,
}

pub fn t_test_report(values: &str, mu0: f64, alpha: f64) -> Result<String, String> {
    let y = Sample::new(parse_numbers(values)?).map_err(|e| e.to_string())?;
    let n = y.len();
    let result = ttest::t_test(&y, mu0).map_err(|e| e.to_string())?;
    let cv = TCriticalValues::new(alpha, n).map_err(|e| e.to_string())?;
    let d = cv.decide(&result);
    let curve_svg = mapping_curve_svg(n, result.t0, cv.t0);
    let view = TTestView {
        critical_t: cv.t,
        critical_t0: cv.t0,
        reject_t: d.reject_traditional,
        reject_t0: d.reject_null_form,
        result,
        curve_svg,
    };
    serde_json::to_string(&view).map_err(|e| e.to_string())
}

/// `T` against `T0` over `(-sqrt(n), sqrt(n))`, with the observed `T0` and the
/// critical band marked. The vertical axis is clipped at `|T| = 10`.
fn mapping_curve_svg(n: usize, t0: f64, c0: f64) -> String {
    const W: f64 = 420.0;
    const H: f64 = 300.0;
    const M: f64 = 40.0;
    const T_MAX: f64 = 10.0;
    let root = (n as f64).sqrt();
    let px = |v: f64| M + (v + root) / (2.0 * root) * (W - 2.0 * M);
    let py = |v: f64| H - M - (v.clamp(-T_MAX, T_MAX) + T_MAX) / (2.0 * T_MAX) * (H - 2.0 * M);

    let mut s = String::new();
    let _ = write!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{W}" height="{H}" viewBox="0 0 {W} {H}" font-family="sans-serif" font-size="11">"#
    );
    let _ = write!(s, r##"<rect x="{M}" y="{M}" width="{}" height="{}" fill="none" stroke="#333"/>"##, W - 2.0 * M, H - 2.0 * M);
    for c in [-c0, c0] {
        let x = px(c);
        let _ = write!(s, r##"<line x1="{x:.2}" y1="{M}" x2="{x:.2}" y2="{}" stroke="#c44" stroke-dasharray="4 3"/>"##, H - M);
    }
    let mut d = String::new();
    let steps = 400;
    for k in 1..steps {
        let v = -root + 2.0 * root * k as f64 / steps as f64;
        if let Ok(t) = ttest::map_t0_to_t(v, n) {
            let _ = write!(d, "{}{:.2} {:.2} ", if d.is_empty() { 'M' } else { 'L' }, px(v), py(t));
        }
    }
    let _ = write!(s, r##"<path d="{}" fill="none" stroke="#1f77b4" stroke-width="1.5"/>"##, d.trim_end());
    if t0.abs() < root {
        if let Ok(t) = ttest::map_t0_to_t(t0, n) {
            let _ = write!(s, r##"<circle cx="{:.2}" cy="{:.2}" r="4" fill="#d62728"/>"##, px(t0), py(t));
        }
    }
    let _ = write!(s, r#"<text x="{}" y="{}" text-anchor="middle">T0</text>"#, W / 2.0, H - 10.0);
    let _ = write!(s, r#"<text x="12" y="{}" text-anchor="middle" transform="rotate(-90 12 {})">T</text>"#, H / 2.0, H / 2.0);
    let _ = write!(s, r#"<text x="{M}" y="{}">-{root:.3}</text>"#, H - M + 14.0);
    let _ = write!(s, r#"<text x="{}" y="{}" text-anchor="end">{root:.3}</text>"#, W - M, H - M + 14.0);
    s.push_str("</svg>");
    s
}

/// Labels, x values and y values.
pub type XyColumns = (Vec<String>, Vec<f64>, Vec<f64>);

/// Rows of `x,y` or `label,x,y`; a leading header row is skipped.
pub fn parse_xy(text: &str) -> Result<XyColumns, String> {
    let (mut labels, mut xs, mut ys) = (Vec::new(), Vec::new(), Vec::new());
    for (k, line) in text.lines().enumerate() {
        let cells: Vec<&str> = line.split([',', ';', '\t']).map(str::trim).collect();
        if cells.iter().all(|c| c.is_empty()) {
            continue;
        }
        let (label, nums) = match cells.len() {
            2 => ((xs.len() + 1).to_string(), &cells[..]),
            3 => (cells[0].to_owned(), &cells[1..]),
            _ => return Err(format!("line {}: expected x,y or label,x,y", k + 1)),
        };
        match (nums[0].parse::<f64>(), nums[1].parse::<f64>()) {
            (Ok(x), Ok(y)) => {
                labels.push(label);
                xs.push(x);
                ys.push(y);
            }
            _ if k == 0 => continue,
            _ => return Err(format!("line {}: '{}' is not numeric", k + 1, nums.join(","))),
        }
    }
    Ok((labels, xs, ys))
}

pub fn residual_plot(text: &str, alpha: f64) -> Result<String, String> {
    let (labels, xs, ys) = parse_xy(text)?;
    let x = DesignMatrix::intercept(xs.len()).with_column("x", &xs).map_err(|e| e.to_string())?;
    let y = Sample::new(ys).map_err(|e| e.to_string())?;
    let table = residual_diagnostics(&x, &y).map_err(|e| e.to_string())?;
    emit_residual_plots(&table, &labels, alpha).map_err(|e| e.to_string())
}

#[derive(Serialize)]
struct FMapView {
    f_null: f64,
    f_trad: f64,
    p_value_f: f64,
    p_value_beta: f64,
    critical_f_null: f64,
    critical_f_trad: f64,
    reject: bool,
}

pub fn f_map_report(f_null: f64, n: usize, p1: usize, p2: usize, alpha: f64) -> Result<String, String> {
    let dims = Dims { n, p1, p2 };
    let f_trad = linmodel::map_fnull_to_ftrad(f_null, n, p1, p2).map_err(|e| e.to_string())?;
    let p_value_f = specfun::sf(&linmodel::f_trad_law(dims), f_trad).map_err(|e| e.to_string())?;
    let u = p2 as f64 * f_null / (n - p1) as f64;
    let p_value_beta = specfun::sf(&linmodel::f_null_law(dims), u).map_err(|e| e.to_string())?;
    let cv = FCriticalValues::new(alpha, dims).map_err(|e| e.to_string())?;
    let view = FMapView {
        f_null,
        f_trad,
        p_value_f,
        p_value_beta,
        critical_f_null: cv.f_null,
        critical_f_trad: cv.f_trad,
        reject: f_null >= cv.f_null,
    };
    serde_json::to_string(&view).map_err(|e| e.to_string())
}

fn js(r: Result<String, String>) -> Result<String, JsError> {
    r.map_err(|e| JsError::new(&e))
}

/// One-sample t test in both forms; JSON with the mapping curve as SVG.
#[wasm_bindgen(js_name = tTest)]
pub fn t_test(values: &str, mu0: f64, alpha: f64) -> Result<String, JsError> {
    js(t_test_report(values, mu0, alpha))
}

/// Four-panel residual plot for a simple regression of y on x.
#[wasm_bindgen(js_name = residualPlot)]
pub fn residual_plot_svg(csv: &str, alpha: f64) -> Result<String, JsError> {
    js(residual_plot(csv, alpha))
}

/// `F_null -> F_trad` with the p-value from each law.
#[wasm_bindgen(js_name = fMap)]
pub fn f_map(f_null: f64, n: usize, p1: usize, p2: usize, alpha: f64) -> Result<String, JsError> {
    js(f_map_report(f_null, n, p1, p2, alpha))
}
