//! Serializable run records and their human-readable rendering.

use std::fmt::Write as _;

use nullform_core::diagnostics::DiagnosticsTable;
use nullform_core::linmodel::NestedFTestResult;
use nullform_core::montecarlo::{Scenario, SimConfig, SimOutcome};
use nullform_core::proportion::ProportionTestResult;
use nullform_core::ttest::TTestResult;
use nullform_core::DecisionPair;
use serde::{Deserialize, Serialize};

use crate::dataset::Provenance;

pub const TOOL_VERSION: &str = concat!(env!("CARGO_PKG_NAME"), " ", env!("CARGO_PKG_VERSION"));

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AnalysisReport {
    /// Arguments after the program name.
    pub command: Vec<String>,
    pub tool_version: String,
    pub input: Option<Provenance>,
    pub alpha: f64,
    pub analysis: Analysis,
}

/// Critical values of the two forms at the report's `alpha`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Critical {
    pub traditional: f64,
    pub null_form: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Gap {
    pub index: usize,
    pub label: String,
    pub gap: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KsCheck {
    pub statistic: f64,
    pub critical_1pct: f64,
    pub replicates: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Analysis {
    TTest {
        column: String,
        result: TTestResult,
        /// Angle between `y - mu0` and the ones vector; absent when `y = mu0`.
        theta: Option<f64>,
        critical: Critical,
        decision: DecisionPair,
    },
    Proportion {
        result: ProportionTestResult,
        decision: DecisionPair,
    },
    FTest {
        response: String,
        reduced_columns: Vec<String>,
        full_columns: Vec<String>,
        result: NestedFTestResult,
        theta: f64,
        critical: Critical,
        decision: DecisionPair,
    },
    Outliers {
        response: String,
        columns: Vec<String>,
        labels: Vec<String>,
        table: DiagnosticsTable,
        /// Rows with unadjusted outlier p-value below `alpha`.
        flagged: Vec<usize>,
        gaps: Vec<Gap>,
    },
    Simulate {
        config: SimConfig,
        outcome: SimOutcome,
        null_law: Option<KsCheck>,
    },
    Plot {
        response: String,
        columns: Vec<String>,
        output: String,
        svg_sha256: String,
        points: usize,
        labeled: usize,
    },
}

impl AnalysisReport {
    /// Pretty JSON with keys sorted at every level.
    pub fn to_json(&self) -> serde_json::Result<String> {
        let value = serde_json::to_value(self)?;
        serde_json::to_string_pretty(&value)
    }

    pub fn from_json(s: &str) -> serde_json::Result<Self> {
        serde_json::from_str(s)
    }

    pub fn render_human(&self) -> String {
        let mut out = String::new();
        let w = &mut out;
        if let Some(p) = &self.input {
            let _ = writeln!(w, "input        {} ({} rows, {} dropped)", p.path, p.rows, p.dropped_rows);
        }
        let _ = writeln!(w, "alpha        {}", sig7(self.alpha));
        match &self.analysis {
            Analysis::TTest { column, result: r, theta, critical, decision } => {
                let _ = writeln!(w, "one-sample t test of '{column}', mu0 = {}", sig7(r.mu0));
                line(w, "n", r.n as f64);
                line(w, "mean", r.mean);
                line(w, "S^2", r.s2);
                line(w, "S0^2", r.s0_2);
                line(w, "SSTO", r.ssto);
                line(w, "SST", r.sst);
                line(w, "SSE", r.sse);
                line(w, "R", r.r_ratio);
                line(w, "cos^2 theta", r.cos2_theta);
                if let Some(t) = theta {
                    line(w, "theta", *t);
                }
                let _ = writeln!(w, "{:<12} {}", "status", kebab(&r.status));
                table2(
                    w,
                    ("T", "T0"),
                    &[
                        ("statistic", r.t, r.t0),
                        ("p-value", r.p_value_t, r.p_value_t0),
                        ("critical", critical.traditional, critical.null_form),
                    ],
                    decision,
                );
            }
            Analysis::Proportion { result: r, decision } => {
                let _ = writeln!(
                    w,
                    "proportion test, {} of {}, p0 = {}, {}",
                    r.successes,
                    r.n,
                    sig7(r.p0),
                    kebab(&r.alternative)
                );
                line(w, "p_hat", r.p_hat);
                let _ = writeln!(w, "{:<12} [{}, {}]", "Wald CI", sig7(r.ci_lower), sig7(r.ci_upper));
                if r.wald_degenerate {
                    let _ = writeln!(w, "{:<12} plug-in variance is zero", "note");
                }
                table2(
                    w,
                    ("z_wald", "z_null"),
                    &[("statistic", r.z_wald, r.z_null), ("p-value", r.p_value_wald, r.p_value_null)],
                    decision,
                );
            }
            Analysis::FTest { response, reduced_columns, full_columns, result: r, theta, critical, decision } => {
                let _ = writeln!(
                    w,
                    "nested F test of '{response}': [{}] within [{}]",
                    reduced_columns.join(", "),
                    full_columns.join(", ")
                );
                let _ = writeln!(w, "{:<12} n = {}, p1 = {}, p2 = {}", "dims", r.dims.n, r.dims.p1, r.dims.p2);
                line(w, "SSE1", r.sse1);
                line(w, "SS(2|1)", r.ss2given1);
                line(w, "SSE12", r.sse12);
                line(w, "cos^2 theta", r.cos2_theta);
                line(w, "theta", *theta);
                table2(
                    w,
                    ("F_trad", "F_null"),
                    &[
                        ("statistic", r.f_trad, r.f_null),
                        ("p-value", r.p_value_f, r.p_value_beta),
                        ("critical", critical.traditional, critical.null_form),
                    ],
                    decision,
                );
            }
            Analysis::Outliers { response, columns, labels, table, flagged, gaps } => {
                let _ = writeln!(w, "outlier tests for '{response}' on [{}], df = {}", columns.join(", "), table.df);
                let _ = writeln!(
                    w,
                    "{:>4} {:<16} {:>13} {:>13} {:>13} {:>13} {:>13} {:>13}",
                    "row", "label", "leverage", "residual", "standardized", "studentized", "p-value", "bonferroni"
                );
                for r in &table.rows {
                    let opt = |v: Option<f64>| v.map_or_else(|| "-".to_owned(), sig7);
                    let _ = writeln!(
                        w,
                        "{:>4} {:<16} {:>13} {:>13} {:>13} {:>13} {:>13} {:>13}{}",
                        r.index + 1,
                        labels[r.index],
                        sig7(r.leverage),
                        sig7(r.raw_residual),
                        opt(r.standardized),
                        opt(r.studentized),
                        opt(r.outlier_p_value),
                        opt(r.bonferroni_p_value),
                        if flagged.contains(&r.index) { "  *" } else { "" }
                    );
                }
                let _ = writeln!(w, "largest gaps |studentized - standardized|:");
                for g in gaps.iter().take(5) {
                    let _ = writeln!(w, "  {:<16} {}", g.label, sig7(g.gap));
                }
            }
            Analysis::Simulate { config, outcome, null_law } => {
                let _ = writeln!(
                    w,
                    "simulation {}, n = {}, effect = {}, seed = {}",
                    scenario_label(&config.scenario),
                    config.n,
                    sig7(config.effect),
                    config.seed
                );
                let _ = writeln!(w, "{:<14} {}", "replicates", outcome.replicates);
                let _ = writeln!(w, "{:<14} {}", "rate trad", sig7(outcome.reject_rate_trad));
                let _ = writeln!(w, "{:<14} {}", "rate null", sig7(outcome.reject_rate_null));
                let _ = writeln!(w, "{:<14} {}", "disagreements", outcome.disagreements);
                if let Some(ks) = null_law {
                    let _ = writeln!(
                        w,
                        "{:<14} {} (1% critical {})",
                        "KS distance",
                        sig7(ks.statistic),
                        sig7(ks.critical_1pct)
                    );
                }
            }
            Analysis::Plot { output, points, labeled, .. } => {
                let _ = writeln!(w, "wrote {output}: 4 panels, {points} points each, {labeled} labeled");
            }
        }
        out
    }
}

fn line(w: &mut String, name: &str, v: f64) {
    let _ = writeln!(w, "{name:<12} {}", sig7(v));
}

fn table2(w: &mut String, heads: (&str, &str), rows: &[(&str, f64, f64)], d: &DecisionPair) {
    let _ = writeln!(w, "{:<12} {:>14} {:>14}", "", heads.0, heads.1);
    for (name, a, b) in rows {
        let _ = writeln!(w, "{name:<12} {:>14} {:>14}", sig7(*a), sig7(*b));
    }
    let verdict = |r: bool| if r { "reject" } else { "retain" };
    let _ = writeln!(w, "{:<12} {:>14} {:>14}", "decision", verdict(d.reject_traditional), verdict(d.reject_null_form));
}

/// The serialized name of a unit enum variant.
fn kebab<T: Serialize>(v: &T) -> String {
    match serde_json::to_value(v) {
        Ok(serde_json::Value::String(s)) => s,
        _ => String::from("?"),
    }
}

fn scenario_label(s: &Scenario) -> String {
    match *s {
        Scenario::OneSampleT => "one-sample t".into(),
        Scenario::NestedF { p1, p2 } => format!("nested F (p1 = {p1}, p2 = {p2})"),
        Scenario::Proportion { p0 } => format!("proportion (p0 = {})", sig7(p0)),
    }
}

/// Seven significant digits, switching to exponent form outside
/// `[1e-4, 1e7)`.
pub fn sig7(v: f64) -> String {
    if v == 0.0 {
        return "0".into();
    }
    if !v.is_finite() {
        return format!("{v}");
    }
    let sci = format!("{v:.6e}");
    let (mantissa, exp) = sci.split_once('e').unwrap_or((&sci, "0"));
    let exp: i32 = exp.parse().unwrap_or(0);
    if (-4..7).contains(&exp) {
        trim_zeros(format!("{:.*}", (6 - exp) as usize, v))
    } else {
        format!("{}e{exp}", trim_zeros(mantissa.to_owned()))
    }
}

fn trim_zeros(s: String) -> String {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_owned()
    } else {
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seven_digits() {
        assert_eq!(sig7(3.464101615137754), "3.464102");
        assert_eq!(sig7(0.07418011102528389), "0.07418011");
        assert_eq!(sig7(7.0), "7");
        assert_eq!(sig7(-1.6035674514745464), "-1.603567");
        assert_eq!(sig7(1234567.89), "1234568");
        assert_eq!(sig7(9.9999999), "10");
        assert_eq!(sig7(1.5e-9), "1.5e-9");
        assert_eq!(sig7(f64::INFINITY), "inf");
        assert_eq!(sig7(0.0), "0");
    }
}
