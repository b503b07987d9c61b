//! Residual diagnostics by indicator augmentation.
//!
//! Observation `i` is tested as an outlier by adding the indicator column
//! `e_i` to the design and running the nested F-test with `p2 = 1`. The
//! signed square root of `F_null` is the standardized residual, the signed
//! square root of `F_trad` the studentized residual.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linmodel::{self, DesignMatrix, Qr};
use crate::specfun::{self, DistParams};
use crate::ttest::Sample;

/// Leverage within this distance of 1 marks a row whose residual is
/// determined by its own fit.
pub const FULL_LEVERAGE_TOL: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DiagnosticRow {
    pub index: usize,
    pub leverage: f64,
    pub raw_residual: f64,
    /// `None` on full-leverage rows.
    #[serde(with = "crate::real::option")]
    pub standardized: Option<f64>,
    #[serde(with = "crate::real::option")]
    pub studentized: Option<f64>,
    #[serde(with = "crate::real::option")]
    pub f_null: Option<f64>,
    #[serde(with = "crate::real::option")]
    pub f_trad: Option<f64>,
    /// Two-sided Student t tail at `|studentized|`, unadjusted.
    #[serde(with = "crate::real::option")]
    pub outlier_p_value: Option<f64>,
    /// `min(1, n * outlier_p_value)`.
    #[serde(with = "crate::real::option")]
    pub bonferroni_p_value: Option<f64>,
    /// `|studentized - standardized|`.
    #[serde(with = "crate::real::option")]
    pub gap: Option<f64>,
    pub full_leverage: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DiagnosticsTable {
    pub n: usize,
    /// Number of columns in the original (reduced) design.
    pub p1: usize,
    /// Degrees of freedom of the outlier t test, `n - p1 - 1`.
    pub df: usize,
    pub fitted: Vec<f64>,
    pub rows: Vec<DiagnosticRow>,
}

impl DiagnosticsTable {
    /// Rows whose unadjusted outlier p-value is below `alpha`.
    pub fn outliers(&self, alpha: f64) -> impl Iterator<Item = &DiagnosticRow> {
        self.rows.iter().filter(move |r| r.outlier_p_value.is_some_and(|p| p < alpha))
    }
}

pub fn residual_diagnostics(x: &DesignMatrix, y: &Sample) -> Result<DiagnosticsTable> {
    let (n, p1) = (x.nrows(), x.ncols());
    if y.len() != n {
        return Err(Error::domain(format!("design has {n} rows but y has {} values", y.len())));
    }
    if n <= p1 + 1 {
        return Err(Error::domain(format!(
            "outlier tests need n > p + 1 (n = {n}, p = {p1})"
        )));
    }
    let reduced = linmodel::fit(x, y)?;
    let leverage = Qr::decompose(x)?.leverage();
    let df = n - p1 - 1;
    let yy: f64 = y.values().iter().map(|v| v * v).sum();
    // y lies in the column space: every residual is zero
    let exact_fit = reduced.sse <= 1e-28 * yy;
    let t_law = DistParams::student_t(df as f64);

    let row = |i: usize| -> Result<DiagnosticRow> {
        let e = reduced.residuals[i];
        let h = leverage[i];
        let mut r = DiagnosticRow {
            index: i,
            leverage: h,
            raw_residual: e,
            standardized: None,
            studentized: None,
            f_null: None,
            f_trad: None,
            outlier_p_value: None,
            bonferroni_p_value: None,
            gap: None,
            full_leverage: false,
        };
        if 1.0 - h <= FULL_LEVERAGE_TOL {
            r.full_leverage = true;
            return Ok(r);
        }
        if exact_fit {
            r.standardized = Some(0.0);
            r.studentized = Some(0.0);
            r.f_null = Some(0.0);
            r.f_trad = Some(0.0);
            r.outlier_p_value = Some(1.0);
            r.bonferroni_p_value = Some(1.0);
            r.gap = Some(0.0);
            return Ok(r);
        }
        let mut indicator = vec![0.0; n];
        indicator[i] = 1.0;
        let augmented = x.clone().with_column(format!("indicator[{i}]"), &indicator)?;
        let sse12 = match linmodel::fit(&augmented, y) {
            Ok(f) => f.sse,
            Err(Error::RankDeficient { .. }) => {
                r.full_leverage = true;
                return Ok(r);
            }
            Err(err) => return Err(err),
        };
        let test = linmodel::nested_from_sse(n, p1, 1, reduced.sse, sse12)?;
        let sign = if e > 0.0 {
            1.0
        } else if e < 0.0 {
            -1.0
        } else {
            0.0
        };
        let standardized = sign * test.f_null.sqrt();
        let studentized = sign * test.f_trad.sqrt();
        let p = if studentized.is_infinite() {
            0.0
        } else {
            (2.0 * specfun::sf(&t_law, studentized.abs())?).min(1.0)
        };
        r.standardized = Some(standardized);
        r.studentized = Some(studentized);
        r.f_null = Some(test.f_null);
        r.f_trad = Some(test.f_trad);
        r.outlier_p_value = Some(p);
        r.bonferroni_p_value = Some((p * n as f64).min(1.0));
        r.gap = Some((studentized - standardized).abs());
        Ok(r)
    };

    #[cfg(feature = "parallel")]
    let rows: Result<Vec<_>> = {
        use rayon::prelude::*;
        (0..n).into_par_iter().map(row).collect()
    };
    #[cfg(not(feature = "parallel"))]
    let rows: Result<Vec<_>> = (0..n).map(row).collect();

    Ok(DiagnosticsTable { n, p1, df, fitted: reduced.fitted, rows: rows? })
}

/// Signed square-root form of the `F_null -> F_trad` map with `p2 = 1`:
/// `t = sign(r) sqrt((n - p1 - 1) r^2 / (n - p1 - r^2))`.
pub fn map_standardized_to_studentized(r: f64, n: usize, p1: usize) -> Result<f64> {
    if n <= p1 + 1 {
        return Err(Error::domain(format!("invalid dimensions n = {n}, p1 = {p1}")));
    }
    let m = (n - p1) as f64;
    if !(r * r < m) {
        return Err(Error::domain(format!("|r| = {} must be below sqrt(n - p1) = {}", r.abs(), m.sqrt())));
    }
    if r == 0.0 {
        return Ok(0.0);
    }
    let r2 = r * r;
    Ok(r.signum() * ((m - 1.0) * r2 / (m - r2)).sqrt())
}

/// Observations ranked by `|studentized - standardized|`, largest first.
/// Ties keep observation order; rows without a gap are omitted.
pub fn residual_gaps(table: &DiagnosticsTable) -> Vec<(usize, f64)> {
    let mut gaps: Vec<(usize, f64)> =
        table.rows.iter().filter_map(|r| r.gap.map(|g| (r.index, g))).collect();
    gaps.sort_by(|a, b| b.1.total_cmp(&a.1));
    gaps
}
