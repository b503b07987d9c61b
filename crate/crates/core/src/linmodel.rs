//! Gaussian linear models and the nested-model F-test in both forms.
//!
//! Fits go through a Householder QR factorization; projection matrices are
//! never formed. For a design `X = [X1 | X2]` with `p1` and `p2` columns,
//! the traditional statistic divides the reduction `SS(2|1)` by the full
//! model error `SSE12`, the null form divides it by the reduced model error
//! `SSE1 = SS(2|1) + SSE12`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::specfun::{self, DistParams};
use crate::ttest::{check_alpha, Sample};
use crate::DecisionPair;

/// Relative threshold on the diagonal of `R` below which a column is
/// treated as linearly dependent on the preceding ones.
pub const RANK_TOL: f64 = 1e-10;

/// Column-major design matrix with labelled columns.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DesignMatrix {
    nrows: usize,
    labels: Vec<String>,
    data: Vec<f64>,
}

impl DesignMatrix {
    pub fn from_columns(labels: Vec<String>, columns: Vec<Vec<f64>>) -> Result<Self> {
        if labels.len() != columns.len() {
            return Err(Error::domain("number of labels differs from number of columns"));
        }
        let nrows = columns.first().map_or(0, Vec::len);
        let mut data = Vec::with_capacity(nrows * columns.len());
        for (j, col) in columns.iter().enumerate() {
            if col.len() != nrows {
                return Err(Error::domain(format!(
                    "column {} has {} rows, expected {nrows}",
                    labels[j],
                    col.len()
                )));
            }
            if col.iter().any(|v| !v.is_finite()) {
                return Err(Error::domain(format!("column {} has non-finite entries", labels[j])));
            }
            data.extend_from_slice(col);
        }
        Ok(Self { nrows, labels, data })
    }

    /// A single column of ones.
    pub fn intercept(n: usize) -> Self {
        Self { nrows: n, labels: vec!["(intercept)".into()], data: vec![1.0; n] }
    }

    /// Appends a column.
    pub fn with_column(mut self, label: impl Into<String>, column: &[f64]) -> Result<Self> {
        if self.ncols() > 0 && column.len() != self.nrows {
            return Err(Error::domain("appended column has the wrong length"));
        }
        if column.iter().any(|v| !v.is_finite()) {
            return Err(Error::domain("appended column has non-finite entries"));
        }
        if self.ncols() == 0 {
            self.nrows = column.len();
        }
        self.labels.push(label.into());
        self.data.extend_from_slice(column);
        Ok(self)
    }

    /// An `n x 0` design (the zero model).
    pub fn empty(n: usize) -> Self {
        Self { nrows: n, labels: Vec::new(), data: Vec::new() }
    }

    pub fn nrows(&self) -> usize {
        self.nrows
    }

    pub fn ncols(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn column(&self, j: usize) -> &[f64] {
        &self.data[j * self.nrows..(j + 1) * self.nrows]
    }

    /// The first `k` columns.
    pub fn prefix(&self, k: usize) -> DesignMatrix {
        let k = k.min(self.ncols());
        DesignMatrix {
            nrows: self.nrows,
            labels: self.labels[..k].to_vec(),
            data: self.data[..k * self.nrows].to_vec(),
        }
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[j * self.nrows + i]
    }
}

/// Householder QR of an `n x p` matrix, `p <= n`.
///
/// Reflector `k` is stored below the diagonal of column `k` with its
/// leading component in `vdiag[k]`; `R` sits on and above the diagonal.
#[derive(Debug, Clone)]
pub struct Qr {
    n: usize,
    p: usize,
    qr: Vec<f64>,
    vdiag: Vec<f64>,
    rdiag: Vec<f64>,
}

impl Qr {
    pub fn decompose(x: &DesignMatrix) -> Result<Self> {
        let (n, p) = (x.nrows(), x.ncols());
        if p > n {
            return Err(Error::domain(format!("design has {p} columns but only {n} rows")));
        }
        let mut a = x.data.clone();
        let mut vdiag = vec![0.0; p];
        let mut rdiag = vec![0.0; p];
        for k in 0..p {
            let ck = &mut a[k * n..(k + 1) * n];
            let nrm = norm(&ck[k..]);
            if nrm == 0.0 {
                return Err(Error::RankDeficient { index: k, label: x.labels[k].clone() });
            }
            // reflect ck[k..] onto -sign(ck[k]) * nrm * e1
            let alpha = if ck[k] > 0.0 { -nrm } else { nrm };
            ck[k] -= alpha;
            let vnorm = norm(&ck[k..]);
            for v in &mut ck[k..] {
                *v /= vnorm;
            }
            vdiag[k] = ck[k];
            rdiag[k] = alpha;
            let (head, tail) = a.split_at_mut((k + 1) * n);
            let v = &head[k * n + k..(k + 1) * n];
            for j in 0..p - k - 1 {
                let cj = &mut tail[j * n + k..(j + 1) * n];
                let d = 2.0 * dot(v, cj);
                for (c, vi) in cj.iter_mut().zip(v) {
                    *c -= d * vi;
                }
            }
            a[k * n + k] = alpha;
        }
        let largest = rdiag.iter().fold(0.0f64, |m, r| m.max(r.abs()));
        if let Some(k) = rdiag.iter().position(|r| r.abs() < RANK_TOL * largest) {
            return Err(Error::RankDeficient { index: k, label: x.labels[k].clone() });
        }
        Ok(Self { n, p, qr: a, vdiag, rdiag })
    }

    fn reflector(&self, k: usize) -> impl Iterator<Item = f64> + '_ {
        let col = &self.qr[k * self.n..(k + 1) * self.n];
        std::iter::once(self.vdiag[k]).chain(col[k + 1..].iter().copied())
    }

    fn apply_reflector(&self, k: usize, z: &mut [f64]) {
        let d: f64 = self.reflector(k).zip(&z[k..]).map(|(v, zi)| v * zi).sum();
        let d = 2.0 * d;
        for (zi, v) in z[k..].iter_mut().zip(self.reflector(k)) {
            *zi -= d * v;
        }
    }

    /// `Q^T z`.
    pub fn apply_qt(&self, z: &mut [f64]) {
        for k in 0..self.p {
            self.apply_reflector(k, z);
        }
    }

    /// `Q z`.
    pub fn apply_q(&self, z: &mut [f64]) {
        for k in (0..self.p).rev() {
            self.apply_reflector(k, z);
        }
    }

    /// Solves `R b = c[..p]` by back substitution.
    #[allow(clippy::needless_range_loop)]
    fn back_solve(&self, c: &[f64]) -> Vec<f64> {
        let mut b = c[..self.p].to_vec();
        for k in (0..self.p).rev() {
            let mut s = b[k];
            for j in k + 1..self.p {
                s -= self.qr[j * self.n + k] * b[j];
            }
            b[k] = s / self.rdiag[k];
        }
        b
    }

    /// Diagonal of the hat projection: squared row norms of the thin `Q`.
    pub fn leverage(&self) -> Vec<f64> {
        let mut h = vec![0.0; self.n];
        let mut e = vec![0.0; self.n];
        for j in 0..self.p {
            e.iter_mut().for_each(|v| *v = 0.0);
            e[j] = 1.0;
            self.apply_q(&mut e);
            for (hi, qi) in h.iter_mut().zip(&e) {
                *hi += qi * qi;
            }
        }
        h
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn norm(a: &[f64]) -> f64 {
    // scaled to avoid overflow on large entries
    let scale = a.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    if scale == 0.0 {
        return 0.0;
    }
    scale * a.iter().map(|v| (v / scale).powi(2)).sum::<f64>().sqrt()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FitResult {
    pub coefficients: Vec<f64>,
    pub fitted: Vec<f64>,
    pub residuals: Vec<f64>,
    pub sse: f64,
    pub df_resid: usize,
}

/// Least-squares fit of `y` on the columns of `x`.
///
/// A design with zero columns is the zero model: fitted values are 0 and
/// `sse = |y|^2`.
pub fn fit(x: &DesignMatrix, y: &Sample) -> Result<FitResult> {
    Ok(fit_with_qr(x, y)?.0)
}

fn fit_with_qr(x: &DesignMatrix, y: &Sample) -> Result<(FitResult, Qr)> {
    let (n, p) = (x.nrows(), x.ncols());
    if y.len() != n {
        return Err(Error::domain(format!("design has {n} rows but y has {} values", y.len())));
    }
    if p >= n {
        return Err(Error::domain(format!("need more observations ({n}) than predictors ({p})")));
    }
    let qr = Qr::decompose(x)?;
    let mut c = y.values().to_vec();
    qr.apply_qt(&mut c);
    let coefficients = qr.back_solve(&c);

    // residuals = Q [0; c2], fitted = Q [c1; 0]
    let mut residuals = c.clone();
    residuals[..p].iter_mut().for_each(|v| *v = 0.0);
    qr.apply_q(&mut residuals);
    let mut fitted = c;
    fitted[p..].iter_mut().for_each(|v| *v = 0.0);
    qr.apply_q(&mut fitted);

    let sse = residuals.iter().map(|r| r * r).sum();
    Ok((FitResult { coefficients, fitted, residuals, sse, df_resid: n - p }, qr))
}

/// A full design whose first `p1` columns form the reduced design.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NestedSpec {
    full: DesignMatrix,
    p1: usize,
}

impl NestedSpec {
    pub fn new(full: DesignMatrix, p1: usize) -> Result<Self> {
        let p = full.ncols();
        if p1 >= p {
            return Err(Error::domain(format!("tested block is empty: p1 = {p1}, p = {p}")));
        }
        if p >= full.nrows() {
            return Err(Error::domain(format!(
                "need more observations ({}) than predictors ({p})",
                full.nrows()
            )));
        }
        Ok(Self { full, p1 })
    }

    pub fn full(&self) -> &DesignMatrix {
        &self.full
    }

    pub fn reduced(&self) -> DesignMatrix {
        self.full.prefix(self.p1)
    }

    pub fn n(&self) -> usize {
        self.full.nrows()
    }

    pub fn p1(&self) -> usize {
        self.p1
    }

    pub fn p2(&self) -> usize {
        self.full.ncols() - self.p1
    }

    pub fn p(&self) -> usize {
        self.full.ncols()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Dims {
    pub n: usize,
    pub p1: usize,
    pub p2: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NestedFTestResult {
    pub sse1: f64,
    pub sse12: f64,
    pub ss2given1: f64,
    #[serde(with = "crate::real")]
    pub f_trad: f64,
    pub f_null: f64,
    pub p_value_f: f64,
    pub p_value_beta: f64,
    pub cos2_theta: f64,
    pub dims: Dims,
    /// The full model reproduces `y` exactly (`SSE12 = 0`).
    pub saturated: bool,
}

/// Null law of `p2 F_null / (n - p1)`.
pub fn f_null_law(dims: Dims) -> DistParams {
    let p = dims.p1 + dims.p2;
    DistParams::beta(0.5 * dims.p2 as f64, 0.5 * (dims.n - p) as f64)
}

/// Null law of `F_trad`.
pub fn f_trad_law(dims: Dims) -> DistParams {
    let p = dims.p1 + dims.p2;
    DistParams::fisher_f(dims.p2 as f64, (dims.n - p) as f64)
}

fn residual_ss(x: &DesignMatrix, y: &Sample) -> Result<f64> {
    if x.ncols() == 0 {
        return Ok(y.values().iter().map(|v| v * v).sum());
    }
    Ok(fit(x, y)?.sse)
}

pub fn nested_f_test(spec: &NestedSpec, y: &Sample) -> Result<NestedFTestResult> {
    let sse1 = residual_ss(&spec.reduced(), y)?;
    let sse12 = fit(spec.full(), y)?.sse;
    nested_from_sse(spec.n(), spec.p1(), spec.p2(), sse1, sse12)
}

/// Assembles the F-test from the two residual sums of squares.
pub(crate) fn nested_from_sse(n: usize, p1: usize, p2: usize, sse1: f64, sse12: f64) -> Result<NestedFTestResult> {
    let dims = Dims { n, p1, p2 };
    let p = p1 + p2;
    let (nf, p1f, p2f, pf) = (n as f64, p1 as f64, p2 as f64, p as f64);
    let ss2given1 = (sse1 - sse12).max(0.0);
    let base = NestedFTestResult {
        sse1,
        sse12,
        ss2given1,
        f_trad: 0.0,
        f_null: 0.0,
        p_value_f: 1.0,
        p_value_beta: 1.0,
        cos2_theta: 0.0,
        dims,
        saturated: false,
    };
    if sse1 == 0.0 {
        return Err(Error::degenerate("reduced model fits exactly (SSE1 = 0)"));
    }
    // SSE12 at rounding level relative to SSE1 is an exact fit
    if sse12 <= 1e-28 * sse1 {
        return Ok(NestedFTestResult {
            f_trad: f64::INFINITY,
            f_null: (nf - p1f) / p2f,
            p_value_f: 0.0,
            p_value_beta: 0.0,
            cos2_theta: 1.0,
            saturated: true,
            ..base
        });
    }
    let f_trad = (ss2given1 / p2f) / (sse12 / (nf - pf));
    let f_null = (ss2given1 / p2f) / (sse1 / (nf - p1f));
    let cos2_theta = ss2given1 / sse1;
    let p_value_f = specfun::sf(&f_trad_law(dims), f_trad)?;
    let p_value_beta = specfun::sf(&f_null_law(dims), p2f * f_null / (nf - p1f))?;
    Ok(NestedFTestResult { f_trad, f_null, p_value_f, p_value_beta, cos2_theta, ..base })
}

/// `F_trad = (n - p) F_null / (n - p1 - p2 F_null)` on `0 <= F_null < (n - p1) / p2`.
pub fn map_fnull_to_ftrad(f_null: f64, n: usize, p1: usize, p2: usize) -> Result<f64> {
    check_dims(n, p1, p2)?;
    let (nf, p1f, p2f) = (n as f64, p1 as f64, p2 as f64);
    let sup = (nf - p1f) / p2f;
    if !(f_null >= 0.0 && f_null < sup) {
        return Err(Error::domain(format!("F_null = {f_null} is outside [0, {sup})")));
    }
    Ok((nf - p1f - p2f) * f_null / (nf - p1f - p2f * f_null))
}

fn check_dims(n: usize, p1: usize, p2: usize) -> Result<()> {
    if p2 == 0 || n <= p1 + p2 {
        return Err(Error::domain(format!("invalid dimensions n = {n}, p1 = {p1}, p2 = {p2}")));
    }
    Ok(())
}

/// Critical values for both forms at level `alpha`, each from its own null law.
#[derive(Debug, Clone, Copy)]
pub struct FCriticalValues {
    pub f_trad: f64,
    pub f_null: f64,
}

impl FCriticalValues {
    pub fn new(alpha: f64, dims: Dims) -> Result<Self> {
        check_alpha(alpha)?;
        check_dims(dims.n, dims.p1, dims.p2)?;
        let f_trad = specfun::quantile(&f_trad_law(dims), 1.0 - alpha)?;
        let u = specfun::quantile(&f_null_law(dims), 1.0 - alpha)?;
        let f_null = u * (dims.n - dims.p1) as f64 / dims.p2 as f64;
        Ok(Self { f_trad, f_null })
    }

    pub fn decide(&self, r: &NestedFTestResult) -> DecisionPair {
        DecisionPair {
            reject_traditional: r.f_trad >= self.f_trad,
            reject_null_form: r.f_null >= self.f_null,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FGeometry {
    pub theta: f64,
    /// `|r1| = sqrt(SSE1)`
    pub a: f64,
    /// `|r1 - r| = sqrt(SS(2|1))`
    pub b: f64,
    /// `|r| = sqrt(SSE12)`
    pub c: f64,
}

pub fn f_geometry(spec: &NestedSpec, y: &Sample) -> Result<FGeometry> {
    let r = nested_f_test(spec, y)?;
    let a = r.sse1.sqrt();
    let b = r.ss2given1.sqrt();
    let c = if r.saturated { 0.0 } else { r.sse12.sqrt() };
    let theta = c.atan2(b);
    Ok(FGeometry { theta, a, b, c })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn y(v: &[f64]) -> Sample {
        Sample::new(v.to_vec()).unwrap()
    }

    fn simple_design(xs: &[f64]) -> DesignMatrix {
        DesignMatrix::intercept(xs.len()).with_column("x", xs).unwrap()
    }

    #[test]
    fn intercept_only_fit_is_the_mean() {
        let f = fit(&DesignMatrix::intercept(3), &y(&[1.0, 2.0, 3.0])).unwrap();
        for v in &f.fitted {
            assert_relative_eq!(*v, 2.0, max_relative = 1e-14);
        }
        assert_relative_eq!(f.sse, 2.0, max_relative = 1e-14);
        assert_eq!(f.df_resid, 2);
    }

    #[test]
    fn simple_regression_closed_form() {
        let f = fit(&simple_design(&[1.0, 2.0, 3.0]), &y(&[1.0, 2.0, 4.0])).unwrap();
        assert_relative_eq!(f.coefficients[0], -2.0 / 3.0, max_relative = 1e-13);
        assert_relative_eq!(f.coefficients[1], 1.5, max_relative = 1e-13);
        assert_relative_eq!(f.sse, 1.0 / 6.0, max_relative = 1e-13);
    }

    #[test]
    fn response_in_column_space_has_zero_residuals() {
        let xs = [0.5, 1.5, -2.0, 4.0, 3.3];
        let ys: Vec<f64> = xs.iter().map(|x| 2.0 - 0.25 * x).collect();
        let f = fit(&simple_design(&xs), &y(&ys)).unwrap();
        assert!(f.sse < 1e-28);
        assert!(f.residuals.iter().all(|r| r.abs() < 1e-14));
    }

    #[test]
    fn rank_deficiency_names_the_column() {
        let x = DesignMatrix::intercept(4)
            .with_column("a", &[1.0, 2.0, 3.0, 4.0])
            .unwrap()
            .with_column("twice_a_plus_1", &[3.0, 5.0, 7.0, 9.0])
            .unwrap();
        match fit(&x, &y(&[1.0, 0.0, 1.0, 0.0])) {
            Err(Error::RankDeficient { index, label }) => {
                assert_eq!(index, 2);
                assert_eq!(label, "twice_a_plus_1");
            }
            other => panic!("expected rank deficiency, got {other:?}"),
        }
    }

    #[test]
    fn fit_dimension_errors() {
        assert!(fit(&DesignMatrix::intercept(3), &y(&[1.0, 2.0])).is_err());
        let x = simple_design(&[1.0, 2.0]);
        assert!(fit(&x, &y(&[1.0, 2.0])).is_err());
    }

    #[test]
    fn worked_nested_example() {
        let spec = NestedSpec::new(simple_design(&[1.0, 2.0, 3.0]), 1).unwrap();
        let r = nested_f_test(&spec, &y(&[1.0, 2.0, 4.0])).unwrap();
        assert_relative_eq!(r.sse1, 14.0 / 3.0, max_relative = 1e-13);
        assert_relative_eq!(r.sse12, 1.0 / 6.0, max_relative = 1e-12);
        assert_relative_eq!(r.ss2given1, 4.5, max_relative = 1e-13);
        assert_relative_eq!(r.f_trad, 27.0, max_relative = 1e-11);
        assert_relative_eq!(r.f_null, 27.0 / 14.0, max_relative = 1e-12);
        assert!((r.f_null - 1.928_571_4).abs() < 1e-7);
        assert!((r.p_value_f - r.p_value_beta).abs() < 1e-12);
        assert_relative_eq!(map_fnull_to_ftrad(27.0 / 14.0, 3, 1, 1).unwrap(), 27.0, max_relative = 1e-12);
    }

    #[test]
    fn orthogonal_block_gives_zero_statistics() {
        // tested column orthogonal to the intercept and to y
        let spec = NestedSpec::new(simple_design(&[1.0, -1.0, 1.0, -1.0]), 1).unwrap();
        let r = nested_f_test(&spec, &y(&[1.0, 2.0, 2.0, 1.0])).unwrap();
        assert!(r.f_trad.abs() < 1e-14 && r.f_null.abs() < 1e-14);
        assert!((r.p_value_f - 1.0).abs() < 1e-12);
        assert!((r.p_value_beta - 1.0).abs() < 1e-12);
    }

    #[test]
    fn zero_reduced_model_recovers_t_statistics() {
        let data = [1.0, 2.0, 3.0];
        let spec = NestedSpec::new(DesignMatrix::intercept(3), 0).unwrap();
        let r = nested_f_test(&spec, &y(&data)).unwrap();
        let t = crate::ttest::t_test(&y(&data), 0.0).unwrap();
        assert_relative_eq!(r.f_trad, t.t * t.t, max_relative = 1e-10);
        assert_relative_eq!(r.f_null, t.t0 * t.t0, max_relative = 1e-10);
        let t0 = 1.603_567_5f64;
        let via_f = map_fnull_to_ftrad(t0 * t0, 3, 0, 1).unwrap();
        let via_t = crate::ttest::map_t0_to_t(t0, 3).unwrap().powi(2);
        assert_relative_eq!(via_f, via_t, max_relative = 1e-10);
    }

    #[test]
    fn saturated_fit_is_flagged() {
        let xs = [1.0, 2.0, 3.0, 4.0];
        let ys: Vec<f64> = xs.iter().map(|x| 1.0 + 2.0 * x).collect();
        let spec = NestedSpec::new(simple_design(&xs), 1).unwrap();
        let r = nested_f_test(&spec, &y(&ys)).unwrap();
        assert!(r.saturated);
        assert_eq!(r.f_trad, f64::INFINITY);
        assert_eq!(r.f_null, 3.0);
        assert_eq!((r.p_value_f, r.p_value_beta), (0.0, 0.0));
        let g = f_geometry(&spec, &y(&ys)).unwrap();
        assert!(g.theta.abs() < 1e-7);
    }

    #[test]
    fn map_domain() {
        assert_eq!(map_fnull_to_ftrad(0.0, 10, 2, 3).unwrap(), 0.0);
        assert!(map_fnull_to_ftrad(8.0 / 3.0, 10, 2, 3).is_err());
        assert!(map_fnull_to_ftrad(-0.1, 10, 2, 3).is_err());
        assert!(map_fnull_to_ftrad(1.0, 5, 2, 3).is_err());
    }

    #[test]
    fn geometry_of_worked_example() {
        let spec = NestedSpec::new(simple_design(&[1.0, 2.0, 3.0]), 1).unwrap();
        let g = f_geometry(&spec, &y(&[1.0, 2.0, 4.0])).unwrap();
        assert_relative_eq!(g.a, (14.0f64 / 3.0).sqrt(), max_relative = 1e-13);
        assert_relative_eq!(g.b, 4.5f64.sqrt(), max_relative = 1e-13);
        assert_relative_eq!(g.c, (1.0f64 / 6.0).sqrt(), max_relative = 1e-12);
        assert_relative_eq!(g.theta.cos().powi(2), 27.0 / 28.0, max_relative = 1e-12);
    }

    #[test]
    fn geometry_right_angle_when_no_reduction() {
        let spec = NestedSpec::new(simple_design(&[1.0, -1.0, 1.0, -1.0]), 1).unwrap();
        let g = f_geometry(&spec, &y(&[1.0, 2.0, 2.0, 1.0])).unwrap();
        assert!((g.theta - std::f64::consts::FRAC_PI_2).abs() < 1e-7);
    }

    #[test]
    fn nested_spec_validation() {
        assert!(NestedSpec::new(DesignMatrix::intercept(5), 1).is_err());
        assert!(NestedSpec::new(simple_design(&[1.0, 2.0]), 1).is_err());
    }

    #[test]
    fn leverage_sums_to_rank() {
        let x = simple_design(&[0.3, 1.0, 2.2, 5.0, 7.5, 7.7]);
        let qr = Qr::decompose(&x).unwrap();
        let h = qr.leverage();
        assert_relative_eq!(h.iter().sum::<f64>(), 2.0, max_relative = 1e-13);
        // h_ii = 1/n + (x_i - xbar)^2 / Sxx for simple regression
        let xs = x.column(1);
        let xbar = xs.iter().sum::<f64>() / 6.0;
        let sxx: f64 = xs.iter().map(|v| (v - xbar).powi(2)).sum();
        for (hi, xi) in h.iter().zip(xs) {
            assert_relative_eq!(*hi, 1.0 / 6.0 + (xi - xbar).powi(2) / sxx, max_relative = 1e-12);
        }
    }
}
