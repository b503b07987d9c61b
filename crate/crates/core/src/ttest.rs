//! One-sample t-test in its traditional form `T` (sample variance with
//! divisor `n - 1`) and its null form `T0` (variance about `mu0` with
//! divisor `n`), together with the sum-of-squares geometry behind them.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::specfun::{self, DistParams};
use crate::DecisionPair;

/// An ordered collection of finite observations.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<f64>", into = "Vec<f64>")]
pub struct Sample(Vec<f64>);

impl Sample {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::domain("sample is empty"));
        }
        if let Some(i) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::domain(format!("observation {i} is not finite")));
        }
        Ok(Sample(values))
    }

    pub fn values(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn mean(&self) -> f64 {
        self.0.iter().sum::<f64>() / self.0.len() as f64
    }

    pub fn into_inner(self) -> Vec<f64> {
        self.0
    }
}

impl TryFrom<Vec<f64>> for Sample {
    type Error = Error;

    fn try_from(v: Vec<f64>) -> Result<Self> {
        Sample::new(v)
    }
}

impl From<Sample> for Vec<f64> {
    fn from(s: Sample) -> Self {
        s.0
    }
}

/// How the statistics should be read.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TStatus {
    Regular,
    /// Every observation equals `mu0`: both statistics are 0/0, reported as 0.
    Degenerate,
    /// Every observation equals a common value other than `mu0`:
    /// `|T0| = sqrt(n)`, `T` is infinite and both p-values are 0.
    Boundary,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TTestResult {
    pub n: usize,
    pub mean: f64,
    pub mu0: f64,
    /// Sample variance, divisor `n - 1`.
    pub s2: f64,
    /// Variance about `mu0`, divisor `n`.
    pub s0_2: f64,
    #[serde(with = "crate::real")]
    pub t: f64,
    pub t0: f64,
    #[serde(with = "crate::real")]
    pub r_ratio: f64,
    pub ssto: f64,
    pub sst: f64,
    pub sse: f64,
    pub cos2_theta: f64,
    pub df: usize,
    pub p_value_t: f64,
    pub p_value_t0: f64,
    pub status: TStatus,
}

struct SumsOfSquares {
    mean: f64,
    ssto: f64,
    sst: f64,
    sse: f64,
}

fn sums_of_squares(y: &Sample, mu0: f64) -> SumsOfSquares {
    let v = y.values();
    let n = v.len() as f64;
    let mean = y.mean();
    let sse = v.iter().map(|x| (x - mean).powi(2)).sum();
    let ssto = v.iter().map(|x| (x - mu0).powi(2)).sum();
    let sst = n * (mean - mu0).powi(2);
    SumsOfSquares { mean, ssto, sst, sse }
}

fn check_n(n: usize) -> Result<()> {
    if n < 2 {
        Err(Error::domain(format!("need at least 2 observations, got {n}")))
    } else {
        Ok(())
    }
}

/// Null law of `T0^2 / n`.
pub fn t0_null_law(n: usize) -> DistParams {
    DistParams::beta(0.5, 0.5 * (n as f64 - 1.0))
}

pub fn t_test(y: &Sample, mu0: f64) -> Result<TTestResult> {
    let n = y.len();
    check_n(n)?;
    if !mu0.is_finite() {
        return Err(Error::domain("mu0 must be finite"));
    }
    let nf = n as f64;
    let ss = sums_of_squares(y, mu0);
    let diff = ss.mean - mu0;
    let s2 = ss.sse / (nf - 1.0);
    let s0_2 = ss.ssto / nf;

    let base = TTestResult {
        n,
        mean: ss.mean,
        mu0,
        s2,
        s0_2,
        t: 0.0,
        t0: 0.0,
        r_ratio: 1.0,
        ssto: ss.ssto,
        sst: ss.sst,
        sse: ss.sse,
        cos2_theta: 0.0,
        df: n - 1,
        p_value_t: 1.0,
        p_value_t0: 1.0,
        status: TStatus::Regular,
    };

    if ss.ssto == 0.0 {
        return Ok(TTestResult { status: TStatus::Degenerate, ..base });
    }
    if ss.sse == 0.0 {
        let sign = diff.signum();
        return Ok(TTestResult {
            t: sign * f64::INFINITY,
            t0: sign * nf.sqrt(),
            r_ratio: f64::INFINITY,
            cos2_theta: 1.0,
            p_value_t: 0.0,
            p_value_t0: 0.0,
            status: TStatus::Boundary,
            ..base
        });
    }

    let t = diff / (s2 / nf).sqrt();
    let t0 = diff / (s0_2 / nf).sqrt();
    // T route: Student t with n-1 df; T0 route: Beta tail of T0^2/n.
    let p_value_t = (2.0 * specfun::sf(&DistParams::student_t(nf - 1.0), t.abs())?).min(1.0);
    let p_value_t0 = specfun::sf(&t0_null_law(n), t0 * t0 / nf)?;

    Ok(TTestResult {
        t,
        t0,
        r_ratio: ss.ssto / ss.sse,
        cos2_theta: ss.sst / ss.ssto,
        p_value_t,
        p_value_t0,
        ..base
    })
}

/// `T = sqrt(n-1) T0 / sqrt(n - T0^2)` on `|T0| < sqrt(n)`.
pub fn map_t0_to_t(t0: f64, n: usize) -> Result<f64> {
    check_n(n)?;
    let nf = n as f64;
    if !(t0 * t0 < nf) {
        return Err(Error::domain(format!("|t0| = {} is outside (-sqrt(n), sqrt(n)) for n = {n}", t0.abs())));
    }
    Ok((nf - 1.0).sqrt() * t0 / (nf - t0 * t0).sqrt())
}

/// T-scale critical value whose rejection region equals `{|T0| >= c}`.
pub fn map_critical_value(c_alpha: f64, n: usize) -> Result<f64> {
    if !(c_alpha >= 0.0) {
        return Err(Error::domain(format!("critical value must be >= 0, got {c_alpha}")));
    }
    map_t0_to_t(c_alpha, n)
}

/// Size-`alpha` two-sided critical value on the T0 scale, from the Beta
/// null law of `T0^2 / n`.
pub fn t0_critical_value(alpha: f64, n: usize) -> Result<f64> {
    check_n(n)?;
    check_alpha(alpha)?;
    Ok((n as f64 * specfun::quantile(&t0_null_law(n), 1.0 - alpha)?).sqrt())
}

/// Size-`alpha` two-sided critical value on the T scale.
pub fn t_critical_value(alpha: f64, n: usize) -> Result<f64> {
    check_n(n)?;
    check_alpha(alpha)?;
    specfun::quantile(&DistParams::student_t(n as f64 - 1.0), 1.0 - 0.5 * alpha)
}

pub(crate) fn check_alpha(alpha: f64) -> Result<()> {
    if alpha > 0.0 && alpha < 1.0 {
        Ok(())
    } else {
        Err(Error::domain(format!("alpha must lie in (0, 1), got {alpha}")))
    }
}

/// Precomputed critical values for deciding many samples of one size.
#[derive(Debug, Clone, Copy)]
pub struct TCriticalValues {
    pub t: f64,
    pub t0: f64,
}

impl TCriticalValues {
    pub fn new(alpha: f64, n: usize) -> Result<Self> {
        Ok(Self { t: t_critical_value(alpha, n)?, t0: t0_critical_value(alpha, n)? })
    }

    pub fn decide(&self, r: &TTestResult) -> DecisionPair {
        DecisionPair {
            reject_traditional: r.t.abs() >= self.t,
            reject_null_form: r.t0.abs() >= self.t0,
        }
    }
}

/// The likelihood-ratio surrogate `R = SSTO / SSE` evaluated through `T`
/// and through `T0`.
pub fn lrt_ratio(y: &Sample, mu0: f64) -> Result<(f64, f64)> {
    let r = t_test(y, mu0)?;
    if r.sse == 0.0 {
        return Err(Error::degenerate("SSE is zero; the ratio is undefined"));
    }
    let nf = r.n as f64;
    Ok((1.0 + r.t * r.t / (nf - 1.0), 1.0 / (1.0 - r.t0 * r.t0 / nf)))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Geometry {
    /// Angle in radians between `y - mu0` and the all-ones vector.
    pub theta: f64,
    pub ssto: f64,
    pub sst: f64,
    pub sse: f64,
}

impl Geometry {
    pub fn cos2_theta(&self) -> f64 {
        self.theta.cos().powi(2)
    }
}

pub fn geometry(y: &Sample, mu0: f64) -> Result<Geometry> {
    let n = y.len();
    check_n(n)?;
    let ss = sums_of_squares(y, mu0);
    if ss.ssto == 0.0 {
        return Err(Error::degenerate("y - mu0 is the zero vector"));
    }
    // legs of the right triangle: projection on 1 (signed) and the residual
    let along = (ss.mean - mu0) * (n as f64).sqrt();
    let theta = ss.sse.sqrt().atan2(along);
    Ok(Geometry { theta, ssto: ss.ssto, sst: ss.sst, sse: ss.sse })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn s(v: &[f64]) -> Sample {
        Sample::new(v.to_vec()).unwrap()
    }

    #[test]
    fn three_point_worked_example() {
        let r = t_test(&s(&[1.0, 2.0, 3.0]), 0.0).unwrap();
        assert_relative_eq!(r.t, 12f64.sqrt(), max_relative = 1e-14);
        assert!((r.t - 3.464_101_6).abs() < 1e-7);
        assert_relative_eq!(r.t0, 6.0 / 14f64.sqrt(), max_relative = 1e-14);
        assert!((r.t0 - 1.603_567_5).abs() < 1e-7);
        assert_relative_eq!(r.r_ratio, 7.0, max_relative = 1e-14);
        assert_eq!((r.ssto, r.sst, r.sse), (14.0, 12.0, 2.0));
        // df = 2 closed form: p = 1 - t / sqrt(2 + t^2)
        let p = 1.0 - r.t / (2.0 + r.t * r.t).sqrt();
        assert!((r.p_value_t - p).abs() < 1e-12);
        assert!((r.p_value_t - 0.074_180_0).abs() < 1e-7);
        assert!((r.p_value_t0 - r.p_value_t).abs() < 1e-12);
        assert_eq!(r.status, TStatus::Regular);
    }

    #[test]
    fn all_equal_to_mu0_is_degenerate() {
        let r = t_test(&s(&[5.0; 4]), 5.0).unwrap();
        assert_eq!(r.status, TStatus::Degenerate);
        assert_eq!((r.t, r.t0), (0.0, 0.0));
    }

    #[test]
    fn all_equal_away_from_mu0_is_boundary() {
        let r = t_test(&s(&[2.0; 4]), 5.0).unwrap();
        assert_eq!(r.status, TStatus::Boundary);
        assert_eq!(r.t, f64::NEG_INFINITY);
        assert_eq!(r.t0, -2.0);
        assert_eq!((r.p_value_t, r.p_value_t0), (0.0, 0.0));
    }

    #[test]
    fn symmetric_sample() {
        let r = t_test(&s(&[-1.0, 1.0]), 0.0).unwrap();
        assert_eq!((r.t, r.t0), (0.0, 0.0));
        assert!((r.p_value_t - 1.0).abs() < 1e-15);
        assert!((r.p_value_t0 - 1.0).abs() < 1e-15);
    }

    #[test]
    fn rejects_short_or_bad_samples() {
        assert!(t_test(&s(&[1.0]), 0.0).is_err());
        assert!(Sample::new(vec![]).is_err());
        assert!(Sample::new(vec![1.0, f64::NAN]).is_err());
        assert!(t_test(&s(&[1.0, 2.0]), f64::INFINITY).is_err());
    }

    #[test]
    fn t0_to_t_mapping() {
        assert_eq!(map_t0_to_t(0.0, 7).unwrap(), 0.0);
        assert!((map_t0_to_t(1.603_567_5, 3).unwrap() - 3.464_101_6).abs() < 1e-6);
        let near = 3f64.sqrt() * (1.0 - 1e-9);
        assert!(map_t0_to_t(near, 3).unwrap() > 1e3);
        assert!(map_t0_to_t(2.0, 4).is_err());
        assert!(map_t0_to_t(-2.0, 3).is_err());
        assert_eq!(map_t0_to_t(-0.4, 5).unwrap(), -map_t0_to_t(0.4, 5).unwrap());
    }

    #[test]
    fn critical_value_mapping() {
        assert_eq!(map_critical_value(0.0, 4).unwrap(), 0.0);
        assert!((map_critical_value(1.0, 2).unwrap() - 1.0).abs() < 1e-15);
        assert!(map_critical_value(2.0, 4).is_err());
        assert!(map_critical_value(-0.1, 4).is_err());
    }

    #[test]
    fn mapped_t0_critical_value_matches_t_quantile_n3() {
        // Beta(1/2, 1) has CDF sqrt(u), so its 0.95 quantile is 0.9025.
        let c0 = t0_critical_value(0.05, 3).unwrap();
        assert!((c0 - (3.0f64 * 0.9025).sqrt()).abs() < 1e-9);
        let mapped = map_critical_value(c0, 3).unwrap();
        assert!((mapped - 4.302_652_7).abs() < 1e-6);
        assert!((mapped - t_critical_value(0.05, 3).unwrap()).abs() < 1e-8);
    }

    #[test]
    fn lrt_ratio_examples() {
        let (a, b) = lrt_ratio(&s(&[1.0, 2.0, 3.0]), 0.0).unwrap();
        assert_relative_eq!(a, 7.0, max_relative = 1e-14);
        assert_relative_eq!(b, 7.0, max_relative = 1e-14);
        let (a, b) = lrt_ratio(&s(&[1.0, 2.0, 3.0]), 2.0).unwrap();
        assert_eq!((a, b), (1.0, 1.0));
        assert!(lrt_ratio(&s(&[3.0, 3.0]), 1.0).is_err());
    }

    #[test]
    fn geometry_examples() {
        let g = geometry(&s(&[1.0, 2.0, 3.0]), 0.0).unwrap();
        assert!((g.cos2_theta() - 12.0 / 14.0).abs() < 1e-12);
        let g = geometry(&s(&[4.0, 4.0, 4.0]), 1.0).unwrap();
        assert!(g.theta.abs() < 1e-7);
        let g = geometry(&s(&[4.0, 4.0, 4.0]), 9.0).unwrap();
        assert!((g.theta - std::f64::consts::PI).abs() < 1e-7);
        let g = geometry(&s(&[1.0, 3.0]), 2.0).unwrap();
        assert!((g.theta - std::f64::consts::FRAC_PI_2).abs() < 1e-15);
        assert!(geometry(&s(&[2.0, 2.0]), 2.0).is_err());
    }
}
