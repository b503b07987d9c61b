//! One-sample binomial proportion: Wald interval and the two z statistics.
//!
//! `z_null` puts the hypothesized `p0` into the variance; `z_wald` plugs in
//! the estimate `p_hat`. Unlike the t and F cases these are not monotone
//! transforms of each other, so their decisions can differ.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::specfun::{self, DistParams};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProportionData {
    successes: u64,
    n: u64,
}

impl ProportionData {
    pub fn new(successes: u64, n: u64) -> Result<Self> {
        if n == 0 {
            return Err(Error::domain("trial count n must be at least 1"));
        }
        if successes > n {
            return Err(Error::domain(format!("successes ({successes}) exceed trials ({n})")));
        }
        Ok(Self { successes, n })
    }

    pub fn successes(&self) -> u64 {
        self.successes
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    pub fn p_hat(&self) -> f64 {
        self.successes as f64 / self.n as f64
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Alternative {
    #[default]
    TwoSided,
    Greater,
    Less,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProportionTestResult {
    pub successes: u64,
    pub n: u64,
    pub p0: f64,
    pub p_hat: f64,
    pub z_null: f64,
    /// Signed infinity when `p_hat` is 0 or 1 and `p_hat != p0`.
    #[serde(with = "crate::real")]
    pub z_wald: f64,
    /// Set when the plug-in variance `p_hat (1 - p_hat)` is zero.
    pub wald_degenerate: bool,
    pub p_value_null: f64,
    pub p_value_wald: f64,
    pub ci_lower: f64,
    pub ci_upper: f64,
    pub alpha: f64,
    pub alternative: Alternative,
}

/// Standard normal tail area for a z statistic, via the chi-square(1) law
/// of `z^2`.
pub fn normal_p_value(z: f64, alternative: Alternative) -> Result<f64> {
    if z.is_infinite() {
        let toward = match alternative {
            Alternative::TwoSided => true,
            Alternative::Greater => z > 0.0,
            Alternative::Less => z < 0.0,
        };
        return Ok(if toward { 0.0 } else { 1.0 });
    }
    let two_sided = specfun::sf(&DistParams::chi_square(1.0), z * z)?;
    let upper = if z >= 0.0 { 0.5 * two_sided } else { 1.0 - 0.5 * two_sided };
    Ok(match alternative {
        Alternative::TwoSided => two_sided,
        Alternative::Greater => upper,
        Alternative::Less => 1.0 - upper,
    })
}

/// Upper `alpha/2` point of the standard normal.
pub fn z_half_alpha(alpha: f64) -> Result<f64> {
    Ok(specfun::quantile(&DistParams::chi_square(1.0), 1.0 - alpha)?.sqrt())
}

pub fn proportion_test(data: ProportionData, p0: f64, alpha: f64) -> Result<ProportionTestResult> {
    proportion_test_with(data, p0, alpha, Alternative::TwoSided)
}

pub fn proportion_test_with(
    data: ProportionData,
    p0: f64,
    alpha: f64,
    alternative: Alternative,
) -> Result<ProportionTestResult> {
    if !(p0 > 0.0 && p0 < 1.0) {
        return Err(Error::domain(format!("p0 must lie in (0, 1), got {p0}")));
    }
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(Error::domain(format!("alpha must lie in (0, 1), got {alpha}")));
    }
    let n = data.n as f64;
    let p_hat = data.p_hat();
    let diff = p_hat - p0;

    let z_null = diff / (p0 * (1.0 - p0) / n).sqrt();

    let wald_var = p_hat * (1.0 - p_hat) / n;
    let wald_degenerate = wald_var == 0.0;
    let z_wald = if wald_degenerate {
        if diff == 0.0 {
            0.0
        } else {
            diff.signum() * f64::INFINITY
        }
    } else {
        diff / wald_var.sqrt()
    };

    let half_width = z_half_alpha(alpha)? * wald_var.sqrt();

    Ok(ProportionTestResult {
        successes: data.successes,
        n: data.n,
        p0,
        p_hat,
        z_null,
        z_wald,
        wald_degenerate,
        p_value_null: normal_p_value(z_null, alternative)?,
        p_value_wald: normal_p_value(z_wald, alternative)?,
        ci_lower: p_hat - half_width,
        ci_upper: p_hat + half_width,
        alpha,
        alternative,
    })
}
