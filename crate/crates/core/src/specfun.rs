//! Special functions and the distribution families used by every test.
//!
//! Everything reduces to two kernels: the regularized incomplete beta
//! function (Student t, Fisher F, Beta) and the regularized incomplete gamma
//! function (chi-square). Both are evaluated with continued fractions using
//! the modified Lentz scheme.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

const LENTZ_FLOOR: f64 = 1e-300;
const LENTZ_TOL: f64 = 1e-15;
const LENTZ_MAX_ITER: usize = 500;

const LANCZOS_G: f64 = 7.0;
#[allow(clippy::excessive_precision)]
const LANCZOS_COEF: [f64; 9] = [
    0.999_999_999_999_809_93,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_13,
    -176.615_029_162_140_59,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_571_6e-6,
    1.505_632_735_149_311_6e-7,
];

const LN_SQRT_2PI: f64 = 0.918_938_533_204_672_8;

/// Natural logarithm of the gamma function for `x > 0`.
pub fn log_gamma(x: f64) -> Result<f64> {
    if !x.is_finite() || x <= 0.0 {
        return Err(Error::domain(format!("log_gamma requires x > 0, got {x}")));
    }
    Ok(ln_gamma_unchecked(x))
}

fn ln_gamma_unchecked(x: f64) -> f64 {
    if x < 0.5 {
        // Reflection: Γ(x)Γ(1-x) = π / sin(πx)
        let s = (std::f64::consts::PI * x).sin();
        return (std::f64::consts::PI / s).ln() - ln_gamma_unchecked(1.0 - x);
    }
    let z = x - 1.0;
    let mut sum = LANCZOS_COEF[0];
    for (k, c) in LANCZOS_COEF.iter().enumerate().skip(1) {
        sum += c / (z + k as f64);
    }
    let t = z + LANCZOS_G + 0.5;
    LN_SQRT_2PI + (z + 0.5) * t.ln() - t + sum.ln()
}

fn ln_beta(a: f64, b: f64) -> f64 {
    ln_gamma_unchecked(a) + ln_gamma_unchecked(b) - ln_gamma_unchecked(a + b)
}

fn check_shape(name: &str, v: f64) -> Result<()> {
    if v.is_finite() && v > 0.0 {
        Ok(())
    } else {
        Err(Error::domain(format!("{name} must be finite and > 0, got {v}")))
    }
}

/// Regularized incomplete beta function `I_x(a, b)`.
pub fn reg_inc_beta(x: f64, a: f64, b: f64) -> Result<f64> {
    check_unit("x", x)?;
    check_shape("a", a)?;
    check_shape("b", b)?;
    Ok(inc_beta_pair(x, 1.0 - x, a, b)?.0)
}

/// Upper tail `1 - I_x(a, b)`, evaluated without forming the difference
/// when the continued fraction produces the upper tail directly.
pub fn reg_inc_beta_upper(x: f64, a: f64, b: f64) -> Result<f64> {
    check_unit("x", x)?;
    check_shape("a", a)?;
    check_shape("b", b)?;
    Ok(inc_beta_pair(x, 1.0 - x, a, b)?.1)
}

fn check_unit(name: &str, x: f64) -> Result<()> {
    if (0.0..=1.0).contains(&x) {
        Ok(())
    } else {
        Err(Error::domain(format!("{name} must lie in [0, 1], got {x}")))
    }
}

/// Returns `(I_x(a,b), 1 - I_x(a,b))`. The caller passes `y = 1 - x`
/// separately so that complements computed from ratios keep full precision.
fn inc_beta_pair(x: f64, y: f64, a: f64, b: f64) -> Result<(f64, f64)> {
    if x <= 0.0 {
        return Ok((0.0, 1.0));
    }
    if y <= 0.0 {
        return Ok((1.0, 0.0));
    }
    if x > (a + 1.0) / (a + b + 2.0) {
        let upper = beta_cf_term(y, x, b, a)?;
        Ok((1.0 - upper, upper))
    } else {
        let lower = beta_cf_term(x, y, a, b)?;
        Ok((lower, 1.0 - lower))
    }
}

/// `x^a y^b / (a B(a,b))` times the continued fraction; converges quickly
/// for `x < (a+1)/(a+b+2)`.
fn beta_cf_term(x: f64, y: f64, a: f64, b: f64) -> Result<f64> {
    let ln_front = a * x.ln() + b * y.ln() - ln_beta(a, b);
    let cf = beta_cf(x, a, b)?;
    Ok((ln_front.exp() * cf / a).clamp(0.0, 1.0))
}

fn beta_cf(x: f64, a: f64, b: f64) -> Result<f64> {
    let qab = a + b;
    let qap = a + 1.0;
    let qam = a - 1.0;
    let mut c = 1.0;
    let mut d = 1.0 - qab * x / qap;
    if d.abs() < LENTZ_FLOOR {
        d = LENTZ_FLOOR;
    }
    d = 1.0 / d;
    let mut h = d;
    for m in 1..=LENTZ_MAX_ITER {
        let m = m as f64;
        let m2 = 2.0 * m;
        // even step
        let aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if d.abs() < LENTZ_FLOOR {
            d = LENTZ_FLOOR;
        }
        c = 1.0 + aa / c;
        if c.abs() < LENTZ_FLOOR {
            c = LENTZ_FLOOR;
        }
        d = 1.0 / d;
        h *= d * c;
        // odd step
        let aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if d.abs() < LENTZ_FLOOR {
            d = LENTZ_FLOOR;
        }
        c = 1.0 + aa / c;
        if c.abs() < LENTZ_FLOOR {
            c = LENTZ_FLOOR;
        }
        d = 1.0 / d;
        let del = d * c;
        h *= del;
        if (del - 1.0).abs() < LENTZ_TOL {
            return Ok(h);
        }
    }
    Err(Error::NoConvergence {
        routine: "incomplete beta continued fraction",
        iterations: LENTZ_MAX_ITER,
    })
}

/// Regularized lower incomplete gamma function `P(s, x)`.
pub fn reg_inc_gamma_lower(s: f64, x: f64) -> Result<f64> {
    Ok(inc_gamma_pair(s, x)?.0)
}

/// Regularized upper incomplete gamma function `Q(s, x) = 1 - P(s, x)`.
pub fn reg_inc_gamma_upper(s: f64, x: f64) -> Result<f64> {
    Ok(inc_gamma_pair(s, x)?.1)
}

fn inc_gamma_pair(s: f64, x: f64) -> Result<(f64, f64)> {
    check_shape("s", s)?;
    if x.is_nan() || x < 0.0 {
        return Err(Error::domain(format!("incomplete gamma requires x >= 0, got {x}")));
    }
    if x == 0.0 {
        return Ok((0.0, 1.0));
    }
    if x == f64::INFINITY {
        return Ok((1.0, 0.0));
    }
    if x < s + 1.0 {
        let p = gamma_series(s, x)?;
        Ok((p, 1.0 - p))
    } else {
        let q = gamma_cf(s, x)?;
        Ok((1.0 - q, q))
    }
}

fn gamma_series(s: f64, x: f64) -> Result<f64> {
    let mut ap = s;
    let mut del = 1.0 / s;
    let mut sum = del;
    for _ in 0..LENTZ_MAX_ITER * 4 {
        ap += 1.0;
        del *= x / ap;
        sum += del;
        if del.abs() < sum.abs() * LENTZ_TOL {
            let ln_front = s * x.ln() - x - ln_gamma_unchecked(s);
            return Ok((sum * ln_front.exp()).clamp(0.0, 1.0));
        }
    }
    Err(Error::NoConvergence {
        routine: "incomplete gamma series",
        iterations: LENTZ_MAX_ITER * 4,
    })
}

fn gamma_cf(s: f64, x: f64) -> Result<f64> {
    let mut b = x + 1.0 - s;
    let mut c = 1.0 / LENTZ_FLOOR;
    let mut d = 1.0 / b;
    let mut h = d;
    for i in 1..=LENTZ_MAX_ITER {
        let i = i as f64;
        let an = -i * (i - s);
        b += 2.0;
        d = an * d + b;
        if d.abs() < LENTZ_FLOOR {
            d = LENTZ_FLOOR;
        }
        c = b + an / c;
        if c.abs() < LENTZ_FLOOR {
            c = LENTZ_FLOOR;
        }
        d = 1.0 / d;
        let del = d * c;
        h *= del;
        if (del - 1.0).abs() < LENTZ_TOL {
            let ln_front = s * x.ln() - x - ln_gamma_unchecked(s);
            return Ok((ln_front.exp() * h).clamp(0.0, 1.0));
        }
    }
    Err(Error::NoConvergence {
        routine: "incomplete gamma continued fraction",
        iterations: LENTZ_MAX_ITER,
    })
}

/// Distribution family tag.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Family {
    StudentT,
    FisherF,
    Beta,
    ChiSquare,
}

/// A distribution from one of the supported families.
///
/// `StudentT` and `ChiSquare` read only `df1` (degrees of freedom);
/// `FisherF` reads `df1`/`df2` as numerator/denominator degrees of freedom;
/// `Beta` reads them as the shapes `a` and `b`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DistParams {
    pub family: Family,
    pub df1: f64,
    pub df2: f64,
}

impl DistParams {
    pub fn student_t(df: f64) -> Self {
        Self { family: Family::StudentT, df1: df, df2: f64::NAN }
    }

    pub fn fisher_f(df1: f64, df2: f64) -> Self {
        Self { family: Family::FisherF, df1, df2 }
    }

    pub fn beta(a: f64, b: f64) -> Self {
        Self { family: Family::Beta, df1: a, df2: b }
    }

    pub fn chi_square(df: f64) -> Self {
        Self { family: Family::ChiSquare, df1: df, df2: f64::NAN }
    }

    fn uses_df2(&self) -> bool {
        matches!(self.family, Family::FisherF | Family::Beta)
    }

    pub fn validate(&self) -> Result<()> {
        check_shape("df1", self.df1)?;
        if self.uses_df2() {
            check_shape("df2", self.df2)?;
        }
        Ok(())
    }

    fn support(&self) -> (f64, f64) {
        match self.family {
            Family::StudentT => (f64::NEG_INFINITY, f64::INFINITY),
            Family::FisherF | Family::ChiSquare => (0.0, f64::INFINITY),
            Family::Beta => (0.0, 1.0),
        }
    }
}

/// Returns `(P(X <= x), P(X > x))` for a validated distribution.
fn tails(d: &DistParams, x: f64) -> Result<(f64, f64)> {
    if x.is_nan() {
        return Err(Error::domain("distribution argument is NaN"));
    }
    match d.family {
        Family::StudentT => {
            let nu = d.df1;
            if x.is_infinite() {
                return Ok(if x > 0.0 { (1.0, 0.0) } else { (0.0, 1.0) });
            }
            let t2 = x * x;
            // P(|T| > |x|) = I_{nu/(nu+t^2)}(nu/2, 1/2)
            let (two_sided, _) = inc_beta_pair(nu / (nu + t2), t2 / (nu + t2), 0.5 * nu, 0.5)?;
            let half = 0.5 * two_sided;
            Ok(if x >= 0.0 { (1.0 - half, half) } else { (half, 1.0 - half) })
        }
        Family::FisherF => {
            if x <= 0.0 {
                return Ok((0.0, 1.0));
            }
            if x.is_infinite() {
                return Ok((1.0, 0.0));
            }
            let (d1, d2) = (d.df1, d.df2);
            let num = d1 * x;
            inc_beta_pair(num / (num + d2), d2 / (num + d2), 0.5 * d1, 0.5 * d2)
        }
        Family::Beta => {
            if x <= 0.0 {
                return Ok((0.0, 1.0));
            }
            if x >= 1.0 {
                return Ok((1.0, 0.0));
            }
            inc_beta_pair(x, 1.0 - x, d.df1, d.df2)
        }
        Family::ChiSquare => {
            if x <= 0.0 {
                return Ok((0.0, 1.0));
            }
            inc_gamma_pair(0.5 * d.df1, 0.5 * x)
        }
    }
}

/// Cumulative distribution function.
pub fn cdf(d: &DistParams, x: f64) -> Result<f64> {
    d.validate()?;
    Ok(tails(d, x)?.0)
}

/// Survival function `P(X > x)`, accurate in the far upper tail.
pub fn sf(d: &DistParams, x: f64) -> Result<f64> {
    d.validate()?;
    Ok(tails(d, x)?.1)
}

/// Probability density function.
pub fn pdf(d: &DistParams, x: f64) -> Result<f64> {
    d.validate()?;
    Ok(ln_pdf(d, x).exp())
}

fn ln_pdf(d: &DistParams, x: f64) -> f64 {
    match d.family {
        Family::StudentT => {
            let nu = d.df1;
            ln_gamma_unchecked(0.5 * (nu + 1.0))
                - ln_gamma_unchecked(0.5 * nu)
                - 0.5 * (nu * std::f64::consts::PI).ln()
                - 0.5 * (nu + 1.0) * (x * x / nu).ln_1p()
        }
        Family::FisherF => {
            if x <= 0.0 {
                return f64::NEG_INFINITY;
            }
            let (d1, d2) = (d.df1, d.df2);
            0.5 * d1 * (d1 / d2).ln() + (0.5 * d1 - 1.0) * x.ln()
                - 0.5 * (d1 + d2) * (d1 * x / d2).ln_1p()
                - ln_beta(0.5 * d1, 0.5 * d2)
        }
        Family::Beta => {
            if x <= 0.0 || x >= 1.0 {
                return f64::NEG_INFINITY;
            }
            let (a, b) = (d.df1, d.df2);
            (a - 1.0) * x.ln() + (b - 1.0) * (-x).ln_1p() - ln_beta(a, b)
        }
        Family::ChiSquare => {
            if x <= 0.0 {
                return f64::NEG_INFINITY;
            }
            let k = 0.5 * d.df1;
            (k - 1.0) * x.ln() - 0.5 * x - k * std::f64::consts::LN_2 - ln_gamma_unchecked(k)
        }
    }
}

const QUANTILE_TOL: f64 = 1e-12;
const QUANTILE_MAX_ITER: usize = 400;

/// Quantile function: the `x` with `cdf(d, x) = q` for `0 < q < 1`.
///
/// Brackets the root by doubling outward from a family-specific starting
/// point, then runs Newton steps that fall back to bisection whenever a step
/// leaves the bracket.
pub fn quantile(d: &DistParams, q: f64) -> Result<f64> {
    d.validate()?;
    if !(q > 0.0 && q < 1.0) {
        return Err(Error::domain(format!("quantile requires 0 < q < 1, got {q}")));
    }
    if d.family == Family::StudentT {
        if q == 0.5 {
            return Ok(0.0);
        }
        // symmetric about zero; solve on the positive half
        let upper = q.max(1.0 - q);
        let x = solve_quantile(d, upper, 0.0)?;
        return Ok(if q > 0.5 { x } else { -x });
    }
    let start = match d.family {
        Family::FisherF => 1.0,
        Family::ChiSquare => d.df1.max(0.5),
        Family::Beta => d.df1 / (d.df1 + d.df2),
        Family::StudentT => unreachable!(),
    };
    solve_quantile(d, q, start)
}

/// Residual used by the root finder. Works on the upper tail when `q > 0.5`
/// so that quantiles near 1 keep their relative precision.
fn quantile_residual(d: &DistParams, x: f64, q: f64) -> Result<f64> {
    let (lo, hi) = tails(d, x)?;
    Ok(if q > 0.5 { (1.0 - q) - hi } else { lo - q })
}

fn solve_quantile(d: &DistParams, q: f64, start: f64) -> Result<f64> {
    let (sup_lo, sup_hi) = d.support();
    let mut lo = if sup_lo.is_finite() { sup_lo } else { start };
    let mut hi;
    if sup_hi.is_finite() {
        hi = sup_hi;
    } else {
        hi = if start > 0.0 { start } else { 1.0 };
        let mut steps = 0;
        while quantile_residual(d, hi, q)? < 0.0 {
            lo = hi;
            hi *= 2.0;
            steps += 1;
            if steps > 2000 || !hi.is_finite() {
                return Err(Error::NoConvergence { routine: "quantile bracketing", iterations: steps });
            }
        }
        if sup_lo.is_finite() {
            // shrink the lower end for heavy left mass (small df chi-square, F)
            let mut probe = hi.min(start);
            let mut steps = 0;
            while probe > sup_lo && quantile_residual(d, probe, q)? > 0.0 && steps < 2000 {
                hi = probe;
                probe *= 0.5;
                steps += 1;
                if probe < f64::MIN_POSITIVE {
                    probe = sup_lo;
                    break;
                }
            }
            lo = probe.max(sup_lo);
        }
    }

    let mut x = start.clamp(lo, hi);
    if !(x > lo && x < hi) {
        x = 0.5 * (lo + hi);
    }
    for _ in 0..QUANTILE_MAX_ITER {
        let f = quantile_residual(d, x, q)?;
        if f.abs() <= QUANTILE_TOL * q.min(1.0 - q).max(1e-3) {
            return Ok(x);
        }
        if f < 0.0 {
            lo = x;
        } else {
            hi = x;
        }
        let dens = ln_pdf(d, x).exp();
        // residual has slope +pdf in both orientations
        let newton = if dens > 0.0 && dens.is_finite() { x - f / dens } else { f64::NAN };
        x = if newton.is_finite() && newton > lo && newton < hi {
            newton
        } else {
            0.5 * (lo + hi)
        };
        if hi - lo <= f64::EPSILON * x.abs().max(f64::MIN_POSITIVE) * 4.0 {
            return Ok(x);
        }
    }
    Err(Error::NoConvergence { routine: "quantile solver", iterations: QUANTILE_MAX_ITER })
}
