//! Seeded simulation of size, power and null laws for both test forms.
//!
//! Replicate `i` draws from its own xoshiro256++ stream seeded with
//! `mix64(mix64(seed) + i)`, where `mix64` is the SplitMix64 finalizer.
//! Results are therefore identical whatever the number of worker threads,
//! and neighbouring seeds do not share shifted streams.

use rand::SeedableRng;
use rand_distr::{Binomial, Distribution, StandardNormal};
use rand_xoshiro::Xoshiro256PlusPlus;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linmodel::{self, DesignMatrix, Dims, FCriticalValues, NestedSpec};
use crate::proportion::{self, ProportionData};
use crate::specfun::{self, DistParams};
use crate::ttest::{self, Sample, TCriticalValues};
use crate::DecisionPair;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Scenario {
    /// `y ~ N(effect, 1)`, testing `mu0 = 0`.
    OneSampleT,
    /// Intercept plus `p1 - 1` Gaussian covariates in the reduced design,
    /// `p2` Gaussian covariates in the tested block, each with coefficient
    /// `effect`; unit error variance.
    NestedF { p1: usize, p2: usize },
    /// `Binomial(n, p0 + effect)`, testing `p = p0`. The traditional form is
    /// the Wald statistic, the null form puts `p0` in the variance.
    Proportion { p0: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SimConfig {
    pub replicates: u64,
    pub seed: u64,
    pub n: usize,
    pub effect: f64,
    pub alpha: f64,
    pub scenario: Scenario,
}

impl SimConfig {
    pub fn validate(&self) -> Result<()> {
        if self.replicates == 0 {
            return Err(Error::Config("replicates must be at least 1".into()));
        }
        if !(self.alpha > 0.0 && self.alpha < 1.0) {
            return Err(Error::Config(format!("alpha must lie in (0, 1), got {}", self.alpha)));
        }
        if !self.effect.is_finite() {
            return Err(Error::Config("effect must be finite".into()));
        }
        match self.scenario {
            Scenario::OneSampleT if self.n < 2 => {
                Err(Error::Config(format!("one-sample t needs n >= 2, got {}", self.n)))
            }
            Scenario::NestedF { p1, p2 } if p2 == 0 || self.n <= p1 + p2 => Err(Error::Config(format!(
                "nested F needs p2 >= 1 and n > p1 + p2 (n = {}, p1 = {p1}, p2 = {p2})",
                self.n
            ))),
            Scenario::Proportion { p0 } => {
                let p = p0 + self.effect;
                if !(p0 > 0.0 && p0 < 1.0) || !(0.0..=1.0).contains(&p) || self.n == 0 {
                    Err(Error::Config(format!(
                        "proportion needs 0 < p0 < 1, 0 <= p0 + effect <= 1 and n >= 1 (p0 = {p0}, effect = {})",
                        self.effect
                    )))
                } else {
                    Ok(())
                }
            }
            _ => Ok(()),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SimOutcome {
    pub replicates: u64,
    pub rejections_trad: u64,
    pub rejections_null: u64,
    pub reject_rate_trad: f64,
    pub reject_rate_null: f64,
    /// Replicates where the two forms reached different decisions.
    pub disagreements: u64,
}

/// SplitMix64 finalizer.
pub fn mix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

pub fn replicate_rng(seed: u64, index: u64) -> Xoshiro256PlusPlus {
    Xoshiro256PlusPlus::seed_from_u64(mix64(mix64(seed).wrapping_add(index)))
}

fn normals(rng: &mut Xoshiro256PlusPlus, k: usize) -> Vec<f64> {
    (0..k).map(|_| StandardNormal.sample(rng)).collect()
}

fn draw_t_sample(rng: &mut Xoshiro256PlusPlus, n: usize, effect: f64) -> Result<Sample> {
    Sample::new(normals(rng, n).into_iter().map(|e| e + effect).collect())
}

fn draw_nested(rng: &mut Xoshiro256PlusPlus, n: usize, p1: usize, p2: usize, effect: f64) -> Result<(NestedSpec, Sample)> {
    let mut x = DesignMatrix::empty(n);
    for j in 0..p1 {
        x = if j == 0 {
            x.with_column("(intercept)", &vec![1.0; n])?
        } else {
            x.with_column(format!("x1_{j}"), &normals(rng, n))?
        };
    }
    let mut y = normals(rng, n);
    for j in 0..p2 {
        let col = normals(rng, n);
        for (yi, c) in y.iter_mut().zip(&col) {
            *yi += effect * c;
        }
        x = x.with_column(format!("x2_{j}"), &col)?;
    }
    Ok((NestedSpec::new(x, p1)?, Sample::new(y)?))
}

enum Deciders {
    T(TCriticalValues),
    F(FCriticalValues),
    Z(f64),
}

fn run_replicate(cfg: &SimConfig, deciders: &Deciders, index: u64) -> Result<DecisionPair> {
    let mut rng = replicate_rng(cfg.seed, index);
    match (cfg.scenario, deciders) {
        (Scenario::OneSampleT, Deciders::T(cv)) => {
            let y = draw_t_sample(&mut rng, cfg.n, cfg.effect)?;
            Ok(cv.decide(&ttest::t_test(&y, 0.0)?))
        }
        (Scenario::NestedF { p1, p2 }, Deciders::F(cv)) => {
            let (spec, y) = draw_nested(&mut rng, cfg.n, p1, p2, cfg.effect)?;
            Ok(cv.decide(&linmodel::nested_f_test(&spec, &y)?))
        }
        (Scenario::Proportion { p0 }, Deciders::Z(z)) => {
            let binom = Binomial::new(cfg.n as u64, p0 + cfg.effect)
                .map_err(|e| Error::Config(e.to_string()))?;
            let k = binom.sample(&mut rng);
            let r = proportion::proportion_test(ProportionData::new(k, cfg.n as u64)?, p0, cfg.alpha)?;
            Ok(DecisionPair {
                reject_traditional: r.z_wald.abs() >= *z,
                reject_null_form: r.z_null.abs() >= *z,
            })
        }
        _ => unreachable!("deciders built from the same scenario"),
    }
}

#[derive(Default, Clone, Copy)]
struct Tally {
    trad: u64,
    null: u64,
    disagree: u64,
}

impl Tally {
    fn from_pair(d: DecisionPair) -> Self {
        Tally {
            trad: d.reject_traditional as u64,
            null: d.reject_null_form as u64,
            disagree: (!d.agree()) as u64,
        }
    }

    fn merge(self, o: Tally) -> Tally {
        Tally { trad: self.trad + o.trad, null: self.null + o.null, disagree: self.disagree + o.disagree }
    }
}

/// Draws `replicates` data sets under the configured truth and applies both
/// test forms at level `alpha`, each with its own critical value.
pub fn simulate_size_power(cfg: &SimConfig) -> Result<SimOutcome> {
    cfg.validate()?;
    let deciders = match cfg.scenario {
        Scenario::OneSampleT => Deciders::T(TCriticalValues::new(cfg.alpha, cfg.n)?),
        Scenario::NestedF { p1, p2 } => Deciders::F(FCriticalValues::new(cfg.alpha, Dims { n: cfg.n, p1, p2 })?),
        Scenario::Proportion { .. } => Deciders::Z(proportion::z_half_alpha(cfg.alpha)?),
    };
    let one = |i: u64| run_replicate(cfg, &deciders, i).map(Tally::from_pair);

    #[cfg(feature = "parallel")]
    let tally = {
        use rayon::prelude::*;
        (0..cfg.replicates)
            .into_par_iter()
            .map(one)
            .try_reduce(Tally::default, |a, b| Ok(a.merge(b)))?
    };
    #[cfg(not(feature = "parallel"))]
    let tally = (0..cfg.replicates).try_fold(Tally::default(), |acc, i| one(i).map(|t| acc.merge(t)))?;

    let reps = cfg.replicates as f64;
    Ok(SimOutcome {
        replicates: cfg.replicates,
        rejections_trad: tally.trad,
        rejections_null: tally.null,
        reject_rate_trad: tally.trad as f64 / reps,
        reject_rate_null: tally.null as f64 / reps,
        disagreements: tally.disagree,
    })
}

/// Kolmogorov-Smirnov distance between the empirical law of `values` and
/// a reference CDF.
pub fn ks_distance(values: &mut [f64], cdf: impl Fn(f64) -> Result<f64>) -> Result<f64> {
    values.sort_by(f64::total_cmp);
    let m = values.len() as f64;
    let mut d: f64 = 0.0;
    for (i, &v) in values.iter().enumerate() {
        let f = cdf(v)?;
        d = d.max(f - i as f64 / m).max((i + 1) as f64 / m - f);
    }
    Ok(d)
}

/// The statistic whose null law is Beta, and that Beta law.
fn null_scaled_stat(cfg: &SimConfig, index: u64) -> Result<f64> {
    let mut rng = replicate_rng(cfg.seed, index);
    match cfg.scenario {
        Scenario::OneSampleT => {
            let y = draw_t_sample(&mut rng, cfg.n, 0.0)?;
            let r = ttest::t_test(&y, 0.0)?;
            Ok(r.t0 * r.t0 / cfg.n as f64)
        }
        Scenario::NestedF { p1, p2 } => {
            let (spec, y) = draw_nested(&mut rng, cfg.n, p1, p2, 0.0)?;
            let r = linmodel::nested_f_test(&spec, &y)?;
            Ok(p2 as f64 * r.f_null / (cfg.n - p1) as f64)
        }
        Scenario::Proportion { .. } => unreachable!(),
    }
}

/// KS distance between the simulated null law of the scaled null-form
/// statistic (`T0^2 / n` or `p2 F_null / (n - p1)`) and its Beta reference.
pub fn null_law_check(cfg: &SimConfig) -> Result<f64> {
    cfg.validate()?;
    if cfg.effect != 0.0 {
        return Err(Error::Config("null law check needs effect = 0".into()));
    }
    let law = match cfg.scenario {
        Scenario::OneSampleT => ttest::t0_null_law(cfg.n),
        Scenario::NestedF { p1, p2 } => linmodel::f_null_law(Dims { n: cfg.n, p1, p2 }),
        Scenario::Proportion { .. } => {
            return Err(Error::Config("null law check applies to the t and F scenarios only".into()))
        }
    };
    let one = |i: u64| null_scaled_stat(cfg, i);

    #[cfg(feature = "parallel")]
    let values: Result<Vec<f64>> = {
        use rayon::prelude::*;
        (0..cfg.replicates).into_par_iter().map(one).collect()
    };
    #[cfg(not(feature = "parallel"))]
    let values: Result<Vec<f64>> = (0..cfg.replicates).map(one).collect();

    let mut values = values?;
    ks_distance(&mut values, |v| specfun::cdf(&law, v))
}

/// One-sided KS critical value at the 1% level, `1.63 / sqrt(m)`.
pub fn ks_critical_1pct(m: u64) -> f64 {
    1.63 / (m as f64).sqrt()
}

/// Convenience for the reference laws used above.
pub fn reference_law(cfg: &SimConfig) -> Option<DistParams> {
    match cfg.scenario {
        Scenario::OneSampleT => Some(ttest::t0_null_law(cfg.n)),
        Scenario::NestedF { p1, p2 } => Some(linmodel::f_null_law(Dims { n: cfg.n, p1, p2 })),
        Scenario::Proportion { .. } => None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg(scenario: Scenario, n: usize, effect: f64, replicates: u64) -> SimConfig {
        SimConfig { replicates, seed: 7, n, effect, alpha: 0.05, scenario }
    }

    #[test]
    fn single_replicate_sanity() {
        for sc in [Scenario::OneSampleT, Scenario::NestedF { p1: 1, p2: 2 }] {
            let out = simulate_size_power(&cfg(sc, 8, 0.3, 1)).unwrap();
            assert!(out.reject_rate_trad == 0.0 || out.reject_rate_trad == 1.0);
            assert_eq!(out.reject_rate_trad, out.reject_rate_null);
            assert_eq!(out.disagreements, 0);
        }
    }

    #[test]
    fn config_errors() {
        assert!(simulate_size_power(&cfg(Scenario::OneSampleT, 8, 0.0, 0)).is_err());
        assert!(null_law_check(&cfg(Scenario::OneSampleT, 8, 0.0, 0)).is_err());
        assert!(simulate_size_power(&cfg(Scenario::OneSampleT, 1, 0.0, 10)).is_err());
        assert!(simulate_size_power(&cfg(Scenario::NestedF { p1: 2, p2: 0 }, 10, 0.0, 10)).is_err());
        assert!(simulate_size_power(&cfg(Scenario::NestedF { p1: 3, p2: 2 }, 5, 0.0, 10)).is_err());
        assert!(simulate_size_power(&cfg(Scenario::Proportion { p0: 0.9 }, 5, 0.2, 10)).is_err());
        assert!(null_law_check(&cfg(Scenario::OneSampleT, 8, 0.5, 10)).is_err());
        assert!(null_law_check(&cfg(Scenario::Proportion { p0: 0.5 }, 8, 0.0, 10)).is_err());
    }

    #[test]
    fn reproducible_and_seed_sensitive() {
        let c = cfg(Scenario::NestedF { p1: 2, p2: 1 }, 12, 0.4, 300);
        let a = simulate_size_power(&c).unwrap();
        let b = simulate_size_power(&c).unwrap();
        assert_eq!(a, b);
        let k1 = null_law_check(&SimConfig { effect: 0.0, ..c }).unwrap();
        let k2 = null_law_check(&SimConfig { effect: 0.0, ..c }).unwrap();
        assert_eq!(k1.to_bits(), k2.to_bits());
        let other = simulate_size_power(&SimConfig { seed: 8, ..c }).unwrap();
        assert_ne!(a, other);
    }

    #[test]
    fn proportion_forms_can_disagree() {
        // Small n: the Wald and null-variance z tests are different tests.
        let out = simulate_size_power(&cfg(Scenario::Proportion { p0: 0.2 }, 15, 0.0, 4000)).unwrap();
        assert!(out.disagreements > 0);
    }

    #[test]
    fn ks_distance_of_exact_quantiles() {
        // midpoints of m equal-probability cells sit 1/(2m) from the CDF steps
        let m = 200;
        let mut v: Vec<f64> = (0..m).map(|i| (i as f64 + 0.5) / m as f64).collect();
        let d = ks_distance(&mut v, Ok).unwrap();
        assert!((d - 0.5 / m as f64).abs() < 1e-15);
    }

    #[test]
    fn frozen_outcome_is_independent_of_threading() {
        // same values with and without the `parallel` feature
        let c = SimConfig {
            replicates: 3000,
            seed: 2718,
            n: 12,
            effect: 0.35,
            alpha: 0.05,
            scenario: Scenario::NestedF { p1: 2, p2: 2 },
        };
        let out = simulate_size_power(&c).unwrap();
        assert_eq!((out.rejections_trad, out.rejections_null, out.disagreements), (568, 568, 0));
        let ks = null_law_check(&SimConfig { effect: 0.0, ..c }).unwrap();
        assert_eq!(ks.to_bits(), 0x3f91_8e7d_078e_9e40);
    }

    #[test]
    fn mix64_known_value() {
        // first SplitMix64 output for state 0
        assert_eq!(mix64(0), 0xe220_a839_7b1d_cdaf);
    }
}
