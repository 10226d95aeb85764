//! Seeded Brownian reference-price paths with deterministic replay.

use rand::Rng;
use rand_distr::StandardNormal;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::rng::stream_rng;

/// How a per-step Gaussian shock is applied to the price.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum PathMode {
    /// `p_{t+1} = p_t * (1 + mu + sigma*eps)`.
    Multiplicative,
    /// `p_{t+1} = p_t + mu + sigma*eps`.
    Additive,
}

impl PathMode {
    pub fn as_str(self) -> &'static str {
        match self {
            PathMode::Multiplicative => "multiplicative",
            PathMode::Additive => "additive",
        }
    }
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct PathConfig {
    pub n_steps: usize,
    /// Per-step volatility.
    pub sigma: f64,
    /// Per-step drift.
    pub mu: f64,
    /// Initial price.
    pub p0: f64,
    pub mode: PathMode,
    pub seed: u64,
}

impl PathConfig {
    pub fn validate(&self) -> Result<()> {
        if self.n_steps < 1 {
            return Err(Error::InsufficientData {
                what: "path steps",
                min: 1,
                got: self.n_steps,
            });
        }
        if !(self.sigma.is_finite() && self.sigma >= 0.0) {
            return Err(Error::InvalidParam {
                name: "sigma",
                reason: "must be finite and non-negative",
                value: self.sigma,
            });
        }
        if !self.mu.is_finite() {
            return Err(Error::InvalidParam {
                name: "mu",
                reason: "must be finite",
                value: self.mu,
            });
        }
        if !(self.p0.is_finite() && self.p0 > 0.0) {
            return Err(Error::InvalidParam {
                name: "p0",
                reason: "must be finite and positive",
                value: self.p0,
            });
        }
        Ok(())
    }
}

/// A realized price series: `n_steps + 1` strictly positive prices with
/// `prices[0] = p0`.
#[derive(Debug, Clone, Serialize)]
pub struct PricePath {
    prices: Vec<f64>,
}

impl PricePath {
    /// Wraps an externally built series, enforcing positivity.
    pub fn from_prices(prices: Vec<f64>) -> Result<Self> {
        if prices.is_empty() {
            return Err(Error::InsufficientData {
                what: "price series",
                min: 1,
                got: 0,
            });
        }
        for &p in &prices {
            if !(p.is_finite() && p > 0.0) {
                return Err(Error::InvalidParam {
                    name: "price",
                    reason: "must be finite and positive",
                    value: p,
                });
            }
        }
        Ok(PricePath { prices })
    }

    pub fn prices(&self) -> &[f64] {
        &self.prices
    }

    /// Number of steps, i.e. `prices.len() - 1`.
    pub fn n_steps(&self) -> usize {
        self.prices.len() - 1
    }
}

const MAX_REDRAWS: usize = 1000;

/// Generates a path from the config's own seed. Identical configs produce
/// bit-identical paths. Steps that would move the price to zero or below
/// are redrawn rather than clamped, so increments stay unbiased; a step
/// that fails 1000 consecutive draws aborts the path.
pub fn generate_path(cfg: &PathConfig) -> Result<PricePath> {
    cfg.validate()?;
    let mut rng = stream_rng(cfg.seed, 0);
    let mut prices = Vec::with_capacity(cfg.n_steps + 1);
    let mut p = cfg.p0;
    prices.push(p);
    for _ in 0..cfg.n_steps {
        let mut redraws = 0;
        p = loop {
            let eps: f64 = rng.sample(StandardNormal);
            let candidate = match cfg.mode {
                PathMode::Multiplicative => p * (1.0 + cfg.mu + cfg.sigma * eps),
                PathMode::Additive => p + cfg.mu + cfg.sigma * eps,
            };
            if candidate.is_finite() && candidate > 0.0 {
                break candidate;
            }
            redraws += 1;
            if redraws >= MAX_REDRAWS {
                return Err(Error::RedrawLimit { attempts: MAX_REDRAWS });
            }
        };
        prices.push(p);
    }
    Ok(PricePath { prices })
}

/// Root-mean-square displacement from the start, per step index, across a
/// set of equal-length paths.
pub fn rms_displacement(paths: &[PricePath]) -> Result<Vec<(usize, f64)>> {
    if paths.len() < 2 {
        return Err(Error::InsufficientData {
            what: "paths",
            min: 2,
            got: paths.len(),
        });
    }
    let len = paths[0].prices.len();
    for path in paths {
        if path.prices.len() != len {
            return Err(Error::InsufficientData {
                what: "equal-length paths",
                min: len,
                got: path.prices.len(),
            });
        }
    }
    let n = paths.len() as f64;
    Ok((0..len)
        .map(|t| {
            let mean_sq = paths
                .iter()
                .map(|path| {
                    let d = path.prices[t] - path.prices[0];
                    d * d
                })
                .sum::<f64>()
                / n;
            (t, mean_sq.sqrt())
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::{assert_abs_diff_eq, assert_relative_eq};

    fn config(mode: PathMode) -> PathConfig {
        PathConfig {
            n_steps: 100,
            sigma: 0.01,
            mu: 0.0,
            p0: 1.0,
            mode,
            seed: 11,
        }
    }

    #[test]
    fn no_noise_no_drift_is_constant() {
        let cfg = PathConfig {
            sigma: 0.0,
            ..config(PathMode::Multiplicative)
        };
        let path = generate_path(&cfg).unwrap();
        assert_eq!(path.n_steps(), 100);
        assert!(path.prices().iter().all(|&p| p == 1.0));
    }

    #[test]
    fn pure_additive_drift_is_linear() {
        let cfg = PathConfig {
            n_steps: 3,
            sigma: 0.0,
            mu: 0.01,
            p0: 1.0,
            mode: PathMode::Additive,
            seed: 0,
        };
        let path = generate_path(&cfg).unwrap();
        let expected = [1.0, 1.01, 1.02, 1.03];
        for (got, want) in path.prices().iter().zip(expected) {
            assert_abs_diff_eq!(*got, want, epsilon = 1e-15);
        }
    }

    #[test]
    fn same_seed_same_path() {
        let cfg = config(PathMode::Multiplicative);
        let a = generate_path(&cfg).unwrap();
        let b = generate_path(&cfg).unwrap();
        assert_eq!(a.prices(), b.prices());
    }

    #[test]
    fn different_seeds_differ() {
        let a = generate_path(&config(PathMode::Multiplicative)).unwrap();
        let b = generate_path(&PathConfig {
            seed: 12,
            ..config(PathMode::Multiplicative)
        })
        .unwrap();
        assert_ne!(a.prices()[1..], b.prices()[1..]);
    }

    #[test]
    fn prices_stay_positive() {
        // Aggressive volatility for the additive mode at a tiny price:
        // redraws must keep every price positive.
        let cfg = PathConfig {
            n_steps: 2000,
            sigma: 0.5,
            mu: 0.0,
            p0: 0.3,
            mode: PathMode::Additive,
            seed: 5,
        };
        let path = generate_path(&cfg).unwrap();
        assert!(path.prices().iter().all(|&p| p > 0.0));
    }

    #[test]
    fn increment_moments_match_spec() {
        // Sample std of one-step increments across many short paths.
        let mut sum = 0.0;
        let mut sum_sq = 0.0;
        let mut count = 0usize;
        for seed in 0..1000 {
            let cfg = PathConfig {
                n_steps: 1000,
                sigma: 0.001,
                mu: 0.0,
                p0: 1.0,
                mode: PathMode::Additive,
                seed,
            };
            let path = generate_path(&cfg).unwrap();
            for w in path.prices().windows(2) {
                let d = w[1] - w[0];
                sum += d;
                sum_sq += d * d;
                count += 1;
            }
        }
        let n = count as f64;
        let mean = sum / n;
        let var = (sum_sq - n * mean * mean) / (n - 1.0);
        let std = var.sqrt();
        // stderr of a sample std is roughly sigma/sqrt(2n).
        let tol = 3.0 * 0.001 / (2.0 * n).sqrt();
        assert_abs_diff_eq!(std, 0.001, epsilon = tol);
        assert_abs_diff_eq!(mean, 0.0, epsilon = 3.0 * 0.001 / n.sqrt());
    }

    #[test]
    fn rms_of_constant_paths_is_zero() {
        let cfg = PathConfig {
            sigma: 0.0,
            ..config(PathMode::Multiplicative)
        };
        let paths = vec![generate_path(&cfg).unwrap(), generate_path(&cfg).unwrap()];
        let rms = rms_displacement(&paths).unwrap();
        assert!(rms.iter().all(|&(_, r)| r == 0.0));
    }

    #[test]
    fn rms_of_pure_drift_is_linear() {
        let cfg = PathConfig {
            n_steps: 50,
            sigma: 0.0,
            mu: 0.002,
            p0: 1.0,
            mode: PathMode::Additive,
            seed: 0,
        };
        let paths = vec![generate_path(&cfg).unwrap(), generate_path(&cfg).unwrap()];
        let rms = rms_displacement(&paths).unwrap();
        for &(t, r) in &rms {
            assert_relative_eq!(r, 0.002 * t as f64, max_relative = 1e-9, epsilon = 1e-15);
        }
    }

    #[test]
    fn rms_rejects_bad_input() {
        let cfg = config(PathMode::Multiplicative);
        let one = generate_path(&cfg).unwrap();
        assert!(rms_displacement(std::slice::from_ref(&one)).is_err());
        let short = generate_path(&PathConfig { n_steps: 5, ..cfg }).unwrap();
        assert!(rms_displacement(&[one, short]).is_err());
    }

    #[test]
    fn rejects_invalid_configs() {
        let base = config(PathMode::Multiplicative);
        assert!(generate_path(&PathConfig { n_steps: 0, ..base }).is_err());
        assert!(generate_path(&PathConfig { sigma: -0.1, ..base }).is_err());
        assert!(generate_path(&PathConfig { p0: 0.0, ..base }).is_err());
        assert!(generate_path(&PathConfig { mu: f64::NAN, ..base }).is_err());
    }

    #[test]
    fn from_prices_validates() {
        assert!(PricePath::from_prices(vec![]).is_err());
        assert!(PricePath::from_prices(vec![1.0, -2.0]).is_err());
        assert!(PricePath::from_prices(vec![1.0, f64::INFINITY]).is_err());
        let path = PricePath::from_prices(vec![1.0, 1.1, 0.9]).unwrap();
        assert_eq!(path.n_steps(), 2);
    }
}
