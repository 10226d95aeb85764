//! Unit-step random walk with a threshold-k arbitrage reward scheme.
//!
//! The walk moves up with probability `p_up`, down otherwise; it cannot
//! stand still. Whenever the level drifts `k` or more away from the point
//! of the last trigger, a reward of `k^2` is booked and the reference point
//! resets to the current level. For the symmetric walk the mean gap between
//! triggers is exactly `k^2`, so the per-step reward rate is independent
//! of `k`.

use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::rng::{derive_seed, stream_rng};

#[derive(Debug, Clone, Copy, Serialize)]
pub struct WalkConfig {
    /// Probability of a +1 step.
    pub p_up: f64,
    pub n_steps: usize,
    /// Trigger when the level is at least this far from the last trigger.
    pub threshold_k: u32,
    pub seed: u64,
}

impl WalkConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.p_up.is_finite() && (0.0..=1.0).contains(&self.p_up)) {
            return Err(Error::InvalidParam {
                name: "p_up",
                reason: "must lie in [0, 1]",
                value: self.p_up,
            });
        }
        if self.n_steps < 1 {
            return Err(Error::InsufficientData {
                what: "walk steps",
                min: 1,
                got: self.n_steps,
            });
        }
        if self.threshold_k < 1 {
            return Err(Error::InvalidParam {
                name: "threshold_k",
                reason: "must be at least 1",
                value: self.threshold_k as f64,
            });
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct WalkResult {
    /// Level after each step, `levels[0] = 0`, length `n_steps + 1`.
    pub levels: Vec<i64>,
    /// `threshold_k^2` per trigger.
    pub cumulative_reward: f64,
    /// 1-based step indices at which triggers fired.
    pub trigger_steps: Vec<usize>,
    /// Steps between consecutive triggers (first gap measured from step 0).
    pub inter_trigger_gaps: Vec<usize>,
}

/// Per-threshold summary from `compare_strategies`.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct StrategyStats {
    pub threshold_k: u32,
    pub mean_reward: f64,
    pub stderr: f64,
    pub replicas: usize,
}

fn run_steps(steps: impl Iterator<Item = i64>, n_steps: usize, k: u32) -> WalkResult {
    let reward_per_trigger = (k as f64) * (k as f64);
    let mut levels = Vec::with_capacity(n_steps + 1);
    levels.push(0i64);
    let mut level = 0i64;
    let mut last_arb = 0i64;
    let mut cumulative_reward = 0.0;
    let mut trigger_steps = Vec::new();
    let mut inter_trigger_gaps = Vec::new();
    let mut last_trigger = 0usize;
    for (i, step) in steps.enumerate() {
        let t = i + 1;
        level += step;
        levels.push(level);
        if level.abs_diff(last_arb) >= u64::from(k) {
            cumulative_reward += reward_per_trigger;
            trigger_steps.push(t);
            inter_trigger_gaps.push(t - last_trigger);
            last_trigger = t;
            last_arb = level;
        }
    }
    WalkResult {
        levels,
        cumulative_reward,
        trigger_steps,
        inter_trigger_gaps,
    }
}

/// Runs one seeded walk.
pub fn simulate_walk(cfg: &WalkConfig) -> Result<WalkResult> {
    cfg.validate()?;
    let mut rng = stream_rng(cfg.seed, 0);
    let steps = (0..cfg.n_steps).map(|_| if rng.random_bool(cfg.p_up) { 1 } else { -1 });
    Ok(run_steps(steps, cfg.n_steps, cfg.threshold_k))
}

/// Monte Carlo estimate of the mean gap between triggers (the first-passage
/// time of `±k` from the reset level), pooled over independent replicas.
pub fn mean_hitting_time(
    k: u32,
    p_up: f64,
    replicas: usize,
    n_steps: usize,
    seed: u64,
) -> Result<(f64, f64)> {
    if replicas < 2 {
        return Err(Error::InsufficientData {
            what: "replicas",
            min: 2,
            got: replicas,
        });
    }
    let gaps: Vec<Vec<usize>> = (0..replicas)
        .into_par_iter()
        .map(|r| {
            let cfg = WalkConfig {
                p_up,
                n_steps,
                threshold_k: k,
                seed: derive_seed(seed, r as u64),
            };
            simulate_walk(&cfg).map(|w| w.inter_trigger_gaps)
        })
        .collect::<Result<_>>()?;
    let mut count = 0usize;
    let mut sum = 0.0;
    for replica in &gaps {
        count += replica.len();
        sum += replica.iter().map(|&g| g as f64).sum::<f64>();
    }
    if count < 2 {
        return Err(Error::InsufficientData {
            what: "observed triggers",
            min: 2,
            got: count,
        });
    }
    let mean = sum / count as f64;
    let ss = gaps
        .iter()
        .flat_map(|replica| replica.iter())
        .map(|&g| {
            let d = g as f64 - mean;
            d * d
        })
        .sum::<f64>();
    let stderr = (ss / (count as f64 - 1.0)).sqrt() / (count as f64).sqrt();
    Ok((mean, stderr))
}

/// Exact mean first-passage time of `±k` for the symmetric walk, via the
/// tridiagonal linear system `h(x) = 1 + (h(x-1) + h(x+1))/2` on
/// `x in (-k, k)` with absorbing boundaries `h(±k) = 0`, solved by the
/// Thomas algorithm. Equals `k^2`.
pub fn exact_hitting_time(k: u32) -> f64 {
    let n = (2 * k - 1) as usize;
    // System: -0.5*h(x-1) + h(x) - 0.5*h(x+1) = 1.
    let mut upper = vec![0.0; n];
    let mut rhs = vec![0.0; n];
    upper[0] = -0.5;
    rhs[0] = 1.0;
    for i in 1..n {
        let denom = 1.0 - (-0.5) * upper[i - 1];
        upper[i] = -0.5 / denom;
        rhs[i] = (1.0 + 0.5 * rhs[i - 1]) / denom;
    }
    let mut h = vec![0.0; n];
    h[n - 1] = rhs[n - 1];
    for i in (0..n - 1).rev() {
        h[i] = rhs[i] - upper[i] * h[i + 1];
    }
    // Index of x = 0 among x = -k+1 ... k-1.
    h[(k - 1) as usize]
}

/// Mean and standard error of the cumulative reward for each threshold,
/// over independent seeded batches of `replicas` walks.
pub fn compare_strategies(
    n_steps: usize,
    replicas: usize,
    ks: &[u32],
    seed: u64,
) -> Result<Vec<StrategyStats>> {
    if replicas < 2 {
        return Err(Error::InsufficientData {
            what: "replicas",
            min: 2,
            got: replicas,
        });
    }
    if ks.is_empty() {
        return Err(Error::InsufficientData {
            what: "threshold list",
            min: 1,
            got: 0,
        });
    }
    ks.iter()
        .map(|&k| {
            let batch_seed = derive_seed(seed, u64::from(k));
            let rewards: Vec<f64> = (0..replicas)
                .into_par_iter()
                .map(|r| {
                    let cfg = WalkConfig {
                        p_up: 0.5,
                        n_steps,
                        threshold_k: k,
                        seed: derive_seed(batch_seed, r as u64),
                    };
                    simulate_walk(&cfg).map(|w| w.cumulative_reward)
                })
                .collect::<Result<_>>()?;
            let n = rewards.len() as f64;
            let mean = rewards.iter().sum::<f64>() / n;
            let ss = rewards.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>();
            let stderr = (ss / (n - 1.0)).sqrt() / n.sqrt();
            Ok(StrategyStats {
                threshold_k: k,
                mean_reward: mean,
                stderr,
                replicas,
            })
        })
        .collect()
}
