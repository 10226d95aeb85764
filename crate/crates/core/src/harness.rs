//! Experiment engine: a pool tracking a stochastic reference price through
//! per-step arbitrage, plus paired multi-replica fee sweeps.

use rayon::prelude::*;
use serde::Serialize;

use crate::arbitrage::execute_arbitrage;
use crate::error::{Error, Result};
use crate::pool::{validate_fee, PoolState, SwapDirection};
use crate::price_process::{generate_path, PathConfig, PricePath};
use crate::rng::derive_seed;

#[derive(Debug, Clone, Copy, Serialize)]
pub struct SimConfig {
    /// Initial pool quote; must match `path.p0`.
    pub pool_price0: f64,
    /// Invariant depth `L`; reserves start at `L/sqrt(p0)` and `L*sqrt(p0)`.
    pub liquidity: f64,
    pub fee: f64,
    pub flashloan_fee: f64,
    pub txn_cost: f64,
    pub path: PathConfig,
}

impl SimConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.pool_price0.is_finite() && self.pool_price0 > 0.0) {
            return Err(Error::InvalidParam {
                name: "pool_price0",
                reason: "must be finite and positive",
                value: self.pool_price0,
            });
        }
        if !(self.liquidity.is_finite() && self.liquidity > 0.0) {
            return Err(Error::InvalidParam {
                name: "liquidity",
                reason: "must be finite and positive",
                value: self.liquidity,
            });
        }
        validate_fee("fee", self.fee)?;
        if !(self.flashloan_fee.is_finite() && self.flashloan_fee >= 0.0) {
            return Err(Error::InvalidParam {
                name: "flashloan_fee",
                reason: "must be finite and non-negative",
                value: self.flashloan_fee,
            });
        }
        if !(self.txn_cost.is_finite() && self.txn_cost >= 0.0) {
            return Err(Error::InvalidParam {
                name: "txn_cost",
                reason: "must be finite and non-negative",
                value: self.txn_cost,
            });
        }
        self.path.validate()?;
        if (self.pool_price0 - self.path.p0).abs() > 1e-12 * self.pool_price0 {
            return Err(Error::InvalidParam {
                name: "pool_price0",
                reason: "must equal the path's initial price",
                value: self.pool_price0,
            });
        }
        Ok(())
    }
}

/// Telemetry for one simulation step, captured after the arbitrage check.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct RunRecord {
    /// 1-based step index.
    pub step: usize,
    pub p_cex: f64,
    /// Pool quote after any arbitrage this step.
    pub spot: f64,
    pub reserve_a: f64,
    pub reserve_b: f64,
    pub triggered: bool,
    pub direction: Option<SwapDirection>,
    pub flashloan: f64,
    /// Arbitrageur's profit in the flashloan token of this step.
    pub arb_profit: f64,
    /// Pool fee take in token A units; fees collected in token B are
    /// converted at this step's reference price.
    pub fee_revenue: f64,
    pub cum_fee_revenue: f64,
}

/// Per-fee aggregate over the sweep replicas.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct FeeStat {
    pub fee: f64,
    /// Mean final cumulative fee revenue across replicas.
    pub mean_revenue: f64,
    pub stderr: f64,
    pub mean_triggers: f64,
    pub replicas: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct SweepStats {
    pub per_fee: Vec<FeeStat>,
}

/// Aggregates of one run's record stream.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct RunSummary {
    pub steps: usize,
    pub triggers: usize,
    pub total_revenue: f64,
    pub total_arb_profit: f64,
    /// Mean steps between triggers (first gap counted from step 0);
    /// absent when nothing triggered.
    pub mean_inter_trigger_gap: Option<f64>,
}

/// Runs the arbitrage loop over a pre-generated path. The pool starts
/// pegged to `prices[0]`; each subsequent price gets one arbitrage
/// opportunity, and the pool state carries across steps.
pub fn run_single_on_path(cfg: &SimConfig, path: &PricePath) -> Result<Vec<RunRecord>> {
    cfg.validate()?;
    let prices = path.prices();
    if (prices[0] - cfg.pool_price0).abs() > 1e-12 * cfg.pool_price0 {
        return Err(Error::InvalidParam {
            name: "path",
            reason: "initial price must equal pool_price0",
            value: prices[0],
        });
    }
    let mut pool = PoolState::from_liquidity(cfg.liquidity, cfg.pool_price0, cfg.fee)?;
    let mut records = Vec::with_capacity(path.n_steps());
    let mut cum_fee_revenue = 0.0;
    for (i, &p_cex) in prices[1..].iter().enumerate() {
        let outcome = execute_arbitrage(&mut pool, p_cex, cfg.flashloan_fee, cfg.txn_cost)?;
        let fee_revenue = match outcome.direction {
            Some(SwapDirection::BForA) => outcome.revenue / p_cex,
            _ => outcome.revenue,
        };
        cum_fee_revenue += fee_revenue;
        records.push(RunRecord {
            step: i + 1,
            p_cex,
            spot: pool.spot_price(),
            reserve_a: pool.reserve_a(),
            reserve_b: pool.reserve_b(),
            triggered: outcome.triggered,
            direction: outcome.direction,
            flashloan: outcome.flashloan,
            arb_profit: outcome.profit,
            fee_revenue,
            cum_fee_revenue,
        });
    }
    Ok(records)
}

/// Generates the configured path and runs the arbitrage loop over it.
pub fn run_single(cfg: &SimConfig) -> Result<Vec<RunRecord>> {
    cfg.validate()?;
    let path = generate_path(&cfg.path)?;
    run_single_on_path(cfg, &path)
}

/// Runs every fee over the same per-replica paths (common random numbers,
/// so fee comparisons are paired) and aggregates final revenue and trigger
/// counts. Replica `r` uses the path seed `derive_seed(master_seed, r)`;
/// `cfg.fee` itself is ignored in favor of `fees`.
pub fn fee_sweep(
    cfg: &SimConfig,
    fees: &[f64],
    replicas: usize,
    master_seed: u64,
) -> Result<SweepStats> {
    if fees.is_empty() {
        return Err(Error::InsufficientData {
            what: "fees",
            min: 1,
            got: 0,
        });
    }
    for &fee in fees {
        validate_fee("fees", fee)?;
    }
    if replicas < 2 {
        return Err(Error::InsufficientData {
            what: "replicas",
            min: 2,
            got: replicas,
        });
    }
    cfg.validate()?;
    // [replica][fee] -> (final revenue, trigger count); replica order is
    // fixed by index, so aggregation below is schedule-independent.
    let per_replica: Vec<Vec<(f64, usize)>> = (0..replicas)
        .into_par_iter()
        .map(|r| {
            let path_cfg = PathConfig {
                seed: derive_seed(master_seed, r as u64),
                ..cfg.path
            };
            let path = generate_path(&path_cfg)?;
            fees.iter()
                .map(|&fee| {
                    let run_cfg = SimConfig {
                        fee,
                        path: path_cfg,
                        ..*cfg
                    };
                    let records = run_single_on_path(&run_cfg, &path)?;
                    let last = records.last().expect("n_steps >= 1");
                    let triggers = records.iter().filter(|rec| rec.triggered).count();
                    Ok((last.cum_fee_revenue, triggers))
                })
                .collect()
        })
        .collect::<Result<_>>()?;
    let n = replicas as f64;
    let per_fee = fees
        .iter()
        .enumerate()
        .map(|(j, &fee)| {
            let revenues: Vec<f64> = per_replica.iter().map(|row| row[j].0).collect();
            let mean_revenue = revenues.iter().sum::<f64>() / n;
            let ss = revenues
                .iter()
                .map(|x| (x - mean_revenue) * (x - mean_revenue))
                .sum::<f64>();
            let stderr = (ss / (n - 1.0)).sqrt() / n.sqrt();
            let mean_triggers =
                per_replica.iter().map(|row| row[j].1 as f64).sum::<f64>() / n;
            FeeStat {
                fee,
                mean_revenue,
                stderr,
                mean_triggers,
                replicas,
            }
        })
        .collect();
    Ok(SweepStats { per_fee })
}

/// Pure aggregation of a record stream.
pub fn summarize(records: &[RunRecord]) -> Result<RunSummary> {
    let last = records.last().ok_or(Error::InsufficientData {
        what: "records",
        min: 1,
        got: 0,
    })?;
    let trigger_steps: Vec<usize> = records
        .iter()
        .filter(|r| r.triggered)
        .map(|r| r.step)
        .collect();
    let mean_inter_trigger_gap = if trigger_steps.is_empty() {
        None
    } else {
        let mut prev = 0usize;
        let mut total = 0usize;
        for &t in &trigger_steps {
            total += t - prev;
            prev = t;
        }
        Some(total as f64 / trigger_steps.len() as f64)
    };
    Ok(RunSummary {
        steps: records.len(),
        triggers: trigger_steps.len(),
        total_revenue: last.cum_fee_revenue,
        total_arb_profit: records.iter().map(|r| r.arb_profit).sum(),
        mean_inter_trigger_gap,
    })
}
