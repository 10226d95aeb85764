//! Deterministic simulation laboratory for constant-product market making
//! under arbitrage-only order flow.
//!
//! The library is organized around five pieces:
//!
//! - [`pool`]: the constant-product state machine with extracted fees;
//! - [`arbitrage`]: closed-form optimal arbitrage against a reference
//!   venue, with an independent numeric maximizer as cross-check;
//! - [`price_process`]: seeded Brownian reference-price paths;
//! - [`random_walk`]: the threshold-reward walk that explains why fee
//!   revenue is insensitive to the fee level;
//! - [`harness`]: single runs and paired fee sweeps over all of the above.
//!
//! Everything stochastic is driven by explicit 64-bit seeds through
//! [`rng`]; identical configurations reproduce identical results across
//! runs, platforms, and thread counts.

pub mod arbitrage;
pub mod error;
pub mod harness;
pub mod pool;
pub mod price_process;
pub mod random_walk;
pub mod rng;

pub use arbitrage::{
    approx_profit, approx_revenue, arb_condition, execute_arbitrage, numeric_argmax,
    optimal_fee, optimal_flashloan, optimal_profit, optimal_revenue, profit_at, threshold,
    ArbOutcome, ArbParams,
};
pub use error::{Error, Result};
pub use harness::{
    fee_sweep, run_single, run_single_on_path, summarize, FeeStat, RunRecord, RunSummary,
    SimConfig, SweepStats,
};
pub use pool::{PoolState, SwapDirection, SwapReceipt};
pub use price_process::{generate_path, rms_displacement, PathConfig, PathMode, PricePath};
pub use random_walk::{
    compare_strategies, exact_hitting_time, mean_hitting_time, simulate_walk, StrategyStats,
    WalkConfig, WalkResult,
};
