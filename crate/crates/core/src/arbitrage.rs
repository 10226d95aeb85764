//! Optimal flashloan arbitrage against an infinitely liquid reference venue.
//!
//! A cycle borrows `u` of the cheap token, swaps it through the pool, sells
//! the proceeds at the reference price, and repays the loan plus its fee.
//! With `g = 1 - fee` the profit is
//!
//! `P(u) = alpha*g*u / (1 + p_i*u*g) - u*(1 + flashloan_fee) - txn_cost`
//!
//! where `alpha` is the pool/reference price ratio in the trade's favor and
//! `p_i` the reciprocal of the incoming reserve. The closed-form optimum is
//! exposed alongside an independent golden-section maximizer so each can
//! check the other.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::pool::{validate_fee, PoolState, SwapDirection};

/// Parameters of a single arbitrage opportunity, already reduced to the
/// trade's own frame: `alpha` is the favorable price ratio and
/// `price_impact` the reciprocal of the incoming reserve.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct ArbParams {
    pub alpha: f64,
    pub fee: f64,
    pub flashloan_fee: f64,
    pub price_impact: f64,
    pub txn_cost: f64,
}

impl ArbParams {
    pub fn validate(&self) -> Result<()> {
        let check = |cond: bool, name: &'static str, reason: &'static str, value: f64| {
            if cond {
                Ok(())
            } else {
                Err(Error::InvalidParam { name, reason, value })
            }
        };
        check(
            self.alpha.is_finite() && self.alpha > 0.0,
            "alpha",
            "must be finite and positive",
            self.alpha,
        )?;
        validate_fee("fee", self.fee)?;
        check(
            self.flashloan_fee.is_finite() && self.flashloan_fee >= 0.0,
            "flashloan_fee",
            "must be finite and non-negative",
            self.flashloan_fee,
        )?;
        check(
            self.price_impact.is_finite() && self.price_impact > 0.0,
            "price_impact",
            "must be finite and positive",
            self.price_impact,
        )?;
        check(
            self.txn_cost.is_finite() && self.txn_cost >= 0.0,
            "txn_cost",
            "must be finite and non-negative",
            self.txn_cost,
        )
    }
}

/// Result of evaluating one arbitrage opportunity against a pool.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct ArbOutcome {
    /// Trade direction; absent when not triggered.
    pub direction: Option<SwapDirection>,
    /// Flashloan size in the incoming token.
    pub flashloan: f64,
    /// Arbitrageur's net gain in the incoming token.
    pub profit: f64,
    /// Pool's fee take, `flashloan * fee`, in the incoming token.
    pub revenue: f64,
    pub triggered: bool,
}

impl ArbOutcome {
    fn skipped() -> Self {
        ArbOutcome {
            direction: None,
            flashloan: 0.0,
            profit: 0.0,
            revenue: 0.0,
            triggered: false,
        }
    }
}

/// Minimum price ratio at which a round trip can profit: `(1 + f_fl)/(1 - f)`.
pub fn threshold(fee: f64, flashloan_fee: f64) -> f64 {
    (1.0 + flashloan_fee) / (1.0 - fee)
}

/// Whether the ratio clears the profitability threshold (strictly).
pub fn arb_condition(alpha: f64, fee: f64, flashloan_fee: f64) -> bool {
    alpha > threshold(fee, flashloan_fee)
}

fn validated_closed_form_input(p: &ArbParams) -> Result<()> {
    p.validate()?;
    if p.txn_cost != 0.0 {
        return Err(Error::ClosedFormTxnCost { txn_cost: p.txn_cost });
    }
    if !arb_condition(p.alpha, p.fee, p.flashloan_fee) {
        return Err(Error::NoArbitrage {
            alpha: p.alpha,
            threshold: threshold(p.fee, p.flashloan_fee),
        });
    }
    Ok(())
}

/// `sqrt(alpha*(1-f)/(1+f_fl))`, the scale factor shared by the closed forms.
fn root_ratio(p: &ArbParams) -> f64 {
    (p.alpha * (1.0 - p.fee) / (1.0 + p.flashloan_fee)).sqrt()
}

/// Profit-maximizing flashloan size, `(s - 1) / (p_i*(1 - f))` with
/// `s = sqrt(alpha*(1-f)/(1+f_fl))`. Requires `txn_cost = 0`.
pub fn optimal_flashloan(p: &ArbParams) -> Result<f64> {
    validated_closed_form_input(p)?;
    Ok((root_ratio(p) - 1.0) / (p.price_impact * (1.0 - p.fee)))
}

/// Profit at the optimum, `(1 + f_fl)*(s - 1)^2 / (p_i*(1 - f))`.
pub fn optimal_profit(p: &ArbParams) -> Result<f64> {
    validated_closed_form_input(p)?;
    let s = root_ratio(p);
    Ok((1.0 + p.flashloan_fee) * (s - 1.0) * (s - 1.0) / (p.price_impact * (1.0 - p.fee)))
}

/// Pool revenue at the optimum: the fee charged on the optimal flashloan.
pub fn optimal_revenue(p: &ArbParams) -> Result<f64> {
    Ok(optimal_flashloan(p)? * p.fee)
}

fn profit_unchecked(p: &ArbParams, flashloan: f64) -> f64 {
    let g = 1.0 - p.fee;
    p.alpha * g * flashloan / (1.0 + p.price_impact * flashloan * g)
        - flashloan * (1.0 + p.flashloan_fee)
        - p.txn_cost
}

/// Profit of a cycle with the given flashloan size; valid on either side of
/// the threshold and for any `txn_cost`.
pub fn profit_at(p: &ArbParams, flashloan: f64) -> Result<f64> {
    p.validate()?;
    if !(flashloan.is_finite() && flashloan >= 0.0) {
        return Err(Error::InvalidParam {
            name: "flashloan",
            reason: "must be finite and non-negative",
            value: flashloan,
        });
    }
    Ok(profit_unchecked(p, flashloan))
}

const GOLDEN_RATIO_CONJUGATE: f64 = 0.618_033_988_749_894_9;
const ARGMAX_REL_TOL: f64 = 1e-10;
const ARGMAX_MAX_ITERS: usize = 300;

/// Independent numeric maximizer: golden-section search of the profit curve
/// over `[0, upper]`, where `upper` is twice the fee-free flashloan that
/// would align the post-swap quote with the reference price,
/// `2*(sqrt(alpha) - 1)/p_i`. Converges the bracket to a relative width of
/// 1e-10, returns its midpoint, and falls back to `(0, profit at 0)` when
/// no trade makes money. Unlike the closed forms this supports
/// `txn_cost > 0`.
pub fn numeric_argmax(p: &ArbParams) -> (f64, f64) {
    debug_assert!(p.validate().is_ok());
    let upper = 2.0 * (p.alpha.sqrt() - 1.0) / p.price_impact;
    if upper.is_nan() || upper <= 0.0 {
        return (0.0, profit_unchecked(p, 0.0));
    }
    let gross = p.alpha * (1.0 - p.fee);
    let c = p.price_impact * (1.0 - p.fee);
    let cost = 1.0 + p.flashloan_fee;
    let mut a = 0.0f64;
    let mut b = upper;
    let mut x1 = b - GOLDEN_RATIO_CONJUGATE * (b - a);
    let mut x2 = a + GOLDEN_RATIO_CONJUGATE * (b - a);
    for _ in 0..ARGMAX_MAX_ITERS {
        if b - a <= ARGMAX_REL_TOL * b {
            break;
        }
        // profit(x2) - profit(x1) rearranges to
        // (x2 - x1) * (gross/((1 + c*x1)*(1 + c*x2)) - cost), which has no
        // cancellation: comparing through it keeps the bracketing decisions
        // reliable on the flat top of the curve, where comparing the two
        // profit values directly drowns in roundoff well before the 1e-10
        // target width.
        if gross / ((1.0 + c * x1) * (1.0 + c * x2)) > cost {
            a = x1;
            x1 = x2;
            x2 = a + GOLDEN_RATIO_CONJUGATE * (b - a);
        } else {
            b = x2;
            x2 = x1;
            x1 = b - GOLDEN_RATIO_CONJUGATE * (b - a);
        }
    }
    let best = 0.5 * (a + b);
    let profit = profit_unchecked(p, best);
    if profit > 0.0 {
        (best, profit)
    } else {
        (0.0, profit_unchecked(p, 0.0))
    }
}

/// Small-spread approximation of the arbitrageur's optimal profit,
/// `(delta_alpha - fee)^2 / (4*p_i)`.
pub fn approx_profit(delta_alpha: f64, fee: f64, price_impact: f64) -> f64 {
    let edge = delta_alpha - fee;
    edge * edge / (4.0 * price_impact)
}

/// Small-spread approximation of the pool's optimal revenue,
/// `fee*(delta_alpha - fee) / (2*p_i)`.
pub fn approx_revenue(delta_alpha: f64, fee: f64, price_impact: f64) -> f64 {
    fee * (delta_alpha - fee) / (2.0 * price_impact)
}

/// Revenue-maximizing fee for a given price spread in the small-spread
/// regime, together with the pool's retained share of the total gain at
/// that fee. The retention is `R/(R + P) = 2/3`, independent of the spread.
pub fn optimal_fee(delta_alpha: f64) -> Result<(f64, f64)> {
    if !(delta_alpha.is_finite() && delta_alpha > 0.0) {
        return Err(Error::InvalidParam {
            name: "delta_alpha",
            reason: "must be finite and positive",
            value: delta_alpha,
        });
    }
    let fee = delta_alpha / 2.0;
    // The 1/p_i scale cancels in the ratio; evaluate with p_i = 1.
    let revenue = approx_revenue(delta_alpha, fee, 1.0);
    let profit = approx_profit(delta_alpha, fee, 1.0);
    Ok((fee, revenue / (revenue + profit)))
}

/// Evaluates one arbitrage opportunity against the pool and, if profitable,
/// executes the optimal swap in the profitable direction.
///
/// With `alpha = spot/p_cex`: `alpha` above the threshold trades A for B;
/// `1/alpha` above it trades B for A with the mirrored ratio and impact.
/// Sizing uses the closed forms when `txn_cost = 0` and the numeric search
/// otherwise (triggering only on strictly positive profit).
pub fn execute_arbitrage(
    pool: &mut PoolState,
    p_cex: f64,
    flashloan_fee: f64,
    txn_cost: f64,
) -> Result<ArbOutcome> {
    if !(p_cex.is_finite() && p_cex > 0.0) {
        return Err(Error::InvalidParam {
            name: "p_cex",
            reason: "must be finite and positive",
            value: p_cex,
        });
    }
    if !(flashloan_fee.is_finite() && flashloan_fee >= 0.0) {
        return Err(Error::InvalidParam {
            name: "flashloan_fee",
            reason: "must be finite and non-negative",
            value: flashloan_fee,
        });
    }
    if !(txn_cost.is_finite() && txn_cost >= 0.0) {
        return Err(Error::InvalidParam {
            name: "txn_cost",
            reason: "must be finite and non-negative",
            value: txn_cost,
        });
    }
    let alpha = pool.spot_price() / p_cex;
    let fee = pool.fee();
    let (direction, ratio) = if arb_condition(alpha, fee, flashloan_fee) {
        (SwapDirection::AForB, alpha)
    } else if arb_condition(1.0 / alpha, fee, flashloan_fee) {
        (SwapDirection::BForA, 1.0 / alpha)
    } else {
        return Ok(ArbOutcome::skipped());
    };
    let params = ArbParams {
        alpha: ratio,
        fee,
        flashloan_fee,
        price_impact: pool.price_impact(direction),
        txn_cost,
    };
    let (flashloan, profit) = if txn_cost == 0.0 {
        (optimal_flashloan(&params)?, optimal_profit(&params)?)
    } else {
        let (flashloan, profit) = numeric_argmax(&params);
        if !(profit > 0.0 && flashloan > 0.0) {
            return Ok(ArbOutcome::skipped());
        }
        (flashloan, profit)
    };
    pool.execute_swap(flashloan, direction)?;
    Ok(ArbOutcome {
        direction: Some(direction),
        flashloan,
        profit,
        revenue: flashloan * fee,
        triggered: true,
    })
}
