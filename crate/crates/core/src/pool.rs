//! Constant-product pool with fee extraction.
//!
//! Reserves follow `reserve_a * reserve_b = L^2`. The quoted price of
//! token A in units of token B is `reserve_b / reserve_a`. Swap fees are
//! charged on the input and moved to a side ledger; they never enter the
//! reserves, so the invariant is preserved by the net input alone.

use serde::Serialize;

use crate::error::{Error, Result};

/// Direction of a swap through the pool.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SwapDirection {
    /// Deposit token A, withdraw token B.
    AForB,
    /// Deposit token B, withdraw token A.
    BForA,
}

impl SwapDirection {
    /// The opposite direction.
    pub fn flip(self) -> Self {
        match self {
            SwapDirection::AForB => SwapDirection::BForA,
            SwapDirection::BForA => SwapDirection::AForB,
        }
    }

    /// Stable lowercase label used in tabular output.
    pub fn as_str(self) -> &'static str {
        match self {
            SwapDirection::AForB => "a_for_b",
            SwapDirection::BForA => "b_for_a",
        }
    }
}

/// Full account of one executed swap.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct SwapReceipt {
    pub direction: SwapDirection,
    /// Amount paid in by the trader, fee included.
    pub gross_in: f64,
    /// Amount that actually entered the reserves.
    pub net_in: f64,
    /// Amount withdrawn from the outgoing reserve.
    pub amount_out: f64,
    /// Fee moved to the side ledger, in the input token.
    pub fee_taken: f64,
    /// Quoted price (B per A) before the swap.
    pub spot_before: f64,
    /// Quoted price (B per A) after the swap.
    pub spot_after: f64,
    /// Realized price in B per A, net of fee and impact.
    pub effective_price: f64,
}

/// A constant-product pool plus its extracted-fee ledgers.
#[derive(Debug, Clone, Serialize)]
pub struct PoolState {
    reserve_a: f64,
    reserve_b: f64,
    fee: f64,
    accrued_fees_a: f64,
    accrued_fees_b: f64,
}

fn require(cond: bool, name: &'static str, reason: &'static str, value: f64) -> Result<()> {
    if cond {
        Ok(())
    } else {
        Err(Error::InvalidParam { name, reason, value })
    }
}

/// Checks that a proportional fee is a valid rate in `[0, 1)`.
pub fn validate_fee(name: &'static str, fee: f64) -> Result<()> {
    require(fee.is_finite() && (0.0..1.0).contains(&fee), name, "must lie in [0, 1)", fee)
}

impl PoolState {
    /// Creates a pool from explicit reserves.
    pub fn new(reserve_a: f64, reserve_b: f64, fee: f64) -> Result<Self> {
        require(
            reserve_a.is_finite() && reserve_a > 0.0,
            "reserve_a",
            "must be finite and positive",
            reserve_a,
        )?;
        require(
            reserve_b.is_finite() && reserve_b > 0.0,
            "reserve_b",
            "must be finite and positive",
            reserve_b,
        )?;
        validate_fee("fee", fee)?;
        Ok(PoolState {
            reserve_a,
            reserve_b,
            fee,
            accrued_fees_a: 0.0,
            accrued_fees_b: 0.0,
        })
    }

    /// Creates a pool with invariant depth `liquidity` pegged at `price`
    /// (B per A): `reserve_a = L / sqrt(price)`, `reserve_b = L * sqrt(price)`.
    pub fn from_liquidity(liquidity: f64, price: f64, fee: f64) -> Result<Self> {
        require(
            liquidity.is_finite() && liquidity > 0.0,
            "liquidity",
            "must be finite and positive",
            liquidity,
        )?;
        require(
            price.is_finite() && price > 0.0,
            "price",
            "must be finite and positive",
            price,
        )?;
        let root = price.sqrt();
        PoolState::new(liquidity / root, liquidity * root, fee)
    }

    pub fn reserve_a(&self) -> f64 {
        self.reserve_a
    }

    pub fn reserve_b(&self) -> f64 {
        self.reserve_b
    }

    pub fn fee(&self) -> f64 {
        self.fee
    }

    pub fn accrued_fees_a(&self) -> f64 {
        self.accrued_fees_a
    }

    pub fn accrued_fees_b(&self) -> f64 {
        self.accrued_fees_b
    }

    /// Invariant depth `L = sqrt(reserve_a * reserve_b)`.
    pub fn liquidity(&self) -> f64 {
        (self.reserve_a * self.reserve_b).sqrt()
    }

    /// Quoted price of token A in units of token B.
    pub fn spot_price(&self) -> f64 {
        self.reserve_b / self.reserve_a
    }

    /// Marginal price impact for the given input side: the reciprocal of
    /// the incoming reserve.
    pub fn price_impact(&self, direction: SwapDirection) -> f64 {
        match direction {
            SwapDirection::AForB => 1.0 / self.reserve_a,
            SwapDirection::BForA => 1.0 / self.reserve_b,
        }
    }

    fn reserves(&self, direction: SwapDirection) -> (f64, f64) {
        match direction {
            SwapDirection::AForB => (self.reserve_a, self.reserve_b),
            SwapDirection::BForA => (self.reserve_b, self.reserve_a),
        }
    }

    /// Output for a gross input of `amount_in`, without mutating the pool.
    ///
    /// With `r_in`, `r_out` the reserves on each side and
    /// `net = amount_in * (1 - fee)`, the constant product gives
    /// `out = r_out * net / (r_in + net)`, equivalently
    /// `spot * net / (1 + net / r_in)`.
    pub fn quote_out(&self, amount_in: f64, direction: SwapDirection) -> Result<f64> {
        require(
            amount_in.is_finite() && amount_in >= 0.0,
            "amount_in",
            "must be finite and non-negative",
            amount_in,
        )?;
        let net = amount_in * (1.0 - self.fee);
        let (r_in, r_out) = self.reserves(direction);
        Ok(r_out * (net / (r_in + net)))
    }

    /// Executes a swap: charges the fee to the side ledger, applies the net
    /// input to the reserves, and returns a full receipt.
    pub fn execute_swap(&mut self, amount_in: f64, direction: SwapDirection) -> Result<SwapReceipt> {
        require(
            amount_in.is_finite() && amount_in > 0.0,
            "amount_in",
            "must be finite and positive",
            amount_in,
        )?;
        let spot_before = self.spot_price();
        let net_in = amount_in * (1.0 - self.fee);
        let fee_taken = amount_in * self.fee;
        let (r_in, r_out) = self.reserves(direction);
        let amount_out = r_out * (net_in / (r_in + net_in));
        if amount_out >= r_out {
            return Err(Error::ExcessiveSwap {
                amount_in,
                reserve_out: r_out,
            });
        }
        match direction {
            SwapDirection::AForB => {
                self.reserve_a += net_in;
                self.reserve_b -= amount_out;
                self.accrued_fees_a += fee_taken;
            }
            SwapDirection::BForA => {
                self.reserve_b += net_in;
                self.reserve_a -= amount_out;
                self.accrued_fees_b += fee_taken;
            }
        }
        let effective_price = match direction {
            SwapDirection::AForB => amount_out / net_in,
            SwapDirection::BForA => net_in / amount_out,
        };
        Ok(SwapReceipt {
            direction,
            gross_in: amount_in,
            net_in,
            amount_out,
            fee_taken,
            spot_before,
            spot_after: self.spot_price(),
            effective_price,
        })
    }
}
