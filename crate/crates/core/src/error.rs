use thiserror::Error;

/// Errors reported by pool, arbitrage, path, walk, and harness operations.
#[derive(Debug, Error)]
pub enum Error {
    /// A parameter is outside its documented domain.
    #[error("invalid parameter `{name}`: {reason} (got {value})")]
    InvalidParam {
        name: &'static str,
        reason: &'static str,
        value: f64,
    },

    /// A swap would drain (or exceed) the outgoing reserve.
    #[error("swap of {amount_in} would exhaust the outgoing reserve {reserve_out}")]
    ExcessiveSwap { amount_in: f64, reserve_out: f64 },

    /// The price ratio does not clear the arbitrage threshold, so the
    /// closed-form optimum is undefined.
    #[error("no arbitrage: ratio {alpha} does not exceed threshold {threshold}")]
    NoArbitrage { alpha: f64, threshold: f64 },

    /// Closed-form sizing only covers zero fixed transaction cost.
    #[error("closed form is undefined for txn_cost > 0 (got {txn_cost}); use the numeric search")]
    ClosedFormTxnCost { txn_cost: f64 },

    /// Price-path generation kept producing non-positive prices.
    #[error("price path rejected {attempts} consecutive draws; sigma/mu are pathological for this p0")]
    RedrawLimit { attempts: usize },

    /// An aggregate was requested over unusably small input.
    #[error("insufficient data for `{what}`: need at least {min}, got {got}")]
    InsufficientData {
        what: &'static str,
        min: usize,
        got: usize,
    },
}

pub type Result<T> = std::result::Result<T, Error>;
