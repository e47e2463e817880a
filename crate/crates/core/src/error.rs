use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// Pools must be at least 1 and the pair (1, 1) is not a reachable state.
    #[error("invalid state ({n}, {m}): pools must be >= 1 and (1, 1) is undefined")]
    InvalidState { n: u64, m: u64 },

    #[error("state ({n}, {m}) is terminal, no bid can be made")]
    TerminalState { n: u64, m: u64 },

    #[error("bid {bid} is out of range for pool {pool} (must be in [1, {}])", pool.saturating_sub(1))]
    InvalidBid { bid: u64, pool: u64 },

    #[error("arithmetic overflow while evaluating ({n}, {m})")]
    Overflow { n: u64, m: u64 },

    #[error("division by zero in rational arithmetic")]
    DivisionByZero,

    #[error("domain error: {0}")]
    Domain(String),

    #[error("root bracketing failed for beta = {beta}")]
    Bracketing { beta: f64 },

    #[error("strategy `{strategy}` returned bid {bid} for pool {pool}")]
    Strategy {
        strategy: String,
        bid: u64,
        pool: u64,
    },

    #[error("unknown strategy `{0}`")]
    UnknownStrategy(String),

    #[error("strategy `{0}` is randomized and cannot be evaluated in this context")]
    Randomized(String),

    #[error("state ({n}, {m}) is outside the solved table (max sum {max_sum})")]
    OutOfTable { n: u64, m: u64, max_sum: u64 },
}

/// Raised by [`crate::Rational`] arithmetic; callers attach the offending state.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
pub enum ArithmeticError {
    #[error("overflow")]
    Overflow,
    #[error("division by zero")]
    DivisionByZero,
}

impl ArithmeticError {
    pub fn at(self, n: u64, m: u64) -> Error {
        match self {
            ArithmeticError::Overflow => Error::Overflow { n, m },
            ArithmeticError::DivisionByZero => Error::DivisionByZero,
        }
    }
}
