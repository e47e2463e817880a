use std::fmt;
use std::str::FromStr;

use rand::{Rng, RngCore};
use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::game::{level_of, optimal_bid};

/// A bidding rule. A strategy plays uniformly at random over its
/// [`support`](Strategy::support); a single-element support is a pure strategy.
pub trait Strategy: Send + Sync {
    fn name(&self) -> &str;

    /// Bids this strategy may play at `(my_pool, opp_pool)`, each equally likely.
    fn support(&self, my_pool: u64, opp_pool: u64) -> Vec<u64>;

    /// Draws a bid, consuming randomness only when the support has more than
    /// one element.
    fn bid(&self, my_pool: u64, opp_pool: u64, rng: &mut dyn RngCore) -> u64 {
        let support = self.support(my_pool, opp_pool);
        match support.len() {
            0 => 0,
            1 => support[0],
            len => support[rng.random_range(0..len)],
        }
    }

    fn is_deterministic(&self) -> bool {
        false
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BuiltinStrategy {
    /// Bold `2^k` in the weeds, `floor(n/2)` with the upper hand.
    Optimal,
    Halving,
    /// `2^floor(log2(m - 1))`, clamped to `n - 1`.
    Bold,
    AlwaysOne,
    UniformRandom,
}

impl BuiltinStrategy {
    pub const ALL: [BuiltinStrategy; 5] = [
        BuiltinStrategy::Optimal,
        BuiltinStrategy::Halving,
        BuiltinStrategy::Bold,
        BuiltinStrategy::AlwaysOne,
        BuiltinStrategy::UniformRandom,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            BuiltinStrategy::Optimal => "optimal",
            BuiltinStrategy::Halving => "halving",
            BuiltinStrategy::Bold => "bold",
            BuiltinStrategy::AlwaysOne => "always-one",
            BuiltinStrategy::UniformRandom => "uniform-random",
        }
    }

    fn pure_bid(&self, n: u64, m: u64) -> u64 {
        match self {
            BuiltinStrategy::Optimal => optimal_bid(n, m).map(|b| b.value()).unwrap_or(0),
            BuiltinStrategy::Halving => n / 2,
            BuiltinStrategy::Bold if m >= 2 => (1u64 << level_of(m)).min(n.saturating_sub(1)),
            BuiltinStrategy::Bold => 0,
            BuiltinStrategy::AlwaysOne => 1,
            BuiltinStrategy::UniformRandom => unreachable!("randomized"),
        }
    }
}

impl Strategy for BuiltinStrategy {
    fn name(&self) -> &str {
        self.as_str()
    }

    fn support(&self, my_pool: u64, opp_pool: u64) -> Vec<u64> {
        match self {
            BuiltinStrategy::UniformRandom => (1..my_pool).collect(),
            _ => vec![self.pure_bid(my_pool, opp_pool)],
        }
    }

    fn bid(&self, my_pool: u64, opp_pool: u64, rng: &mut dyn RngCore) -> u64 {
        match self {
            BuiltinStrategy::UniformRandom if my_pool >= 2 => rng.random_range(1..my_pool),
            BuiltinStrategy::UniformRandom => 0,
            _ => self.pure_bid(my_pool, opp_pool),
        }
    }

    fn is_deterministic(&self) -> bool {
        !matches!(self, BuiltinStrategy::UniformRandom)
    }
}

impl fmt::Display for BuiltinStrategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for BuiltinStrategy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        BuiltinStrategy::ALL
            .into_iter()
            .find(|b| b.as_str() == s)
            .ok_or_else(|| Error::UnknownStrategy(s.to_string()))
    }
}

/// A pure strategy given by a closure `(my_pool, opp_pool) -> bid`.
pub struct FnStrategy<F> {
    name: String,
    rule: F,
}

impl<F> FnStrategy<F>
where
    F: Fn(u64, u64) -> u64 + Send + Sync,
{
    pub fn new(name: impl Into<String>, rule: F) -> Self {
        FnStrategy {
            name: name.into(),
            rule,
        }
    }
}

impl<F> Strategy for FnStrategy<F>
where
    F: Fn(u64, u64) -> u64 + Send + Sync,
{
    fn name(&self) -> &str {
        &self.name
    }

    fn support(&self, my_pool: u64, opp_pool: u64) -> Vec<u64> {
        vec![(self.rule)(my_pool, opp_pool)]
    }

    fn bid(&self, my_pool: u64, opp_pool: u64, _rng: &mut dyn RngCore) -> u64 {
        (self.rule)(my_pool, opp_pool)
    }

    fn is_deterministic(&self) -> bool {
        true
    }
}
