use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::strategy::{BuiltinStrategy, Strategy};
use crate::error::{Error, Result};
use crate::rational::Rational;
use crate::solver::{tri_index, tri_len};

/// Exact winning probabilities of Player 1 when both players follow fixed
/// (possibly mixed) strategies, for every state with `n + m <= max_sum`.
///
/// Denominators of fixed-strategy values grow with the product of the pools
/// along each path, so values are kept as arbitrary-precision rationals.
/// Pools are always `(P1 pool, P2 pool)`; the two tables differ in who moves.
#[derive(Debug, Clone)]
pub struct PolicyTable {
    max_sum: u64,
    p1_to_move: Vec<BigRational>,
    p2_to_move: Vec<BigRational>,
}

/// Lossless conversion of a fixed-width rational.
pub fn to_big(r: &Rational) -> BigRational {
    BigRational::new(BigInt::from(r.numer()), BigInt::from(r.denom()))
}

fn lookup(table: &[BigRational], max_sum: u64, n: u64, m: u64) -> Result<&BigRational> {
    tri_index(max_sum, n, m)
        .map(|i| &table[i])
        .ok_or(Error::OutOfTable { n, m, max_sum })
}

/// Average over the strategy's support of the outcome-weighted continuation.
fn mixed_value<'a, F>(
    strategy: &dyn Strategy,
    pool: u64,
    other: u64,
    next: F,
) -> Result<BigRational>
where
    F: Fn(u64) -> Result<&'a BigRational>,
{
    let support = strategy.support(pool, other);
    if support.is_empty() {
        return Err(Error::Strategy {
            strategy: strategy.name().to_string(),
            bid: 0,
            pool,
        });
    }
    let mut total = BigRational::zero();
    for &b in &support {
        if b == 0 || b >= pool {
            return Err(Error::Strategy {
                strategy: strategy.name().to_string(),
                bid: b,
                pool,
            });
        }
        total += next(b)? * BigInt::from(b) + next(pool - b)? * BigInt::from(pool - b);
    }
    Ok(total / (BigInt::from(pool) * BigInt::from(support.len())))
}

impl PolicyTable {
    pub fn build(max_sum: u64, p1: &dyn Strategy, p2: &dyn Strategy) -> Result<PolicyTable> {
        if max_sum < 3 {
            return Err(Error::Domain(format!(
                "max sum must be >= 3, got {max_sum}"
            )));
        }
        let len = tri_len(max_sum)?;
        let mut a = Vec::with_capacity(len);
        let mut b = Vec::with_capacity(len);
        for s in 3..=max_sum {
            for n in 1..s {
                let m = s - n;
                let (va, vb) = if n == 1 {
                    (BigRational::one(), BigRational::one())
                } else if m == 1 {
                    (BigRational::zero(), BigRational::zero())
                } else {
                    // P1 moves from (n, m): the pool becomes `x`, then P2 moves.
                    let va = mixed_value(p1, n, m, |x| lookup(&b, max_sum, x, m))?;
                    // P2 moves from (n, m), then P1 moves.
                    let vb = mixed_value(p2, m, n, |x| lookup(&a, max_sum, n, x))?;
                    (va, vb)
                };
                a.push(va);
                b.push(vb);
            }
        }
        Ok(PolicyTable {
            max_sum,
            p1_to_move: a,
            p2_to_move: b,
        })
    }

    pub fn max_sum(&self) -> u64 {
        self.max_sum
    }

    /// Player 1's winning probability at `<n, m, P1>`.
    pub fn p1_value(&self, n: u64, m: u64) -> Result<BigRational> {
        lookup(&self.p1_to_move, self.max_sum, n, m).cloned()
    }

    /// Player 1's winning probability at `<n, m, P2>`.
    pub fn p1_value_p2_to_move(&self, n: u64, m: u64) -> Result<BigRational> {
        lookup(&self.p2_to_move, self.max_sum, n, m).cloned()
    }
}

/// Exact value for Player 1 at `<n, m, P1>` under the strategy profile `(p1, p2)`.
pub fn evaluate_profile(
    n: u64,
    m: u64,
    p1: &dyn Strategy,
    p2: &dyn Strategy,
) -> Result<BigRational> {
    crate::game::check_state(n, m)?;
    let max_sum = (n + m).max(3);
    PolicyTable::build(max_sum, p1, p2)?.p1_value(n, m)
}

/// Exact value of `policy` for Player 1 against an optimally playing opponent.
pub fn evaluate_policy(n: u64, m: u64, policy: &dyn Strategy) -> Result<BigRational> {
    evaluate_profile(n, m, policy, &BuiltinStrategy::Optimal)
}
