//! Stage-ordered dynamic programming over `s = n + m`.
//!
//! Every transition strictly decreases `n + m`, so filling the table one
//! stage at a time only ever reads entries that are already final.

use log::debug;

use crate::error::{Error, Result};
use crate::game::bid_value;
use crate::rational::Rational;

/// Position of `(n, m)` in a triangle holding every state with
/// `3 <= n + m <= max_sum`, ordered by stage and then by `n`.
pub(crate) fn tri_index(max_sum: u64, n: u64, m: u64) -> Option<usize> {
    let s = n.checked_add(m)?;
    if n == 0 || m == 0 || s < 3 || s > max_sum {
        return None;
    }
    Some((stage_offset(s) + (n - 1)) as usize)
}

/// Number of entries in all stages before `s`.
fn stage_offset(s: u64) -> u64 {
    (s - 2) * (s - 1) / 2 - 1
}

pub(crate) fn tri_len(max_sum: u64) -> Result<usize> {
    max_sum
        .checked_add(1)
        .and_then(|s| (s - 2).checked_mul(s - 1))
        .map(|x| x / 2 - 1)
        .and_then(|x| usize::try_from(x).ok())
        .ok_or_else(|| Error::Domain(format!("table for max sum {max_sum} is too large")))
}

/// Optimal values `p*(n, m)` and the full set of maximizing bids for every
/// state with `3 <= n + m <= max_sum`.
#[derive(Debug, Clone)]
pub struct SolveTable {
    max_sum: u64,
    values: Vec<Rational>,
    bids: Vec<Vec<u64>>,
}

#[derive(Debug, Clone, Copy)]
pub struct Entry<'a> {
    pub n: u64,
    pub m: u64,
    pub value: Rational,
    pub bids: &'a [u64],
}

impl SolveTable {
    pub fn max_sum(&self) -> u64 {
        self.max_sum
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn contains(&self, n: u64, m: u64) -> bool {
        tri_index(self.max_sum, n, m).is_some()
    }

    fn index(&self, n: u64, m: u64) -> Result<usize> {
        tri_index(self.max_sum, n, m).ok_or(Error::OutOfTable {
            n,
            m,
            max_sum: self.max_sum,
        })
    }

    pub fn value(&self, n: u64, m: u64) -> Result<Rational> {
        Ok(self.values[self.index(n, m)?])
    }

    /// All maximizing bids in increasing order; empty for terminal states.
    pub fn bids(&self, n: u64, m: u64) -> Result<&[u64]> {
        Ok(&self.bids[self.index(n, m)?])
    }

    /// The smallest maximizing bid.
    pub fn best_bid(&self, n: u64, m: u64) -> Result<Option<u64>> {
        Ok(self.bids(n, m)?.first().copied())
    }

    /// One-step value of bidding `bid` at `(n, m)`, continuing with table values.
    pub fn bid_value(&self, n: u64, m: u64, bid: u64) -> Result<Rational> {
        self.index(n, m)?;
        bid_value(n, m, bid, |a, b| self.value(a, b))
    }

    /// Entries in stage order (`n + m` ascending, then `n` ascending).
    pub fn entries(&self) -> impl Iterator<Item = Entry<'_>> + '_ {
        (3..=self.max_sum).flat_map(move |s| {
            (1..s).map(move |n| {
                let m = s - n;
                let i = tri_index(self.max_sum, n, m).expect("in range");
                Entry {
                    n,
                    m,
                    value: self.values[i],
                    bids: &self.bids[i],
                }
            })
        })
    }
}

/// Fills the table for all `3 <= n + m <= max_sum`.
pub fn solve_dp(max_sum: u64) -> Result<SolveTable> {
    if max_sum < 3 {
        return Err(Error::Domain(format!(
            "max sum must be >= 3, got {max_sum}"
        )));
    }
    let len = tri_len(max_sum)?;
    let mut values: Vec<Rational> = Vec::new();
    let mut bids: Vec<Vec<u64>> = Vec::new();
    values
        .try_reserve_exact(len)
        .and_then(|_| bids.try_reserve_exact(len))
        .map_err(|_| Error::Domain(format!("cannot allocate table for max sum {max_sum}")))?;

    for s in 3..=max_sum {
        for n in 1..s {
            let m = s - n;
            debug_assert_eq!(tri_index(max_sum, n, m), Some(values.len()));
            if n == 1 {
                values.push(Rational::ONE);
                bids.push(Vec::new());
                continue;
            }
            if m == 1 {
                values.push(Rational::ZERO);
                bids.push(Vec::new());
                continue;
            }
            let lookup = |a: u64, b: u64| {
                tri_index(max_sum, a, b)
                    .map(|i| values[i])
                    .ok_or(Error::OutOfTable {
                        n: a,
                        m: b,
                        max_sum,
                    })
            };
            let mut best = Rational::ZERO;
            let mut argmax = Vec::new();
            for b in 1..n {
                let v = bid_value(n, m, b, lookup)?;
                if argmax.is_empty() || v > best {
                    best = v;
                    argmax.clear();
                    argmax.push(b);
                } else if v == best {
                    argmax.push(b);
                }
            }
            values.push(best);
            bids.push(argmax);
        }
        debug!("stage {s} solved");
    }

    Ok(SolveTable {
        max_sum,
        values,
        bids,
    })
}
