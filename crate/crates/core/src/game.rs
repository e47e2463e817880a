//! The discrete game: states, the weeds / upper-hand partition, the one-step
//! bid value and the closed-form optimal value and bid.
//!
//! All values are from the point of view of the player about to move, who
//! holds a pool of `n` candidates while the opponent holds `m`.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{ArithmeticError, Error, Result};
use crate::rational::Rational;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Player {
    P1,
    P2,
}

impl Player {
    pub fn other(self) -> Player {
        match self {
            Player::P1 => Player::P2,
            Player::P2 => Player::P1,
        }
    }
}

impl fmt::Display for Player {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Player::P1 => f.write_str("P1"),
            Player::P2 => f.write_str("P2"),
        }
    }
}

/// Rejects zero pools and the unreachable `(1, 1)` state.
pub fn check_state(n: u64, m: u64) -> Result<()> {
    if n == 0 || m == 0 || (n == 1 && m == 1) {
        return Err(Error::InvalidState { n, m });
    }
    Ok(())
}

fn check_non_terminal(n: u64, m: u64) -> Result<()> {
    check_state(n, m)?;
    if n == 1 || m == 1 {
        return Err(Error::TerminalState { n, m });
    }
    Ok(())
}

/// A position: the mover's pool, the opponent's pool and who is moving.
///
/// A state whose `opp_pool` is 1 is a loss for the mover (the opponent has
/// already narrowed down to one candidate); `my_pool == 1` is a win.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct GameState {
    my_pool: u64,
    opp_pool: u64,
    to_move: Player,
}

impl GameState {
    pub fn new(my_pool: u64, opp_pool: u64, to_move: Player) -> Result<Self> {
        check_state(my_pool, opp_pool)?;
        Ok(GameState {
            my_pool,
            opp_pool,
            to_move,
        })
    }

    pub fn my_pool(&self) -> u64 {
        self.my_pool
    }

    pub fn opp_pool(&self) -> u64 {
        self.opp_pool
    }

    pub fn to_move(&self) -> Player {
        self.to_move
    }

    pub fn region(&self) -> Region {
        classify(self.my_pool, self.opp_pool).expect("validated on construction")
    }

    pub fn is_terminal(&self) -> bool {
        self.my_pool == 1 || self.opp_pool == 1
    }

    /// The winner, once the game is over.
    pub fn winner(&self) -> Option<Player> {
        match self.region() {
            Region::TerminalWin => Some(self.to_move),
            Region::TerminalLoss => Some(self.to_move.other()),
            _ => None,
        }
    }

    /// Pool sizes as `(P1 pool, P2 pool)`.
    pub fn pools(&self) -> (u64, u64) {
        match self.to_move {
            Player::P1 => (self.my_pool, self.opp_pool),
            Player::P2 => (self.opp_pool, self.my_pool),
        }
    }

    /// Optimal-play winning probability of the player to move.
    pub fn mover_value(&self) -> Result<Rational> {
        closed_form_value(self.my_pool, self.opp_pool)
    }

    /// Optimal-play winning probability of Player 1, using the symmetry
    /// `P(P1 wins from <n, m, P2>) = 1 - p*(m, n)`.
    pub fn p1_value(&self) -> Result<Rational> {
        let v = self.mover_value()?;
        match self.to_move {
            Player::P1 => Ok(v),
            Player::P2 => Rational::ONE
                .checked_sub(&v)
                .map_err(|e| e.at(self.my_pool, self.opp_pool)),
        }
    }

    /// The state after the mover bids `bid` and the answer is `yes` (pool
    /// becomes `bid`) or no (pool becomes `my_pool - bid`).
    pub fn apply(&self, bid: BidSize, yes: bool) -> Result<GameState> {
        if self.is_terminal() {
            return Err(Error::TerminalState {
                n: self.my_pool,
                m: self.opp_pool,
            });
        }
        let bid = BidSize::new(bid.value(), self.my_pool)?;
        let next = if yes {
            bid.value()
        } else {
            self.my_pool - bid.value()
        };
        Ok(GameState {
            my_pool: self.opp_pool,
            opp_pool: next,
            to_move: self.to_move.other(),
        })
    }
}

impl fmt::Display for GameState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (p1, p2) = self.pools();
        write!(f, "<{p1}, {p2}, {}>", self.to_move)
    }
}

/// Classification of a state from the mover's point of view.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", content = "level", rename_all = "snake_case")]
pub enum Region {
    /// `2^(k+1) < n` and `2^k < m <= 2^(k+1)`.
    Weeds(u32),
    /// `2^k < n <= 2^(k+1)` and `2^k < m`.
    UpperHand(u32),
    TerminalWin,
    TerminalLoss,
}

impl Region {
    pub fn level(&self) -> Option<u32> {
        match *self {
            Region::Weeds(k) | Region::UpperHand(k) => Some(k),
            _ => None,
        }
    }

    pub fn label(&self) -> &'static str {
        match self {
            Region::Weeds(_) => "weeds",
            Region::UpperHand(_) => "upper-hand",
            Region::TerminalWin => "terminal-win",
            Region::TerminalLoss => "terminal-loss",
        }
    }
}

impl fmt::Display for Region {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.level() {
            Some(k) => write!(f, "{} k={k}", self.label()),
            None => f.write_str(self.label()),
        }
    }
}

/// The unique `k` with `2^k < v <= 2^(k+1)`, i.e. `floor(log2(v - 1))`.
/// Requires `v >= 2`.
pub fn level_of(v: u64) -> u32 {
    debug_assert!(v >= 2);
    (v - 1).ilog2()
}

pub fn classify(n: u64, m: u64) -> Result<Region> {
    check_state(n, m)?;
    if n == 1 {
        return Ok(Region::TerminalWin);
    }
    if m == 1 {
        return Ok(Region::TerminalLoss);
    }
    let (kn, km) = (level_of(n), level_of(m));
    Ok(if kn > km {
        Region::Weeds(km)
    } else {
        Region::UpperHand(kn)
    })
}

/// A bid size `b` valid for a pool of `n`: `1 <= b <= n - 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct BidSize(u64);

impl BidSize {
    pub fn new(bid: u64, pool: u64) -> Result<Self> {
        if bid == 0 || bid >= pool {
            return Err(Error::InvalidBid { bid, pool });
        }
        Ok(BidSize(bid))
    }

    pub fn value(&self) -> u64 {
        self.0
    }
}

impl fmt::Display for BidSize {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

fn pow2(e: u32, n: u64, m: u64) -> Result<i128> {
    2i128.checked_pow(e).ok_or(Error::Overflow { n, m })
}

/// The exact optimal winning probability `q(n, m)` of the player to move.
pub fn closed_form_value(n: u64, m: u64) -> Result<Rational> {
    let overflow = || Error::Overflow { n, m };
    match classify(n, m)? {
        Region::TerminalWin => Ok(Rational::ONE),
        Region::TerminalLoss => Ok(Rational::ZERO),
        Region::Weeds(k) => {
            // 2^(k+1)/n - (2/3)(2^(2k+1) + 1)/(nm), over the denominator 3nm.
            let (ni, mi) = (i128::from(n), i128::from(m));
            let den = ni
                .checked_mul(mi)
                .and_then(|x| x.checked_mul(3))
                .ok_or_else(overflow)?;
            let lead = pow2(k + 1, n, m)?
                .checked_mul(3)
                .and_then(|x| x.checked_mul(mi))
                .ok_or_else(overflow)?;
            let tail = pow2(2 * k + 1, n, m)?
                .checked_add(1)
                .and_then(|x| x.checked_mul(2))
                .ok_or_else(overflow)?;
            Rational::new(lead.checked_sub(tail).ok_or_else(overflow)?, den).map_err(|e| e.at(n, m))
        }
        Region::UpperHand(k) => {
            // 1 - 2^k/m + (2/3)(2^(2k) + 2)/(nm), over the denominator 3nm.
            let (ni, mi) = (i128::from(n), i128::from(m));
            let den = ni
                .checked_mul(mi)
                .and_then(|x| x.checked_mul(3))
                .ok_or_else(overflow)?;
            let lead = pow2(k, n, m)?
                .checked_mul(3)
                .and_then(|x| x.checked_mul(ni))
                .ok_or_else(overflow)?;
            let tail = pow2(2 * k, n, m)?
                .checked_add(2)
                .and_then(|x| x.checked_mul(2))
                .ok_or_else(overflow)?;
            let num = den
                .checked_sub(lead)
                .and_then(|x| x.checked_add(tail))
                .ok_or_else(overflow)?;
            Rational::new(num, den).map_err(|e| e.at(n, m))
        }
    }
}

/// Bold play in the weeds (`2^k`), halving with the upper hand.
pub fn optimal_bid(n: u64, m: u64) -> Result<BidSize> {
    check_non_terminal(n, m)?;
    let bid = match classify(n, m)? {
        Region::Weeds(k) => 1u64 << k,
        Region::UpperHand(_) => n / 2,
        Region::TerminalWin | Region::TerminalLoss => unreachable!(),
    };
    BidSize::new(bid, n)
}

/// Winning probability of the mover at `(n, m)` after bidding `bid`, given
/// the mover's value function `value` for the positions that follow:
/// `1 - (b/n) value(m, b) - ((n-b)/n) value(m, n-b)`.
pub fn bid_value<F>(n: u64, m: u64, bid: u64, mut value: F) -> Result<Rational>
where
    F: FnMut(u64, u64) -> Result<Rational>,
{
    check_non_terminal(n, m)?;
    let b = BidSize::new(bid, n)?.value();
    let at = |e: ArithmeticError| e.at(n, m);
    let yes = Rational::ratio(b, n)
        .map_err(at)?
        .checked_mul(&value(m, b)?)
        .map_err(at)?;
    let no = Rational::ratio(n - b, n)
        .map_err(at)?
        .checked_mul(&value(m, n - b)?)
        .map_err(at)?;
    Rational::ONE
        .checked_sub(&yes)
        .and_then(|x| x.checked_sub(&no))
        .map_err(at)
}

/// [`bid_value`] with the closed form as the continuation value.
pub fn bid_value_closed_form(n: u64, m: u64, bid: u64) -> Result<Rational> {
    bid_value(n, m, bid, closed_form_value)
}
