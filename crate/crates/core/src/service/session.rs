use std::time::{SystemTime, UNIX_EPOCH};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::game::{
    bid_value_closed_form, check_state, classify, closed_form_value, optimal_bid, Region,
};
use crate::rational::Rational;

/// Largest pool a session accepts.
pub const MAX_POOL: u64 = 4096;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Side {
    Me,
    Opponent,
}

impl Side {
    pub fn other(self) -> Side {
        match self {
            Side::Me => Side::Opponent,
            Side::Opponent => Side::Me,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Answer {
    Yes,
    No,
}

/// Public pool sizes as seen by the advised player.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Pools {
    pub me: u64,
    pub opponent: u64,
    pub to_move: Side,
}

impl Pools {
    pub fn new(me: u64, opponent: u64, to_move: Side) -> Result<Pools> {
        check_state(me, opponent)?;
        if me > MAX_POOL || opponent > MAX_POOL {
            return Err(Error::Domain(format!("pools are limited to {MAX_POOL}")));
        }
        Ok(Pools {
            me,
            opponent,
            to_move,
        })
    }

    fn pool_of(&self, side: Side) -> u64 {
        match side {
            Side::Me => self.me,
            Side::Opponent => self.opponent,
        }
    }

    /// `(mover pool, other pool)`.
    pub fn mover_view(&self) -> (u64, u64) {
        (
            self.pool_of(self.to_move),
            self.pool_of(self.to_move.other()),
        )
    }

    pub fn is_terminal(&self) -> bool {
        self.me == 1 || self.opponent == 1
    }

    pub fn outcome(&self) -> Outcome {
        if self.me == 1 {
            Outcome::Won
        } else if self.opponent == 1 {
            Outcome::Lost
        } else {
            Outcome::Ongoing
        }
    }

    fn with_pool(&self, side: Side, pool: u64) -> Pools {
        let mut next = *self;
        match side {
            Side::Me => next.me = pool,
            Side::Opponent => next.opponent = pool,
        }
        next.to_move = side.other();
        next
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Outcome {
    Ongoing,
    Won,
    Lost,
}

/// What was observed on a turn: a bid and its answer, or only the new pool.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Action {
    Bid { bid: u64, answer: Answer },
    Pool { new_pool: u64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct HistoryEntry {
    pub before: Pools,
    pub actor: Side,
    pub action: Action,
    pub after: Pools,
}

/// Why a move was refused.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum MoveError {
    /// Wrong actor, finished game or stale version.
    Conflict(String),
    Illegal(String),
}

/// The state reached by `action` from `pools`.
pub fn apply_action(
    pools: &Pools,
    actor: Side,
    action: Action,
) -> std::result::Result<Pools, MoveError> {
    if pools.is_terminal() {
        return Err(MoveError::Conflict(format!(
            "game is over ({:?})",
            pools.outcome()
        )));
    }
    if actor != pools.to_move {
        return Err(MoveError::Conflict(format!(
            "it is {:?}'s turn",
            pools.to_move
        )));
    }
    let pool = pools.pool_of(actor);
    let new_pool = match action {
        Action::Bid { bid, answer } => {
            if bid == 0 || bid >= pool {
                return Err(MoveError::Illegal(format!(
                    "bid {bid} must be in [1, {}]",
                    pool - 1
                )));
            }
            match answer {
                Answer::Yes => bid,
                Answer::No => pool - bid,
            }
        }
        Action::Pool { new_pool } => {
            if new_pool == 0 || new_pool >= pool {
                return Err(MoveError::Illegal(format!(
                    "new pool {new_pool} must be in [1, {}]",
                    pool - 1
                )));
            }
            new_pool
        }
    };
    Ok(pools.with_pool(actor, new_pool))
}

pub fn now_ms() -> u64 {
    SystemTime::now()
        .duration_since(UNIX_EPOCH)
        .map(|d| d.as_millis() as u64)
        .unwrap_or(0)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Session {
    pub id: String,
    pub initial: Pools,
    pub state: Pools,
    pub history: Vec<HistoryEntry>,
    pub created_ms: u64,
    pub updated_ms: u64,
    /// Incremented on every recorded move.
    pub version: u64,
}

impl Session {
    pub fn new(id: String, initial: Pools) -> Session {
        let now = now_ms();
        Session {
            id,
            initial,
            state: initial,
            history: Vec::new(),
            created_ms: now,
            updated_ms: now,
            version: 0,
        }
    }

    pub fn record(&mut self, actor: Side, action: Action) -> std::result::Result<(), MoveError> {
        let after = apply_action(&self.state, actor, action)?;
        self.history.push(HistoryEntry {
            before: self.state,
            actor,
            action,
            after,
        });
        self.state = after;
        self.version += 1;
        self.updated_ms = now_ms().max(self.updated_ms);
        Ok(())
    }

    /// Re-applies the history from the initial state; the result must equal
    /// the stored state.
    pub fn replay(&self) -> Result<Pools> {
        Pools::new(self.initial.me, self.initial.opponent, self.initial.to_move)?;
        let mut pools = self.initial;
        for (i, h) in self.history.iter().enumerate() {
            if h.before != pools || h.actor != pools.to_move {
                return Err(Error::Domain(format!(
                    "history entry {i} does not follow its predecessor"
                )));
            }
            pools = apply_action(&pools, h.actor, h.action)
                .map_err(|e| Error::Domain(format!("history entry {i} is illegal: {e:?}")))?;
            if pools != h.after {
                return Err(Error::Domain(format!(
                    "history entry {i} records the wrong result"
                )));
            }
        }
        if pools != self.state {
            return Err(Error::Domain(format!(
                "session {} state does not match its history",
                self.id
            )));
        }
        if self.version != self.history.len() as u64 {
            return Err(Error::Domain(format!(
                "session {} version does not match its history",
                self.id
            )));
        }
        Ok(pools)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WhatIfPoint {
    pub bid: u64,
    pub win_prob: Rational,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Advice {
    pub mover: Side,
    pub region: Region,
    pub region_label: &'static str,
    pub recommended_bid: Option<u64>,
    /// The mover's winning probability.
    pub win_prob: Rational,
    /// The advised player's winning probability.
    pub my_win_prob: Rational,
    pub outcome: Outcome,
    pub whatif: Vec<WhatIfPoint>,
}

pub fn advise(pools: &Pools) -> Result<Advice> {
    let (n, m) = pools.mover_view();
    let region = classify(n, m)?;
    let win_prob = closed_form_value(n, m)?;
    let my_win_prob = match pools.to_move {
        Side::Me => win_prob,
        Side::Opponent => Rational::ONE
            .checked_sub(&win_prob)
            .map_err(|e| e.at(n, m))?,
    };
    let (recommended_bid, whatif) = if pools.is_terminal() {
        (None, Vec::new())
    } else {
        let curve = (1..n)
            .map(|bid| {
                Ok(WhatIfPoint {
                    bid,
                    win_prob: bid_value_closed_form(n, m, bid)?,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        (Some(optimal_bid(n, m)?.value()), curve)
    };
    Ok(Advice {
        mover: pools.to_move,
        region,
        region_label: region.label(),
        recommended_bid,
        win_prob,
        my_win_prob,
        outcome: pools.outcome(),
        whatif,
    })
}

/// The mover's winning probability after bidding `bid` at `pools`.
pub fn what_if(pools: &Pools, bid: u64) -> std::result::Result<Rational, MoveError> {
    if pools.is_terminal() {
        return Err(MoveError::Conflict("game is over".into()));
    }
    let (n, m) = pools.mover_view();
    if bid == 0 || bid >= n {
        return Err(MoveError::Illegal(format!(
            "bid {bid} must be in [1, {}]",
            n - 1
        )));
    }
    bid_value_closed_form(n, m, bid).map_err(|e| MoveError::Illegal(e.to_string()))
}
