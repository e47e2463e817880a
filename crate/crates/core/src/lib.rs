//! Exact solver, Monte Carlo simulator and live-play advisor for the
//! "Guess Who?" bidding game.
//!
//! Each turn the mover with `n` remaining candidates picks a bid `b` in
//! `[1, n - 1]`; with probability `b / n` the pool shrinks to `b`, otherwise
//! to `n - b`. The first player down to a single candidate wins.

pub mod cli;
pub mod continuous;
pub mod error;
pub mod export;
pub mod game;
pub mod rational;
pub mod service;
pub mod simulation;
pub mod solver;
pub mod verify;

pub use error::{ArithmeticError, Error, Result};
pub use game::{
    bid_value, bid_value_closed_form, classify, closed_form_value, optimal_bid, BidSize, GameState,
    Player, Region,
};
pub use rational::Rational;
pub use solver::{solve_dp, SolveTable};
