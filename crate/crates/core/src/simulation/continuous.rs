use rand::{Rng, RngCore};
use serde::{Deserialize, Serialize};

use super::{run_trials, trial_rng, EstimateReport};
use crate::continuous::{decompose_positive, level_of, ContinuousKind};
use crate::error::{Error, Result};
use crate::game::Player;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ContinuousConfig {
    pub x: f64,
    pub y: f64,
    /// Maximum number of moves per trial.
    pub horizon: u64,
    /// A weeds player whose remaining escape probability drops below this is
    /// declared the loser.
    pub epsilon: f64,
    pub trials: u64,
    pub seed: u64,
    #[serde(skip)]
    pub workers: Option<usize>,
}

impl ContinuousConfig {
    pub fn new(x: f64, y: f64, trials: u64, seed: u64) -> Self {
        ContinuousConfig {
            x,
            y,
            horizon: 100_000,
            epsilon: 1e-9,
            trials,
            seed,
            workers: None,
        }
    }

    fn validate(&self) -> Result<()> {
        check_positive(self.x, self.y)?;
        check_epsilon(self.epsilon)?;
        if self.trials == 0 {
            return Err(Error::Domain("trials must be >= 1".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ContinuousOutcome {
    P1Wins,
    P2Wins,
    Undecided,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ContinuousReport {
    /// Player 1 wins counted over all trials.
    pub estimate: EstimateReport,
    pub losses: u64,
    pub undecided: u64,
    pub undecided_fraction: f64,
}

impl ContinuousReport {
    /// Player 1's loss frequency as its own estimate.
    pub fn loss_report(&self) -> EstimateReport {
        EstimateReport::from_counts(self.estimate.trials, self.losses, self.estimate.seed)
    }
}

fn check_positive(x: f64, y: f64) -> Result<()> {
    if !(x.is_finite() && y.is_finite() && x > 0.0 && y > 0.0) {
        return Err(Error::Domain(format!(
            "continuous pools must be finite and positive, got ({x}, {y})"
        )));
    }
    Ok(())
}

fn check_epsilon(epsilon: f64) -> Result<()> {
    if !(epsilon > 0.0 && epsilon < 1.0) {
        return Err(Error::Domain(format!(
            "epsilon must be in (0, 1), got {epsilon}"
        )));
    }
    Ok(())
}

/// Pools seen from the mover, rescaled so the smaller pool lies in `(1, 2]`.
/// Rescaling by a power of two is exact and does not change the dynamics.
#[derive(Debug, Clone, Copy)]
struct Position {
    mine: f64,
    theirs: f64,
    mover: Player,
}

enum Step {
    Escaped,
    Failed,
    Halved,
    Trapped,
}

impl Position {
    fn new(x: f64, y: f64) -> Self {
        let mut p = Position {
            mine: x,
            theirs: y,
            mover: Player::P1,
        };
        p.normalize();
        p
    }

    fn normalize(&mut self) {
        let scale = 2f64.powi(-level_of(self.mine.min(self.theirs)));
        self.mine *= scale;
        self.theirs *= scale;
    }

    /// One move of the ansatz, then hands the turn over.
    fn step(&mut self, epsilon: f64, rng: &mut dyn RngCore) -> Step {
        let r = decompose_positive(self.mine, self.theirs);
        let unit = 2f64.powi(r.level);
        let (pool, step) = match r.kind {
            ContinuousKind::Weeds => {
                if 2.0 / r.alpha < epsilon {
                    return Step::Trapped;
                }
                if rng.random::<f64>() * r.alpha < 1.0 {
                    (unit, Step::Escaped)
                } else {
                    (unit * (r.alpha - 1.0), Step::Failed)
                }
            }
            ContinuousKind::UpperHand => (self.mine * 0.5, Step::Halved),
        };
        self.mine = self.theirs;
        self.theirs = pool;
        self.mover = self.mover.other();
        self.normalize();
        step
    }
}

/// Plays the ansatz from `<x, y, P1>` until one player is trapped or the
/// horizon runs out.
pub fn play_continuous(
    x: f64,
    y: f64,
    horizon: u64,
    epsilon: f64,
    rng: &mut dyn RngCore,
) -> Result<ContinuousOutcome> {
    check_positive(x, y)?;
    check_epsilon(epsilon)?;
    let mut pos = Position::new(x, y);
    for _ in 0..horizon {
        let mover = pos.mover;
        if let Step::Trapped = pos.step(epsilon, rng) {
            return Ok(match mover {
                Player::P1 => ContinuousOutcome::P2Wins,
                Player::P2 => ContinuousOutcome::P1Wins,
            });
        }
    }
    Ok(ContinuousOutcome::Undecided)
}

#[derive(Default)]
struct Tally {
    wins: u64,
    losses: u64,
    undecided: u64,
}

impl std::ops::Add for Tally {
    type Output = Tally;

    fn add(self, rhs: Tally) -> Tally {
        Tally {
            wins: self.wins + rhs.wins,
            losses: self.losses + rhs.losses,
            undecided: self.undecided + rhs.undecided,
        }
    }
}

pub fn simulate_continuous(config: &ContinuousConfig) -> Result<ContinuousReport> {
    config.validate()?;
    let c = config.clone();
    let tally = run_trials(c.trials, c.workers, |i| {
        let mut rng = trial_rng(c.seed, i);
        let outcome = play_continuous(c.x, c.y, c.horizon, c.epsilon, &mut rng)?;
        Ok(match outcome {
            ContinuousOutcome::P1Wins => Tally {
                wins: 1,
                ..Tally::default()
            },
            ContinuousOutcome::P2Wins => Tally {
                losses: 1,
                ..Tally::default()
            },
            ContinuousOutcome::Undecided => Tally {
                undecided: 1,
                ..Tally::default()
            },
        })
    })?;
    Ok(ContinuousReport {
        estimate: EstimateReport::from_counts(c.trials, tally.wins, c.seed),
        losses: tally.losses,
        undecided: tally.undecided,
        undecided_fraction: tally.undecided as f64 / c.trials as f64,
    })
}

/// Frequency with which Player 1, in the weeds at `<alpha, beta, P1>`, ever
/// makes a successful bid. A trial with no success ends once the remaining
/// escape probability is below `epsilon`.
pub fn estimate_escape(
    alpha: f64,
    beta: f64,
    trials: u64,
    epsilon: f64,
    seed: u64,
    workers: Option<usize>,
) -> Result<EstimateReport> {
    if !(alpha.is_finite() && alpha > 2.0 && beta > 1.0 && beta <= 2.0) {
        return Err(Error::Domain(format!(
            "escape needs alpha > 2 and beta in (1, 2], got ({alpha}, {beta})"
        )));
    }
    check_epsilon(epsilon)?;
    if trials == 0 {
        return Err(Error::Domain("trials must be >= 1".into()));
    }
    let escapes = run_trials(trials, workers, |i| {
        let mut rng = trial_rng(seed, i);
        let mut pos = Position::new(alpha, beta);
        loop {
            let mover = pos.mover;
            match pos.step(epsilon, &mut rng) {
                Step::Escaped if mover == Player::P1 => return Ok(1u64),
                Step::Trapped => return Ok(0),
                Step::Escaped => unreachable!("player 2 cannot be in the weeds first"),
                Step::Failed | Step::Halved => {}
            }
        }
    })?;
    Ok(EstimateReport::from_counts(trials, escapes, seed))
}
