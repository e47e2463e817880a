use rand::{Rng, RngCore};
use serde::{Deserialize, Serialize};

use super::strategy::{BuiltinStrategy, Strategy};
use super::{run_trials, trial_rng, EstimateReport};
use crate::error::{Error, Result};
use crate::game::{check_state, GameState, Player};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TrialResult {
    pub winner: Player,
    /// Number of bids made.
    pub rounds: u32,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub trajectory: Option<Vec<GameState>>,
}

/// Plays one game from `<n, m, P1>` to the end.
pub fn play_discrete(
    n: u64,
    m: u64,
    p1: &dyn Strategy,
    p2: &dyn Strategy,
    rng: &mut dyn RngCore,
    record: bool,
) -> Result<TrialResult> {
    check_state(n, m)?;
    if n == 1 || m == 1 {
        return Err(Error::TerminalState { n, m });
    }
    let mut pools = [n, m];
    let mut mover = 0usize;
    let mut rounds = 0u32;
    let mut trajectory = record.then(Vec::new);
    let player = |i: usize| if i == 0 { Player::P1 } else { Player::P2 };

    loop {
        let (mine, theirs) = (pools[mover], pools[1 - mover]);
        if let Some(t) = trajectory.as_mut() {
            t.push(GameState::new(mine, theirs, player(mover))?);
        }
        let strategy = if mover == 0 { p1 } else { p2 };
        let bid = strategy.bid(mine, theirs, rng);
        if bid == 0 || bid >= mine {
            return Err(Error::Strategy {
                strategy: strategy.name().to_string(),
                bid,
                pool: mine,
            });
        }
        let yes = rng.random_range(0..mine) < bid;
        pools[mover] = if yes { bid } else { mine - bid };
        rounds += 1;
        assert!(
            u64::from(rounds) <= n + m,
            "game from ({n}, {m}) exceeded {} rounds",
            n + m
        );
        if pools[mover] == 1 {
            if let Some(t) = trajectory.as_mut() {
                t.push(GameState::new(pools[1 - mover], 1, player(1 - mover))?);
            }
            return Ok(TrialResult {
                winner: player(mover),
                rounds,
                trajectory,
            });
        }
        mover = 1 - mover;
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SimConfig {
    pub n: u64,
    pub m: u64,
    pub p1: BuiltinStrategy,
    pub p2: BuiltinStrategy,
    pub trials: u64,
    pub seed: u64,
    #[serde(skip)]
    pub workers: Option<usize>,
}

/// JSON shape of a simulation run.
#[derive(Debug, Clone, Serialize)]
pub struct SimulationOutput<C: Serialize> {
    pub config: C,
    pub seed: u64,
    pub trials: u64,
    pub wins: u64,
    pub p_hat: f64,
    pub std_err: f64,
    pub undecided: u64,
}

impl<C: Serialize> SimulationOutput<C> {
    pub fn new(config: C, report: &EstimateReport, undecided: u64) -> Self {
        SimulationOutput {
            config,
            seed: report.seed,
            trials: report.trials,
            wins: report.wins,
            p_hat: report.p_hat,
            std_err: report.std_err,
            undecided,
        }
    }
}

/// Player 1's winning frequency over `trials` independent games.
pub fn estimate_with(
    n: u64,
    m: u64,
    p1: &dyn Strategy,
    p2: &dyn Strategy,
    trials: u64,
    seed: u64,
    workers: Option<usize>,
) -> Result<EstimateReport> {
    if trials == 0 {
        return Err(Error::Domain("trials must be >= 1".into()));
    }
    let wins = run_trials(trials, workers, |i| {
        let mut rng = trial_rng(seed, i);
        let result = play_discrete(n, m, p1, p2, &mut rng, false)?;
        Ok(u64::from(result.winner == Player::P1))
    })?;
    Ok(EstimateReport::from_counts(trials, wins, seed))
}

pub fn estimate_win_prob(config: &SimConfig) -> Result<EstimateReport> {
    estimate_with(
        config.n,
        config.m,
        &config.p1,
        &config.p2,
        config.trials,
        config.seed,
        config.workers,
    )
}

#[derive(Debug, Clone, Serialize)]
pub struct MatrixCell {
    pub p1: BuiltinStrategy,
    pub p2: BuiltinStrategy,
    pub report: EstimateReport,
}

/// Every strategy pair from `strategies`, each run with the same seed.
pub fn strategy_matrix(
    n: u64,
    m: u64,
    strategies: &[BuiltinStrategy],
    trials: u64,
    seed: u64,
    workers: Option<usize>,
) -> Result<Vec<MatrixCell>> {
    let mut cells = Vec::with_capacity(strategies.len() * strategies.len());
    for &p1 in strategies {
        for &p2 in strategies {
            let report = estimate_with(n, m, &p1, &p2, trials, seed, workers)?;
            cells.push(MatrixCell { p1, p2, report });
        }
    }
    Ok(cells)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::simulation::FnStrategy;

    #[test]
    fn pool_two_wins_immediately() {
        for seed in 0..200 {
            let mut rng = trial_rng(seed, 0);
            for p1 in BuiltinStrategy::ALL {
                let r =
                    play_discrete(2, 5, &p1, &BuiltinStrategy::Optimal, &mut rng, false).unwrap();
                assert_eq!(r.winner, Player::P1);
                assert_eq!(r.rounds, 1);
            }
        }
    }

    #[test]
    fn trajectory_is_a_legal_path() {
        let mut rng = trial_rng(3, 0);
        let r = play_discrete(
            20,
            17,
            &BuiltinStrategy::UniformRandom,
            &BuiltinStrategy::Halving,
            &mut rng,
            true,
        )
        .unwrap();
        let t = r.trajectory.unwrap();
        assert_eq!(t[0], GameState::new(20, 17, Player::P1).unwrap());
        assert_eq!(t.len() as u32, r.rounds + 1);
        for w in t.windows(2) {
            assert_eq!(w[1].to_move(), w[0].to_move().other());
            assert_eq!(w[1].my_pool(), w[0].opp_pool());
            assert!(w[1].opp_pool() < w[0].my_pool());
        }
        assert_eq!(t.last().unwrap().winner(), Some(r.winner));
    }

    #[test]
    fn round_bound_holds() {
        for i in 0..2000 {
            let mut rng = trial_rng(11, i);
            let r = play_discrete(
                30,
                30,
                &BuiltinStrategy::AlwaysOne,
                &BuiltinStrategy::AlwaysOne,
                &mut rng,
                false,
            )
            .unwrap();
            assert!(r.rounds <= 60);
        }
    }

    #[test]
    fn bad_strategy_aborts_with_diagnostic() {
        let greedy = FnStrategy::new("whole-pool", |n, _| n);
        let mut rng = trial_rng(0, 0);
        let err =
            play_discrete(5, 5, &greedy, &BuiltinStrategy::Optimal, &mut rng, false).unwrap_err();
        assert_eq!(
            err,
            Error::Strategy {
                strategy: "whole-pool".into(),
                bid: 5,
                pool: 5
            }
        );
    }

    #[test]
    fn rejects_terminal_start() {
        let mut rng = trial_rng(0, 0);
        let s = BuiltinStrategy::Optimal;
        assert!(play_discrete(1, 5, &s, &s, &mut rng, false).is_err());
        assert!(play_discrete(5, 1, &s, &s, &mut rng, false).is_err());
        assert!(play_discrete(1, 1, &s, &s, &mut rng, false).is_err());
    }

    #[test]
    fn results_do_not_depend_on_worker_count() {
        let mut config = SimConfig {
            n: 13,
            m: 11,
            p1: BuiltinStrategy::UniformRandom,
            p2: BuiltinStrategy::Optimal,
            trials: 20_000,
            seed: 42,
            workers: Some(1),
        };
        let single = estimate_win_prob(&config).unwrap();
        config.workers = Some(4);
        let four = estimate_win_prob(&config).unwrap();
        config.workers = None;
        let global = estimate_win_prob(&config).unwrap();
        assert_eq!(single, four);
        assert_eq!(single, global);
        config.seed = 43;
        assert_ne!(estimate_win_prob(&config).unwrap().wins, single.wins);
    }

    #[test]
    fn three_two_matches_closed_form() {
        let config = SimConfig {
            n: 3,
            m: 2,
            p1: BuiltinStrategy::Optimal,
            p2: BuiltinStrategy::Optimal,
            trials: 1_000_000,
            seed: 2024,
            workers: None,
        };
        let r = estimate_win_prob(&config).unwrap();
        assert!(r.within_sigmas(1.0 / 3.0, 4.0), "{r:?}");
    }

    #[test]
    fn always_one_from_pool_two_always_wins() {
        let r = estimate_with(
            2,
            9,
            &BuiltinStrategy::AlwaysOne,
            &BuiltinStrategy::Optimal,
            1000,
            5,
            None,
        )
        .unwrap();
        assert_eq!(r.wins, 1000);
        assert_eq!(r.p_hat, 1.0);
    }

    #[test]
    fn matrix_covers_every_pair() {
        let cells = strategy_matrix(6, 6, &BuiltinStrategy::ALL, 100, 1, None).unwrap();
        assert_eq!(cells.len(), 25);
        assert_eq!(cells[0].p1, BuiltinStrategy::Optimal);
        assert_eq!(cells[1].p2, BuiltinStrategy::Halving);
    }

    #[test]
    fn zero_trials_rejected() {
        let s = BuiltinStrategy::Optimal;
        assert!(estimate_with(4, 4, &s, &s, 0, 0, None).is_err());
    }
}
