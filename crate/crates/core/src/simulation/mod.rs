//! Monte Carlo play of the discrete and continuous games, plus exact
//! evaluation of fixed strategy profiles.
//!
//! Trial `i` of a run seeded with `seed` always draws from ChaCha8 stream
//! `i` of that seed, so results do not depend on how trials are scheduled
//! across worker threads.

mod continuous;
mod discrete;
mod policy;
mod strategy;

pub use continuous::{
    estimate_escape, play_continuous, simulate_continuous, ContinuousConfig, ContinuousOutcome,
    ContinuousReport,
};
pub use discrete::{
    estimate_win_prob, estimate_with, play_discrete, strategy_matrix, MatrixCell, SimConfig,
    SimulationOutput, TrialResult,
};
pub use policy::{evaluate_policy, evaluate_profile, to_big, PolicyTable};
pub use strategy::{BuiltinStrategy, FnStrategy, Strategy};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Independent generator for one trial.
pub fn trial_rng(seed: u64, trial: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial);
    rng
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EstimateReport {
    pub trials: u64,
    pub wins: u64,
    pub p_hat: f64,
    pub std_err: f64,
    pub seed: u64,
}

impl EstimateReport {
    pub fn from_counts(trials: u64, wins: u64, seed: u64) -> Self {
        let p_hat = if trials == 0 {
            0.0
        } else {
            wins as f64 / trials as f64
        };
        let std_err = if trials == 0 {
            0.0
        } else {
            (p_hat * (1.0 - p_hat) / trials as f64).sqrt()
        };
        EstimateReport {
            trials,
            wins,
            p_hat,
            std_err,
            seed,
        }
    }

    /// `|p_hat - expected|` in units of the standard error (0 when both vanish).
    pub fn z_score(&self, expected: f64) -> f64 {
        let diff = (self.p_hat - expected).abs();
        if diff == 0.0 {
            0.0
        } else {
            diff / self.std_err
        }
    }

    pub fn within_sigmas(&self, expected: f64, sigmas: f64) -> bool {
        self.z_score(expected) <= sigmas
    }
}

/// Runs `trial(i)` for `i in 0..trials` and sums the per-trial counts.
/// `workers = None` uses rayon's global pool.
pub(crate) fn run_trials<T, F>(trials: u64, workers: Option<usize>, trial: F) -> Result<T>
where
    T: Send + Default + std::ops::Add<Output = T>,
    F: Fn(u64) -> Result<T> + Send + Sync,
{
    let job = || {
        (0..trials)
            .into_par_iter()
            .map(&trial)
            .try_reduce(T::default, |a, b| Ok(a + b))
    };
    match workers {
        None => job(),
        Some(w) => rayon::ThreadPoolBuilder::new()
            .num_threads(w.max(1))
            .build()
            .map_err(|e| Error::Domain(format!("cannot start worker pool: {e}")))?
            .install(job),
    }
}
