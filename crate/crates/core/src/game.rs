//! The bookmaker game.
//!
//! Each round Alice picks button `i` with probability `b_i` and stakes one
//! unit that the light will show `1`. A bookmaker who believes the sum of the
//! `P_i` never exceeds `α` pays `g_i − ε` per unit on a win, with
//! `g_i = 1 / (α·b_i)`. Her expected profit per unit and round is
//! `(1/α)·Σ P_i − ε·Σ b_i P_i − 1`, which approaches `ϑ/α − 1` for a quantum
//! realization reaching `Σ P_i = ϑ`.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rng;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GameConfig {
    /// `P_i`, the chance that button `i` lights `1`.
    pub probabilities: Vec<f64>,
    /// `b_i`, Alice's betting distribution; positive and summing to one.
    pub betting: Vec<f64>,
    /// The bound the bookmaker trusts.
    pub alpha_used: f64,
    pub epsilon: f64,
    /// Money per round; results are reported per unit.
    pub stake: f64,
    pub rounds: u64,
    pub seed: u64,
    /// Rounds are split into this many contiguous batches, each with its own
    /// derived seed, run concurrently and summed in batch order.
    pub workers: usize,
}

impl GameConfig {
    /// Uniform betting, unit stake, single worker.
    pub fn uniform(probabilities: Vec<f64>, alpha_used: f64, epsilon: f64, rounds: u64, seed: u64) -> Self {
        let n = probabilities.len().max(1);
        GameConfig {
            betting: vec![1.0 / n as f64; probabilities.len()],
            probabilities,
            alpha_used,
            epsilon,
            stake: 1.0,
            rounds,
            seed,
            workers: 1,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let n = self.probabilities.len();
        if n == 0 {
            return Err(Error::input("game needs at least one button"));
        }
        if self.betting.len() != n {
            return Err(Error::input(format!("{} betting weights for {n} buttons", self.betting.len())));
        }
        if let Some(p) = self.probabilities.iter().find(|p| !(0.0..=1.0).contains(*p)) {
            return Err(Error::input(format!("probability {p} outside [0, 1]")));
        }
        if let Some(b) = self.betting.iter().find(|b| !(**b > 0.0 && b.is_finite())) {
            return Err(Error::input(format!("betting weight {b} must be positive")));
        }
        let total: f64 = self.betting.iter().sum();
        if (total - 1.0).abs() > 1e-12 {
            return Err(Error::input(format!("betting weights sum to {total}, not 1")));
        }
        if !(self.alpha_used > 0.0 && self.alpha_used.is_finite()) {
            return Err(Error::input(format!("alpha_used must be positive, got {}", self.alpha_used)));
        }
        if !(self.epsilon >= 0.0 && self.epsilon.is_finite()) {
            return Err(Error::input(format!("epsilon must be non-negative, got {}", self.epsilon)));
        }
        // a win must never pay less than nothing
        let min_gain = self.gains().into_iter().fold(f64::INFINITY, f64::min);
        if self.epsilon > min_gain {
            return Err(Error::input(format!("epsilon {} exceeds the smallest gain {min_gain}", self.epsilon)));
        }
        if !(self.stake > 0.0 && self.stake.is_finite()) {
            return Err(Error::input(format!("stake must be positive, got {}", self.stake)));
        }
        if self.workers == 0 {
            return Err(Error::input("workers must be at least 1"));
        }
        Ok(())
    }

    /// `g_i = 1 / (α·b_i)`.
    pub fn gains(&self) -> Vec<f64> {
        self.betting.iter().map(|b| 1.0 / (self.alpha_used * b)).collect()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GameResult {
    #[serde(rename = "empirical")]
    pub empirical_profit_per_unit: f64,
    #[serde(rename = "stderr")]
    pub standard_error: f64,
    #[serde(rename = "analytic")]
    pub analytic_expectation: f64,
    pub rounds: u64,
    pub seed: u64,
}

/// Expected profit per unit stake and round.
pub fn expected_profit(cfg: &GameConfig) -> Result<f64> {
    cfg.validate()?;
    let sum_p: f64 = cfg.probabilities.iter().sum();
    let weighted: f64 = cfg.betting.iter().zip(&cfg.probabilities).map(|(b, p)| b * p).sum();
    Ok(sum_p / cfg.alpha_used - cfg.epsilon * weighted - 1.0)
}

pub fn simulate_game(cfg: &GameConfig) -> Result<GameResult> {
    cfg.validate()?;
    if cfg.rounds == 0 {
        return Err(Error::input("rounds must be positive"));
    }
    let analytic = expected_profit(cfg)?;
    let gains = cfg.gains();
    let mut cumulative = Vec::with_capacity(cfg.betting.len());
    let mut acc = 0.0;
    for b in &cfg.betting {
        acc += b;
        cumulative.push(acc);
    }

    let workers = (cfg.workers as u64).min(cfg.rounds).max(1);
    let per = cfg.rounds / workers;
    let batches: Vec<(u64, u64)> =
        (0..workers).map(|w| (w, if w == workers - 1 { cfg.rounds - per * w } else { per })).collect();
    let run =
        |&(index, rounds): &(u64, u64)| play_batch(cfg, &gains, &cumulative, rng::derive_seed(cfg.seed, index), rounds);
    let sums: Vec<(f64, f64)> = if workers == 1 {
        batches.iter().map(run).collect()
    } else {
        std::thread::scope(|scope| {
            let handles: Vec<_> = batches.iter().map(|b| scope.spawn(move || run(b))).collect();
            handles.into_iter().map(|h| h.join().expect("game worker panicked")).collect()
        })
    };
    let (sum, sum_sq) = sums.iter().fold((0.0, 0.0), |(s, q), (a, b)| (s + a, q + b));

    let count = cfg.rounds as f64;
    let mean = sum / count;
    let standard_error = if cfg.rounds > 1 {
        let var = ((sum_sq - count * mean * mean) / (count - 1.0)).max(0.0);
        (var / count).sqrt()
    } else {
        0.0
    };
    Ok(GameResult {
        empirical_profit_per_unit: mean,
        standard_error,
        analytic_expectation: analytic,
        rounds: cfg.rounds,
        seed: cfg.seed,
    })
}

/// Sum and sum of squares of the per-unit profit over `rounds` rounds.
fn play_batch(cfg: &GameConfig, gains: &[f64], cumulative: &[f64], seed: u64, rounds: u64) -> (f64, f64) {
    let mut rng = rng::seeded(seed);
    let last = cumulative.len() - 1;
    let (mut sum, mut sum_sq) = (0.0, 0.0);
    for _ in 0..rounds {
        let u: f64 = rng.gen();
        let button = cumulative.partition_point(|&c| c <= u).min(last);
        let lit = rng.gen::<f64>() < cfg.probabilities[button];
        let profit = if lit { gains[button] - cfg.epsilon } else { 0.0 } - 1.0;
        sum += profit;
        sum_sq += profit * profit;
    }
    (sum, sum_sq)
}
