//! Simulated annealing over AP colorings.
//!
//! The search starts from a uniform random coloring. Each iteration moves
//! one uniformly chosen AP to a uniformly chosen different channel. Moves
//! that do not worsen the score are always taken; a move that worsens it by
//! `delta` is taken with probability `exp(-delta / T)`. The temperature
//! cools geometrically after every iteration.

use rand::Rng as _;
use serde::{Deserialize, Serialize};

use super::{random_assignment, Objective, OptimizationResult, RunConfig, TracePoint};
use crate::domain::{Channel, Coloring};
use crate::rng::rng_from_seed;
use crate::timing::Stopwatch;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SaConfig {
    pub iterations: u64,
    /// Starting temperature. `None` uses the magnitude of the initial score
    /// (or 1 when that score is 0).
    pub initial_temperature: Option<f64>,
    pub cooling_factor: f64,
    pub seed: u64,
}

impl Default for SaConfig {
    fn default() -> Self {
        SaConfig {
            iterations: 3000,
            initial_temperature: None,
            cooling_factor: 0.995,
            seed: 0,
        }
    }
}

impl SaConfig {
    pub fn with_seed(self, seed: u64) -> Self {
        SaConfig { seed, ..self }
    }

    pub fn validate(&self) -> crate::Result<()> {
        if self.iterations == 0 {
            return Err(crate::Error::Validation(
                "iterations must be at least 1".into(),
            ));
        }
        if !(self.cooling_factor > 0.0 && self.cooling_factor < 1.0) {
            return Err(crate::Error::Validation(format!(
                "cooling factor must lie in (0, 1), got {}",
                self.cooling_factor
            )));
        }
        if let Some(t) = self.initial_temperature {
            if !(t > 0.0 && t.is_finite()) {
                return Err(crate::Error::Validation(format!(
                    "initial temperature must be positive, got {t}"
                )));
            }
        }
        Ok(())
    }
}

pub fn simulated_annealing(
    ap_ids: &[u32],
    k: usize,
    obj: &dyn Objective,
    cfg: &SaConfig,
) -> crate::Result<OptimizationResult> {
    cfg.validate()?;
    if ap_ids.is_empty() {
        return Err(crate::Error::Validation("no access points to color".into()));
    }
    if k == 0 {
        return Err(crate::Error::Validation(
            "spectrum must hold at least one channel".into(),
        ));
    }
    let watch = Stopwatch::start();
    let direction = obj.direction();
    let mut rng = rng_from_seed(cfg.seed);
    let n = ap_ids.len();

    let mut current = random_assignment(n, k, &mut rng);
    let mut current_score = obj.evaluate(&current);
    let mut evaluations = 1;
    let mut rejected = 0;
    let mut best = current.clone();
    let mut best_score = current_score;
    let mut temperature = cfg.initial_temperature.unwrap_or_else(|| {
        let m = current_score.abs();
        if m > 0.0 && m.is_finite() {
            m
        } else {
            1.0
        }
    });

    let mut trace = Vec::with_capacity(cfg.iterations as usize + 1);
    trace.push(TracePoint {
        iteration: 0,
        current: current_score,
        best: best_score,
    });

    for iteration in 1..=cfg.iterations {
        if k > 1 {
            let ap = rng.random_range(0..n);
            let old = current[ap];
            let mut channel = rng.random_range(1..k as Channel);
            if channel >= old {
                channel += 1;
            }
            current[ap] = channel;
            let score = obj.evaluate(&current);
            evaluations += 1;
            let worse_by = direction.worsening(score, current_score);
            let accept = worse_by <= 0.0 || rng.random::<f64>() < (-worse_by / temperature).exp();
            if accept {
                current_score = score;
                if direction.improves(score, best_score) {
                    best.copy_from_slice(&current);
                    best_score = score;
                }
            } else {
                current[ap] = old;
                rejected += 1;
            }
        }
        temperature *= cfg.cooling_factor;
        trace.push(TracePoint {
            iteration,
            current: current_score,
            best: best_score,
        });
    }

    let timing = watch.stop();
    Ok(OptimizationResult {
        config: RunConfig::SimulatedAnnealing(*cfg),
        objective: obj.description(),
        direction,
        best_coloring: Coloring::from_assignment(ap_ids, &best),
        best_score,
        evaluations,
        rejected,
        score_trace: trace,
        wall_clock_s: timing.wall_clock_s,
        cpu_time_s: timing.cpu_time_s,
    })
}
