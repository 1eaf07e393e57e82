//! Coordinated Least Congested Channel Search.
//!
//! APs are visited in rounds, each round in a fresh random order. The
//! visited AP proposes the channel that minimizes the linear interference
//! received by itself and its WDs from every other group. A central
//! controller applies the proposal only if the global detailed utility does
//! not decrease. The current channel is kept when it is among the minimizers;
//! otherwise ties go to the smallest channel.
//!
//! The search stops early once a whole round applies no change: proposals
//! depend only on the current state, so later rounds would repeat it.

use rand::seq::SliceRandom;
use serde::{Deserialize, Serialize};

use super::{random_assignment, OptimizationResult, RunConfig, TracePoint};
use crate::domain::{Channel, Coloring, InterferenceMatrix, RadioParams};
use crate::error::{Error, Result};
use crate::graph::NetworkGraph;
use crate::radio::DetailedModel;
use crate::rng::rng_from_seed;
use crate::timing::Stopwatch;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "mode", rename_all = "snake_case")]
pub enum LccsMode {
    /// Stop after this many proposals.
    Proposals { count: u64 },
    /// Stop after this many full rounds.
    Converge { max_rounds: u32 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct LccsConfig {
    pub mode: LccsMode,
    pub seed: u64,
}

impl Default for LccsConfig {
    fn default() -> Self {
        LccsConfig {
            mode: LccsMode::Proposals { count: 3000 },
            seed: 0,
        }
    }
}

impl LccsConfig {
    pub fn converge(seed: u64) -> Self {
        LccsConfig {
            mode: LccsMode::Converge { max_rounds: 50 },
            seed,
        }
    }

    pub fn with_seed(self, seed: u64) -> Self {
        LccsConfig { seed, ..self }
    }
}

pub fn lccs(
    g: &NetworkGraph,
    p: &RadioParams,
    w: &InterferenceMatrix,
    cfg: &LccsConfig,
) -> Result<OptimizationResult> {
    let model = DetailedModel::new(g, p, w)?;
    lccs_with_model(&model, &g.ap_vertices, cfg)
}

/// Runs LCCS against a prepared model whose APs are `ap_ids`, in order.
pub fn lccs_with_model(
    model: &DetailedModel,
    ap_ids: &[u32],
    cfg: &LccsConfig,
) -> Result<OptimizationResult> {
    if ap_ids.is_empty() {
        return Err(Error::Validation("no access points to color".into()));
    }
    if ap_ids.len() != model.ap_count() {
        return Err(Error::Validation(format!(
            "{} AP ids for a model with {} APs",
            ap_ids.len(),
            model.ap_count()
        )));
    }
    let watch = Stopwatch::start();
    let n = ap_ids.len();
    let k = model.spectrum_size();
    let gains = model.group_gains();
    let mut rng = rng_from_seed(cfg.seed);

    let mut current = random_assignment(n, k, &mut rng);
    let mut total = model.total(&current);
    let mut evaluations = 1u64;
    let mut rejected = 0u64;
    let mut trace = vec![TracePoint {
        iteration: 0,
        current: total,
        best: total,
    }];

    let received = |ap: usize, channel: Channel, assignment: &[Channel]| -> f64 {
        gains[ap]
            .iter()
            .map(|&(other, gain)| gain * model.overlap_linear(channel, assignment[other as usize]))
            .sum()
    };

    let mut order: Vec<usize> = (0..n).collect();
    let mut proposals = 0u64;
    let mut rounds = 0u32;
    'rounds: loop {
        rounds += 1;
        order.shuffle(&mut rng);
        let mut changed = false;
        for &ap in &order {
            if let LccsMode::Proposals { count } = cfg.mode {
                if proposals >= count {
                    break 'rounds;
                }
            }
            proposals += 1;

            let held = current[ap];
            let mut choice = held;
            let mut least = received(ap, held, &current);
            for channel in 1..=k as Channel {
                let r = received(ap, channel, &current);
                if r < least {
                    least = r;
                    choice = channel;
                }
            }
            if choice != held {
                current[ap] = choice;
                let candidate = model.total(&current);
                evaluations += 1;
                if candidate >= total {
                    total = candidate;
                    changed = true;
                } else {
                    current[ap] = held;
                    rejected += 1;
                }
            }
            trace.push(TracePoint {
                iteration: proposals,
                current: total,
                best: total,
            });
        }
        if !changed {
            break;
        }
        if let LccsMode::Converge { max_rounds } = cfg.mode {
            if rounds >= max_rounds {
                break;
            }
        }
    }

    let timing = watch.stop();
    Ok(OptimizationResult {
        config: RunConfig::Lccs(*cfg),
        objective: "total detailed utility".into(),
        direction: super::Direction::Maximize,
        best_coloring: Coloring::from_assignment(ap_ids, &current),
        best_score: total,
        evaluations,
        rejected,
        score_trace: trace,
        wall_clock_s: timing.wall_clock_s,
        cpu_time_s: timing.cpu_time_s,
    })
}
