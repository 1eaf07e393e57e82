//! Channel assignment strategies.
//!
//! All optimizers work on dense assignments: `assignment[i]` is the channel
//! of the `i`-th AP in the caller's AP id list. Every strategy is a
//! deterministic function of its inputs and seed.

use std::sync::atomic::{AtomicU64, Ordering};

use serde::{Deserialize, Serialize};

use crate::domain::{Channel, Coloring};
use crate::radio::{DetailedModel, SimplifiedModel};

mod brute;
mod lccs;
mod random;
mod sa;

pub use brute::{brute_force, DEFAULT_BRUTE_FORCE_CAP};
pub use lccs::{lccs, lccs_with_model, LccsConfig, LccsMode};
pub use random::{random_assignment, random_coloring};
pub use sa::{simulated_annealing, SaConfig};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Direction {
    Maximize,
    Minimize,
}

impl Direction {
    /// True when `candidate` is strictly better than `incumbent`.
    pub fn improves(self, candidate: f64, incumbent: f64) -> bool {
        match self {
            Direction::Maximize => candidate > incumbent,
            Direction::Minimize => candidate < incumbent,
        }
    }

    /// How much worse `candidate` is than `incumbent`; negative when better.
    pub fn worsening(self, candidate: f64, incumbent: f64) -> f64 {
        match self {
            Direction::Maximize => incumbent - candidate,
            Direction::Minimize => candidate - incumbent,
        }
    }
}

/// A score over dense assignments.
pub trait Objective: Sync {
    fn evaluate(&self, assignment: &[Channel]) -> f64;
    fn direction(&self) -> Direction;
    fn description(&self) -> String;
}

/// Total detailed utility on the full graph, maximized.
///
/// Counts its evaluations so that callers can check which model an
/// optimization actually consulted.
pub struct DetailedObjective<'a> {
    model: &'a DetailedModel,
    evaluations: AtomicU64,
}

impl<'a> DetailedObjective<'a> {
    pub fn new(model: &'a DetailedModel) -> Self {
        DetailedObjective {
            model,
            evaluations: AtomicU64::new(0),
        }
    }

    pub fn evaluations(&self) -> u64 {
        self.evaluations.load(Ordering::Relaxed)
    }
}

impl Objective for DetailedObjective<'_> {
    fn evaluate(&self, assignment: &[Channel]) -> f64 {
        self.evaluations.fetch_add(1, Ordering::Relaxed);
        self.model.total(assignment)
    }

    fn direction(&self) -> Direction {
        Direction::Maximize
    }

    fn description(&self) -> String {
        "total detailed utility".into()
    }
}

/// Total simplified utility on a contracted graph, minimized.
pub struct SimplifiedObjective<'a> {
    model: &'a SimplifiedModel,
}

impl<'a> SimplifiedObjective<'a> {
    pub fn new(model: &'a SimplifiedModel) -> Self {
        SimplifiedObjective { model }
    }
}

impl Objective for SimplifiedObjective<'_> {
    fn evaluate(&self, assignment: &[Channel]) -> f64 {
        self.model.total(assignment)
    }

    fn direction(&self) -> Direction {
        Direction::Minimize
    }

    fn description(&self) -> String {
        "total simplified utility".into()
    }
}

/// Wraps a closure.
pub struct FnObjective<F> {
    f: F,
    direction: Direction,
    description: String,
}

impl<F: Fn(&[Channel]) -> f64 + Sync> FnObjective<F> {
    pub fn new(direction: Direction, description: impl Into<String>, f: F) -> Self {
        FnObjective {
            f,
            direction,
            description: description.into(),
        }
    }
}

impl<F: Fn(&[Channel]) -> f64 + Sync> Objective for FnObjective<F> {
    fn evaluate(&self, assignment: &[Channel]) -> f64 {
        (self.f)(assignment)
    }

    fn direction(&self) -> Direction {
        self.direction
    }

    fn description(&self) -> String {
        self.description.clone()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TracePoint {
    pub iteration: u64,
    /// Score of the state held after this iteration.
    pub current: f64,
    /// Best score seen so far.
    pub best: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "strategy", rename_all = "snake_case")]
pub enum RunConfig {
    SimulatedAnnealing(SaConfig),
    Lccs(LccsConfig),
    BruteForce { cap: u64 },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OptimizationResult {
    pub config: RunConfig,
    pub objective: String,
    pub direction: Direction,
    pub best_coloring: Coloring,
    pub best_score: f64,
    /// Objective evaluations performed, including the initial one.
    pub evaluations: u64,
    /// Evaluated moves or proposals that were not applied.
    pub rejected: u64,
    pub score_trace: Vec<TracePoint>,
    pub wall_clock_s: f64,
    pub cpu_time_s: f64,
}

impl OptimizationResult {
    pub fn to_json(&self) -> crate::Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }
}
