use std::fmt;
use std::io::Write;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::matrix_for;
use super::stats::ConfidenceInterval;
use crate::contraction::{contract, ContractionMode};
use crate::domain::InterferenceMatrix;
use crate::error::{Error, Result};
use crate::graph::{build_graph, NetworkGraph};
use crate::optimizers::{
    lccs_with_model, simulated_annealing, DetailedObjective, LccsConfig, Objective, SaConfig,
    SimplifiedObjective,
};
use crate::par::Execution;
use crate::radio::{DetailedModel, SimplifiedModel};
use crate::rng::derive_seed;
use crate::scenario_gen::NamedScenario;

pub const RESULTS_HEADER: [&str; 8] = [
    "scenario_id",
    "family",
    "rho_or_combo",
    "strategy",
    "run",
    "seed",
    "mean_utility",
    "wall_clock_s",
];

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Strategy {
    /// Annealing on the detailed utility of the full graph.
    #[serde(rename = "SA_g")]
    SaG,
    #[serde(rename = "LCCS")]
    Lccs,
    /// Annealing on the uniform contraction.
    #[serde(rename = "SA_u")]
    SaU,
    /// Annealing on the weighted contraction.
    #[serde(rename = "SA_w")]
    SaW,
}

impl Strategy {
    pub const ALL: [Strategy; 4] = [Strategy::SaG, Strategy::Lccs, Strategy::SaU, Strategy::SaW];

    pub fn as_str(self) -> &'static str {
        match self {
            Strategy::SaG => "SA_g",
            Strategy::Lccs => "LCCS",
            Strategy::SaU => "SA_u",
            Strategy::SaW => "SA_w",
        }
    }
}

impl fmt::Display for Strategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Strategy {
    type Err = Error;

    /// Accepts `sa-g`, `sa_g`, `SA_g` and so on, case-insensitively.
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().replace('-', "_").as_str() {
            "sa_g" => Ok(Strategy::SaG),
            "lccs" => Ok(Strategy::Lccs),
            "sa_u" => Ok(Strategy::SaU),
            "sa_w" => Ok(Strategy::SaW),
            _ => Err(Error::Validation(format!("unknown strategy `{s}`"))),
        }
    }
}

#[derive(Debug, Clone)]
pub struct BenchmarkConfig {
    pub runs_per_cell: u32,
    pub seed: u64,
    /// Annealing schedule; the seed is replaced per run.
    pub sa: SaConfig,
    /// LCCS stopping rule; the seed is replaced per run.
    pub lccs: LccsConfig,
    pub matrix: Option<InterferenceMatrix>,
    pub exec: Execution,
}

impl Default for BenchmarkConfig {
    fn default() -> Self {
        BenchmarkConfig {
            runs_per_cell: 10,
            seed: 0,
            sa: SaConfig::default(),
            lccs: LccsConfig::default(),
            matrix: None,
            exec: Execution::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchmarkRow {
    pub scenario_id: String,
    pub family: String,
    pub rho_or_combo: String,
    pub strategy: Strategy,
    pub run: u32,
    pub seed: u64,
    /// Total detailed utility over vertex count; `None` for a failed run.
    pub mean_utility: Option<f64>,
    pub wall_clock_s: f64,
    pub cpu_time_s: f64,
    /// Detailed-model evaluations performed by the run, including the final
    /// scoring of the returned coloring.
    pub detailed_evaluations: u64,
    pub error: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CellSummary {
    pub scenario_id: String,
    pub rho_or_combo: String,
    pub strategy: Strategy,
    pub failed: usize,
    pub mean_utility: Option<ConfidenceInterval>,
    pub wall_clock_s: Option<ConfidenceInterval>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchmarkReport {
    /// Scenario-major, then strategy in the requested order, then run.
    pub rows: Vec<BenchmarkRow>,
    pub cells: Vec<CellSummary>,
}

impl BenchmarkReport {
    pub fn cell(&self, scenario_id: &str, strategy: Strategy) -> Option<&CellSummary> {
        self.cells
            .iter()
            .find(|c| c.scenario_id == scenario_id && c.strategy == strategy)
    }
}

struct Prepared {
    graph: NetworkGraph,
    k: usize,
    detailed: DetailedModel,
    uniform: SimplifiedModel,
    weighted: SimplifiedModel,
}

fn prepare(named: &NamedScenario, matrix: Option<&InterferenceMatrix>) -> Result<Prepared> {
    let s = &named.scenario;
    let w = matrix_for(s, matrix)?;
    let graph = build_graph(s)?;
    let detailed = DetailedModel::new(&graph, &s.radio, &w)?;
    let uniform = SimplifiedModel::new(&contract(&graph, ContractionMode::Uniform), &w)?;
    let weighted = SimplifiedModel::new(&contract(&graph, ContractionMode::Weighted), &w)?;
    Ok(Prepared {
        graph,
        k: w.k(),
        detailed,
        uniform,
        weighted,
    })
}

struct Outcome {
    mean_utility: f64,
    wall_clock_s: f64,
    cpu_time_s: f64,
    detailed_evaluations: u64,
}

fn run_cell(p: &Prepared, strategy: Strategy, cfg: &BenchmarkConfig, seed: u64) -> Result<Outcome> {
    let ap_ids = &p.graph.ap_vertices;
    let n_vertices = p.graph.vertex_count() as f64;
    let sa = cfg.sa.with_seed(seed);
    match strategy {
        Strategy::SaG => {
            let obj = DetailedObjective::new(&p.detailed);
            let r = simulated_annealing(ap_ids, p.k, &obj, &sa)?;
            Ok(Outcome {
                mean_utility: r.best_score / n_vertices,
                wall_clock_s: r.wall_clock_s,
                cpu_time_s: r.cpu_time_s,
                detailed_evaluations: obj.evaluations(),
            })
        }
        Strategy::SaU | Strategy::SaW => {
            let model = if strategy == Strategy::SaU {
                &p.uniform
            } else {
                &p.weighted
            };
            let r = simulated_annealing(ap_ids, p.k, &SimplifiedObjective::new(model), &sa)?;
            // the contracted optimum is only judged on the full graph
            let judge = DetailedObjective::new(&p.detailed);
            let total = judge.evaluate(&r.best_coloring.to_assignment(ap_ids)?);
            Ok(Outcome {
                mean_utility: total / n_vertices,
                wall_clock_s: r.wall_clock_s,
                cpu_time_s: r.cpu_time_s,
                detailed_evaluations: judge.evaluations(),
            })
        }
        Strategy::Lccs => {
            let r = lccs_with_model(&p.detailed, ap_ids, &cfg.lccs.with_seed(seed))?;
            Ok(Outcome {
                mean_utility: r.best_score / n_vertices,
                wall_clock_s: r.wall_clock_s,
                cpu_time_s: r.cpu_time_s,
                detailed_evaluations: r.evaluations,
            })
        }
    }
}

/// Runs every (scenario, strategy, run) cell.
///
/// Run `r` of a scenario uses the same seed for every strategy, so all
/// strategies start from the same random coloring. Timings cover the
/// optimization call only; graph building, contraction and model
/// preparation happen beforehand. A failing cell yields a row with `error`
/// set and does not stop the others.
pub fn benchmark(
    scenarios: &[NamedScenario],
    strategies: &[Strategy],
    cfg: &BenchmarkConfig,
) -> Result<BenchmarkReport> {
    if scenarios.is_empty() || strategies.is_empty() || cfg.runs_per_cell == 0 {
        return Err(Error::Validation(
            "benchmark needs scenarios, strategies and at least one run".into(),
        ));
    }
    let prepared = cfg.exec.map(scenarios, |named| {
        prepare(named, cfg.matrix.as_ref()).map_err(|e| e.to_string())
    });

    let mut jobs = Vec::new();
    for si in 0..scenarios.len() {
        for &strategy in strategies {
            for run in 0..cfg.runs_per_cell {
                jobs.push((si, strategy, run));
            }
        }
    }

    let rows = cfg.exec.map(&jobs, |&(si, strategy, run)| {
        let named = &scenarios[si];
        let seed = derive_seed(cfg.seed, &[si as u64, run as u64]);
        let outcome = match &prepared[si] {
            Ok(p) => run_cell(p, strategy, cfg, seed).map_err(|e| e.to_string()),
            Err(e) => Err(e.clone()),
        };
        let mut row = BenchmarkRow {
            scenario_id: named.id.clone(),
            family: named.family.as_str().to_string(),
            rho_or_combo: named.label.clone(),
            strategy,
            run,
            seed,
            mean_utility: None,
            wall_clock_s: 0.0,
            cpu_time_s: 0.0,
            detailed_evaluations: 0,
            error: None,
        };
        match outcome {
            Ok(o) => {
                row.mean_utility = Some(o.mean_utility);
                row.wall_clock_s = o.wall_clock_s;
                row.cpu_time_s = o.cpu_time_s;
                row.detailed_evaluations = o.detailed_evaluations;
            }
            Err(e) => {
                log::error!("{} {strategy} run {run}: {e}", named.id);
                row.error = Some(e);
            }
        }
        row
    });

    let cells = rows
        .chunks(cfg.runs_per_cell as usize)
        .map(|chunk| {
            let ok: Vec<&BenchmarkRow> = chunk.iter().filter(|r| r.error.is_none()).collect();
            let utilities: Vec<f64> = ok.iter().filter_map(|r| r.mean_utility).collect();
            let times: Vec<f64> = ok.iter().map(|r| r.wall_clock_s).collect();
            CellSummary {
                scenario_id: chunk[0].scenario_id.clone(),
                rho_or_combo: chunk[0].rho_or_combo.clone(),
                strategy: chunk[0].strategy,
                failed: chunk.len() - ok.len(),
                mean_utility: ConfidenceInterval::student_t(&utilities, 0.95),
                wall_clock_s: ConfidenceInterval::student_t(&times, 0.95),
            }
        })
        .collect();
    Ok(BenchmarkReport { rows, cells })
}

pub fn write_results_csv<W: Write>(rows: &[BenchmarkRow], writer: W) -> Result<()> {
    let mut wtr = csv::Writer::from_writer(writer);
    wtr.write_record(RESULTS_HEADER)?;
    for r in rows {
        wtr.write_record([
            r.scenario_id.clone(),
            r.family.clone(),
            r.rho_or_combo.clone(),
            r.strategy.to_string(),
            r.run.to_string(),
            r.seed.to_string(),
            r.mean_utility.map_or_else(String::new, |u| u.to_string()),
            r.wall_clock_s.to_string(),
        ])?;
    }
    wtr.flush().map_err(|e| Error::io("<results csv>", e))?;
    Ok(())
}
