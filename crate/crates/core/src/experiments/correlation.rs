use std::io::Write;

use serde::{Deserialize, Serialize};

use super::matrix_for;
use super::stats::{pearson, FiveNumber};
use crate::contraction::{contract, ContractionMode};
use crate::domain::{Channel, InterferenceMatrix};
use crate::error::{Error, Result};
use crate::graph::build_graph;
use crate::optimizers::random_assignment;
use crate::par::Execution;
use crate::radio::{DetailedModel, SimplifiedModel};
use crate::rng::{derive_seed, rng_from_seed};
use crate::scenario_gen::NamedScenario;

pub const CORRELATION_HEADER: [&str; 3] = ["graph_id", "mode", "pearson_r"];

#[derive(Debug, Clone)]
pub struct CorrelationConfig {
    pub colorings_per_graph: usize,
    pub seed: u64,
    /// Keep the normalized per-coloring pairs in each record.
    pub keep_scatter: bool,
    pub matrix: Option<InterferenceMatrix>,
    pub exec: Execution,
}

impl Default for CorrelationConfig {
    fn default() -> Self {
        CorrelationConfig {
            colorings_per_graph: 1000,
            seed: 0,
            keep_scatter: false,
            matrix: None,
            exec: Execution::default(),
        }
    }
}

/// One random coloring, both axes normalized to `[0, 1]` over the graph's
/// colorings. Higher is better on both axes: the simplified axis is the
/// negated mean interference sum.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScatterPoint {
    pub simplified: f64,
    pub detailed: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CorrelationRecord {
    pub graph_id: String,
    pub mode: ContractionMode,
    pub colorings: usize,
    /// `None` when either axis is constant over the colorings.
    pub pearson_r: Option<f64>,
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    pub pairs: Vec<ScatterPoint>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModeSummary {
    pub mode: ContractionMode,
    pub graphs: usize,
    pub undefined: usize,
    /// Over defined coefficients only.
    pub box_plot: Option<FiveNumber>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CorrelationStudy {
    /// Graph-major, uniform before weighted.
    pub records: Vec<CorrelationRecord>,
    pub summaries: Vec<ModeSummary>,
}

impl CorrelationStudy {
    pub fn summary(&self, mode: ContractionMode) -> &ModeSummary {
        self.summaries
            .iter()
            .find(|s| s.mode == mode)
            .expect("every mode is summarized")
    }
}

/// Scores random colorings of every corpus graph under the detailed model and
/// both contractions, and correlates the per-coloring means.
pub fn correlation_study(
    corpus: &[NamedScenario],
    cfg: &CorrelationConfig,
) -> Result<CorrelationStudy> {
    if corpus.is_empty() {
        return Err(Error::Validation(
            "correlation study needs at least one graph".into(),
        ));
    }
    if cfg.colorings_per_graph < 2 {
        return Err(Error::Validation(
            "at least two colorings per graph are needed".into(),
        ));
    }
    let per_graph = cfg
        .exec
        .map_range(corpus.len(), |i| study_graph(i, &corpus[i], cfg));
    let mut records = Vec::with_capacity(corpus.len() * 2);
    for r in per_graph {
        records.extend(r?);
    }

    let summaries = ContractionMode::ALL
        .iter()
        .map(|&mode| {
            let of_mode: Vec<&CorrelationRecord> =
                records.iter().filter(|r| r.mode == mode).collect();
            let defined: Vec<f64> = of_mode.iter().filter_map(|r| r.pearson_r).collect();
            ModeSummary {
                mode,
                graphs: of_mode.len(),
                undefined: of_mode.len() - defined.len(),
                box_plot: FiveNumber::of(&defined),
            }
        })
        .collect();
    Ok(CorrelationStudy { records, summaries })
}

fn study_graph(
    index: usize,
    named: &NamedScenario,
    cfg: &CorrelationConfig,
) -> Result<Vec<CorrelationRecord>> {
    let s = &named.scenario;
    let w = matrix_for(s, cfg.matrix.as_ref())?;
    let g = build_graph(s)?;
    let detailed = DetailedModel::new(&g, &s.radio, &w)?;
    let simplified = ContractionMode::ALL
        .iter()
        .map(|&m| SimplifiedModel::new(&contract(&g, m), &w))
        .collect::<Result<Vec<_>>>()?;

    let mut rng = rng_from_seed(derive_seed(cfg.seed, &[index as u64]));
    let n_aps = g.ap_vertices.len();
    let colorings: Vec<Vec<Channel>> = (0..cfg.colorings_per_graph)
        .map(|_| random_assignment(n_aps, w.k(), &mut rng))
        .collect();

    let n_vertices = g.vertex_count() as f64;
    let scored: Vec<(f64, Vec<f64>)> = cfg.exec.map(&colorings, |c| {
        let d = detailed.total(c) / n_vertices;
        let simp = simplified
            .iter()
            .map(|m| -m.total(c) / n_aps as f64)
            .collect();
        (d, simp)
    });

    let detailed_axis = normalize(&scored.iter().map(|(d, _)| *d).collect::<Vec<_>>());
    let records = ContractionMode::ALL
        .iter()
        .enumerate()
        .map(|(mi, &mode)| {
            let simplified_axis = normalize(&scored.iter().map(|(_, s)| s[mi]).collect::<Vec<_>>());
            let pearson_r = pearson(&simplified_axis, &detailed_axis);
            if pearson_r.is_none() {
                log::info!(
                    "{} ({mode}): correlation undefined, an axis is constant",
                    named.id
                );
            }
            let pairs = if cfg.keep_scatter {
                simplified_axis
                    .iter()
                    .zip(&detailed_axis)
                    .map(|(&simplified, &detailed)| ScatterPoint {
                        simplified,
                        detailed,
                    })
                    .collect()
            } else {
                Vec::new()
            };
            CorrelationRecord {
                graph_id: named.id.clone(),
                mode,
                colorings: colorings.len(),
                pearson_r,
                pairs,
            }
        })
        .collect();
    Ok(records)
}

/// Maps the observed minimum to 0 and maximum to 1; constant input maps to 0.
fn normalize(xs: &[f64]) -> Vec<f64> {
    let lo = xs.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = xs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let span = hi - lo;
    xs.iter()
        .map(|&x| if span > 0.0 { (x - lo) / span } else { 0.0 })
        .collect()
}

pub fn write_correlation_csv<W: Write>(records: &[CorrelationRecord], writer: W) -> Result<()> {
    let mut wtr = csv::Writer::from_writer(writer);
    wtr.write_record(CORRELATION_HEADER)?;
    for r in records {
        let coefficient = r
            .pearson_r
            .map_or_else(|| "undefined".to_string(), |v| v.to_string());
        wtr.write_record([r.graph_id.as_str(), r.mode.as_str(), coefficient.as_str()])?;
    }
    wtr.flush().map_err(|e| Error::io("<correlation csv>", e))?;
    Ok(())
}

pub fn write_scatter_csv<W: Write>(record: &CorrelationRecord, writer: W) -> Result<()> {
    let mut wtr = csv::Writer::from_writer(writer);
    wtr.write_record(["coloring", "simplified", "detailed"])?;
    for (i, p) in record.pairs.iter().enumerate() {
        wtr.write_record([
            i.to_string(),
            p.simplified.to_string(),
            p.detailed.to_string(),
        ])?;
    }
    wtr.flush().map_err(|e| Error::io("<scatter csv>", e))?;
    Ok(())
}
