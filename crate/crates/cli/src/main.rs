//! Command-line front end: scenario generation, graph export, single
//! optimizations and the two experiment pipelines.

mod input;
mod manifest;

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use chanassign::contraction::{contract, ContractionMode};
use chanassign::domain::{InterferenceRadii, Scenario, DEFAULT_SPECTRUM_SIZE};
use chanassign::experiments::stats::ConfidenceInterval;
use chanassign::experiments::{
    benchmark, correlation_study, matrix_for, write_correlation_csv, write_results_csv,
    write_scatter_csv, BenchmarkConfig, BenchmarkRow, CorrelationConfig, Strategy,
};
use chanassign::graph::build_graph;
use chanassign::optimizers::{
    brute_force, lccs_with_model, simulated_annealing, DetailedObjective, LccsConfig, LccsMode,
    OptimizationResult, SaConfig, SimplifiedObjective, DEFAULT_BRUTE_FORCE_CAP,
};
use chanassign::par::Execution;
use chanassign::radio::{DetailedModel, SimplifiedModel};
use chanassign::scenario_gen::{
    gen_classroom_scenario, gen_corpus_with, gen_random_scenario, ClassroomScenarioSpec,
    CorpusSpec, Floorplan, NamedScenario, RandomScenarioSpec,
};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use input::{apply_radii, load_scenarios, read_matrix, read_scenario, CorpusIndex, IndexEntry};
use manifest::OutputDir;

#[derive(Debug, Parser)]
#[command(
    name = "chanassign",
    version,
    about = "Wi-Fi channel assignment on two-layer interference graphs"
)]
struct Cli {
    /// Master seed. Every random choice is derived from it.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,

    /// Output directory for data files and the run manifest.
    #[arg(long, global = true, env = "CHANASSIGN_OUT", default_value = "out")]
    out: PathBuf,

    /// Worker threads for independent experiment cells. 1 runs sequentially.
    #[arg(long, global = true)]
    jobs: Option<usize>,

    /// Channel interference matrix as a k-by-k CSV of dB values.
    #[arg(long, global = true)]
    matrix: Option<PathBuf>,

    /// Interference radii in meters as `ap_ap,ap_wd,wd_wd`.
    #[arg(long, global = true)]
    radii: Option<InterferenceRadii>,

    /// Increase log verbosity (repeatable).
    #[arg(short, long, global = true, action = clap::ArgAction::Count)]
    verbose: u8,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Generate scenario files.
    Generate {
        #[command(subcommand)]
        what: Generate,
    },
    /// Export the network graph and both contractions of a scenario.
    Graph(GraphArgs),
    /// Run one assignment strategy on a scenario.
    Optimize(OptimizeArgs),
    /// Correlate simplified and detailed utility over random colorings.
    Correlate(CorrelateArgs),
    /// Run the strategy comparison over a set of scenarios.
    Benchmark(BenchmarkArgs),
}

#[derive(Debug, Clone, Args, Serialize)]
struct SpectrumArgs {
    /// Number of channels.
    #[arg(long, default_value_t = DEFAULT_SPECTRUM_SIZE)]
    spectrum: u16,
}

#[derive(Debug, Subcommand)]
enum Generate {
    /// One scenario on the school floorplan.
    Classroom(ClassroomArgs),
    /// One scenario with uniformly placed APs and WDs.
    Random(RandomArgs),
    /// The full study corpus: 9 random combos and 4 occupation ratios.
    Corpus(CorpusArgs),
}

#[derive(Debug, Clone, Args, Serialize)]
struct ClassroomArgs {
    /// Fraction of classrooms in use.
    #[arg(long)]
    rho: f64,
    #[arg(long, default_value_t = 25)]
    students_per_classroom: u32,
    #[arg(long, default_value_t = 100)]
    roaming_students: u32,
    /// Floorplan JSON; the bundled plan is used when omitted.
    #[arg(long)]
    floorplan: Option<PathBuf>,
    #[command(flatten)]
    spectrum: SpectrumArgs,
}

#[derive(Debug, Clone, Args, Serialize)]
struct RandomArgs {
    #[arg(long)]
    aps: u32,
    #[arg(long)]
    wds: u32,
    #[arg(long, default_value_t = 100.0)]
    width: f64,
    #[arg(long, default_value_t = 100.0)]
    height: f64,
    #[command(flatten)]
    spectrum: SpectrumArgs,
}

#[derive(Debug, Clone, Args, Serialize)]
struct CorpusArgs {
    #[arg(long, default_value_t = 30)]
    graphs_per_combo: u32,
    #[arg(long, default_value_t = 3)]
    per_rho: u32,
    #[command(flatten)]
    spectrum: SpectrumArgs,
}

#[derive(Debug, Clone, Args, Serialize)]
struct GraphArgs {
    scenario: PathBuf,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
enum StrategyArg {
    SaG,
    SaU,
    SaW,
    Lccs,
    Brute,
}

#[derive(Debug, Clone, Args, Serialize)]
struct OptimizeArgs {
    #[arg(long, value_enum)]
    strategy: StrategyArg,
    /// Annealing iterations, or LCCS proposals.
    #[arg(long, default_value_t = 3000)]
    iterations: u64,
    /// Run LCCS until a round changes nothing instead of a proposal budget.
    #[arg(long)]
    converge: bool,
    /// Largest search space brute force will enumerate.
    #[arg(long, default_value_t = DEFAULT_BRUTE_FORCE_CAP)]
    cap: u64,
    scenario: PathBuf,
}

#[derive(Debug, Clone, Args, Serialize)]
struct CorrelateArgs {
    /// Random colorings scored per graph.
    #[arg(long, default_value_t = 1000)]
    colorings: usize,
    /// Also write the normalized per-coloring pairs of every graph.
    #[arg(long)]
    scatter: bool,
    /// Scenario files or directories.
    #[arg(required = true)]
    inputs: Vec<PathBuf>,
}

#[derive(Debug, Clone, Args, Serialize)]
struct BenchmarkArgs {
    /// Seeded runs per (scenario, strategy) cell.
    #[arg(long, default_value_t = 10)]
    runs: u32,
    /// Comma-separated subset of sa-g, lccs, sa-u, sa-w.
    #[arg(long, value_delimiter = ',', default_value = "sa-g,lccs,sa-u,sa-w")]
    strategies: Vec<Strategy>,
    /// Annealing iterations, and LCCS proposals.
    #[arg(long, default_value_t = 3000)]
    iterations: u64,
    /// Run LCCS until a round changes nothing instead of a proposal budget.
    #[arg(long)]
    converge: bool,
    /// Scenario files or directories.
    #[arg(required = true)]
    inputs: Vec<PathBuf>,
}

/// Raised for requests that are well formed but cannot be served, such as an
/// empty corpus. Reported with the usage exit code.
#[derive(Debug)]
struct UsageError(String);

impl std::fmt::Display for UsageError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for UsageError {}

struct RunContext {
    seed: u64,
    out: PathBuf,
    exec: Execution,
    matrix: Option<PathBuf>,
    radii: Option<InterferenceRadii>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let level = match cli.verbose {
        0 => "warn",
        1 => "info",
        _ => "debug",
    };
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or(level)).init();

    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            if e.downcast_ref::<UsageError>().is_some() {
                ExitCode::from(2)
            } else {
                ExitCode::FAILURE
            }
        }
    }
}

fn run(cli: Cli) -> Result<()> {
    let exec = execution_for(cli.jobs)?;
    let ctx = RunContext {
        seed: cli.seed,
        out: cli.out,
        exec,
        matrix: cli.matrix,
        radii: cli.radii,
    };
    println!("seed: {}", ctx.seed);
    let work = move || match cli.command {
        Command::Generate { what } => match what {
            Generate::Classroom(a) => cmd_generate_classroom(&ctx, &a),
            Generate::Random(a) => cmd_generate_random(&ctx, &a),
            Generate::Corpus(a) => cmd_generate_corpus(&ctx, &a),
        },
        Command::Graph(a) => cmd_graph(&ctx, &a),
        Command::Optimize(a) => cmd_optimize(&ctx, &a),
        Command::Correlate(a) => cmd_correlate(&ctx, &a),
        Command::Benchmark(a) => cmd_benchmark(&ctx, &a),
    };
    in_pool(cli.jobs, work)
}

fn execution_for(jobs: Option<usize>) -> Result<Execution> {
    match jobs {
        Some(0) => Err(UsageError("--jobs must be at least 1".into()).into()),
        Some(1) => Ok(Execution::Sequential),
        _ => Ok(Execution::default()),
    }
}

#[cfg(feature = "parallel")]
fn in_pool<T: Send>(jobs: Option<usize>, work: impl FnOnce() -> T + Send) -> T {
    match jobs {
        Some(n) if n > 1 => match rayon::ThreadPoolBuilder::new().num_threads(n).build() {
            Ok(pool) => pool.install(work),
            Err(e) => {
                log::warn!("could not build a {n}-thread pool ({e}); using the global pool");
                work()
            }
        },
        _ => work(),
    }
}

#[cfg(not(feature = "parallel"))]
fn in_pool<T: Send>(jobs: Option<usize>, work: impl FnOnce() -> T + Send) -> T {
    if jobs.is_some_and(|n| n > 1) {
        log::warn!("built without the `parallel` feature; running sequentially");
    }
    work()
}

fn to_config<T: Serialize>(ctx: &RunContext, args: &T) -> Result<serde_json::Value> {
    Ok(serde_json::json!({
        "args": args,
        "seed": ctx.seed,
        "out": ctx.out,
        "sequential": matches!(ctx.exec, Execution::Sequential),
        "matrix": ctx.matrix,
        "radii": ctx.radii,
    }))
}

fn radii_or_default(ctx: &RunContext) -> InterferenceRadii {
    ctx.radii.unwrap_or_default()
}

fn write_single(
    ctx: &RunContext,
    command: &str,
    name: &str,
    named: NamedScenario,
    config: serde_json::Value,
) -> Result<()> {
    let mut out = OutputDir::create(&ctx.out)?;
    let file = format!("{name}.json");
    let path = out.write_json(&file, &named.scenario)?;
    let index = CorpusIndex {
        scenarios: vec![IndexEntry {
            id: named.id,
            family: named.family,
            label: named.label,
            seed: named.seed,
            file,
        }],
    };
    out.write_json(input::INDEX_FILE, &index)?;
    println!(
        "wrote {} ({} APs, {} WDs)",
        path.display(),
        named.scenario.aps.len(),
        named.scenario.wds.len()
    );
    out.finish(command, ctx.seed, config)?;
    Ok(())
}

fn cmd_generate_classroom(ctx: &RunContext, a: &ClassroomArgs) -> Result<()> {
    let floorplan = match &a.floorplan {
        Some(p) => {
            let text =
                std::fs::read_to_string(p).with_context(|| format!("reading {}", p.display()))?;
            Floorplan::from_json(&text)?
        }
        None => Floorplan::bundled(),
    };
    let spec = ClassroomScenarioSpec {
        floorplan,
        students_per_classroom: a.students_per_classroom,
        roaming_students: a.roaming_students,
        radii: radii_or_default(ctx),
        spectrum_size: a.spectrum.spectrum,
        ..ClassroomScenarioSpec::new(a.rho, ctx.seed)
    };
    let scenario = gen_classroom_scenario(&spec)?;
    let id = format!("classroom-rho{:.2}-s{}", a.rho, ctx.seed);
    let named = NamedScenario {
        id: id.clone(),
        family: chanassign::scenario_gen::Family::Classroom,
        label: format!("{}", a.rho),
        seed: ctx.seed,
        scenario,
    };
    write_single(ctx, "generate classroom", &id, named, to_config(ctx, a)?)
}

fn cmd_generate_random(ctx: &RunContext, a: &RandomArgs) -> Result<()> {
    let spec = RandomScenarioSpec {
        n_aps: a.aps,
        n_wds: a.wds,
        width_m: a.width,
        height_m: a.height,
        radii: radii_or_default(ctx),
        spectrum_size: a.spectrum.spectrum,
        ..RandomScenarioSpec::default()
    };
    let scenario = gen_random_scenario(&spec, ctx.seed)?;
    let id = format!("random-{}-{}-s{}", a.aps, a.wds, ctx.seed);
    let named = NamedScenario {
        id: id.clone(),
        family: chanassign::scenario_gen::Family::Random,
        label: format!("{}x{}", a.aps, a.wds),
        seed: ctx.seed,
        scenario,
    };
    write_single(ctx, "generate random", &id, named, to_config(ctx, a)?)
}

fn cmd_generate_corpus(ctx: &RunContext, a: &CorpusArgs) -> Result<()> {
    let defaults = CorpusSpec::default();
    let radii = radii_or_default(ctx);
    let spec = CorpusSpec {
        graphs_per_combo: a.graphs_per_combo,
        scenarios_per_rho: a.per_rho,
        random: RandomScenarioSpec {
            radii,
            spectrum_size: a.spectrum.spectrum,
            ..defaults.random
        },
        classroom: ClassroomScenarioSpec {
            radii,
            spectrum_size: a.spectrum.spectrum,
            ..defaults.classroom.clone()
        },
        ..defaults
    };
    let corpus = gen_corpus_with(&spec, ctx.seed, ctx.exec)?;
    let mut out = OutputDir::create(&ctx.out)?;
    let mut entries = Vec::with_capacity(corpus.len());
    for named in corpus {
        let file = format!("{}.json", named.id);
        out.write_json(&file, &named.scenario)?;
        entries.push(IndexEntry {
            id: named.id,
            family: named.family,
            label: named.label,
            seed: named.seed,
            file,
        });
    }
    let n = entries.len();
    out.write_json(input::INDEX_FILE, &CorpusIndex { scenarios: entries })?;
    println!("wrote {n} scenarios to {}", out.root().display());
    out.finish("generate corpus", ctx.seed, to_config(ctx, a)?)?;
    Ok(())
}

fn load_one(ctx: &RunContext, path: &Path) -> Result<Scenario> {
    let mut s = read_scenario(path)?;
    if let Some(r) = ctx.radii {
        s.interference_radii = r;
    }
    Ok(s)
}

fn cmd_graph(ctx: &RunContext, a: &GraphArgs) -> Result<()> {
    let s = load_one(ctx, &a.scenario)?;
    let g = build_graph(&s)?;
    let mut out = OutputDir::create(&ctx.out)?;
    out.write_json("graph.json", &g)?;
    for mode in ContractionMode::ALL {
        let cg = contract(&g, mode);
        println!(
            "{mode}: {} vertices, {} edges, total weight {}",
            cg.ap_vertices.len(),
            cg.edges.len(),
            cg.total_weight()
        );
        out.write_json(&format!("contracted-{mode}.json"), &cg)?;
    }
    println!(
        "graph: {} APs, {} WDs, {} interference edges",
        g.ap_vertices.len(),
        g.wd_vertices.len(),
        g.interference_edges.len()
    );
    out.finish("graph", ctx.seed, to_config(ctx, a)?)?;
    Ok(())
}

#[derive(Serialize)]
struct OptimizeOutput<'a> {
    strategy: StrategyArg,
    /// Detailed utility of the returned coloring over all vertices.
    mean_utility: f64,
    #[serde(flatten)]
    result: &'a OptimizationResult,
}

fn cmd_optimize(ctx: &RunContext, a: &OptimizeArgs) -> Result<()> {
    let s = load_one(ctx, &a.scenario)?;
    let custom = read_matrix(ctx.matrix.as_deref())?;
    let w = matrix_for(&s, custom.as_ref())?;
    let g = build_graph(&s)?;
    let detailed = DetailedModel::new(&g, &s.radio, &w)?;
    let ap_ids = &g.ap_vertices;
    let k = w.k();
    let sa = SaConfig {
        iterations: a.iterations,
        seed: ctx.seed,
        ..SaConfig::default()
    };
    let result = match a.strategy {
        StrategyArg::SaG => {
            simulated_annealing(ap_ids, k, &DetailedObjective::new(&detailed), &sa)?
        }
        StrategyArg::SaU | StrategyArg::SaW => {
            let mode = if a.strategy == StrategyArg::SaU {
                ContractionMode::Uniform
            } else {
                ContractionMode::Weighted
            };
            let model = SimplifiedModel::new(&contract(&g, mode), &w)?;
            simulated_annealing(ap_ids, k, &SimplifiedObjective::new(&model), &sa)?
        }
        StrategyArg::Lccs => lccs_with_model(
            &detailed,
            ap_ids,
            &lccs_config(a.iterations, a.converge, ctx.seed),
        )?,
        StrategyArg::Brute => brute_force(ap_ids, k, &DetailedObjective::new(&detailed), a.cap)?,
    };
    let assignment = result.best_coloring.to_assignment(ap_ids)?;
    let mean_utility = detailed.total(&assignment) / detailed.vertex_count() as f64;

    let mut out = OutputDir::create(&ctx.out)?;
    out.write_json(
        "result.json",
        &OptimizeOutput {
            strategy: a.strategy,
            mean_utility,
            result: &result,
        },
    )?;
    println!(
        "mean utility {mean_utility:.6}, elapsed {:.6} s",
        result.wall_clock_s
    );
    out.finish("optimize", ctx.seed, to_config(ctx, a)?)?;
    Ok(())
}

fn lccs_config(iterations: u64, converge: bool, seed: u64) -> LccsConfig {
    if converge {
        LccsConfig::converge(seed)
    } else {
        LccsConfig {
            mode: LccsMode::Proposals { count: iterations },
            seed,
        }
    }
}

fn load_inputs(ctx: &RunContext, inputs: &[PathBuf]) -> Result<Vec<NamedScenario>> {
    let mut scenarios = load_scenarios(inputs)?;
    if scenarios.is_empty() {
        return Err(UsageError("no scenarios found in the given inputs".into()).into());
    }
    apply_radii(&mut scenarios, ctx.radii);
    Ok(scenarios)
}

fn cmd_correlate(ctx: &RunContext, a: &CorrelateArgs) -> Result<()> {
    if a.colorings < 2 {
        return Err(UsageError("--colorings must be at least 2".into()).into());
    }
    let corpus = load_inputs(ctx, &a.inputs)?;
    let cfg = CorrelationConfig {
        colorings_per_graph: a.colorings,
        seed: ctx.seed,
        keep_scatter: a.scatter,
        matrix: read_matrix(ctx.matrix.as_deref())?,
        exec: ctx.exec,
    };
    let study = correlation_study(&corpus, &cfg)?;

    let mut out = OutputDir::create(&ctx.out)?;
    let mut csv = Vec::new();
    write_correlation_csv(&study.records, &mut csv)?;
    out.write_bytes("correlation.csv", &csv)?;
    if a.scatter {
        for r in &study.records {
            let mut buf = Vec::new();
            write_scatter_csv(r, &mut buf)?;
            out.write_bytes(&format!("scatter/{}-{}.csv", r.graph_id, r.mode), &buf)?;
        }
    }
    out.write_json(
        "correlation-summary.json",
        &serde_json::json!({ "summaries": study.summaries }),
    )?;
    for s in &study.summaries {
        match &s.box_plot {
            Some(b) => println!(
                "{}: {} graphs, median r {:.4} (q1 {:.4}, q3 {:.4}), {} undefined",
                s.mode, s.graphs, b.median, b.q1, b.q3, s.undefined
            ),
            None => println!("{}: {} graphs, no defined coefficient", s.mode, s.graphs),
        }
    }
    out.finish("correlate", ctx.seed, to_config(ctx, a)?)?;
    Ok(())
}

/// Per (label, strategy) aggregate over all scenarios sharing the label.
#[derive(Serialize)]
struct GroupSummary {
    rho_or_combo: String,
    strategy: Strategy,
    runs: usize,
    failed: usize,
    mean_utility: Option<ConfidenceInterval>,
    wall_clock_s: Option<ConfidenceInterval>,
}

fn group_rows(rows: &[BenchmarkRow]) -> Vec<GroupSummary> {
    let mut groups: BTreeMap<(String, Strategy), Vec<&BenchmarkRow>> = BTreeMap::new();
    for r in rows {
        groups
            .entry((r.rho_or_combo.clone(), r.strategy))
            .or_default()
            .push(r);
    }
    groups
        .into_iter()
        .map(|((label, strategy), rs)| {
            let ok: Vec<&&BenchmarkRow> = rs.iter().filter(|r| r.error.is_none()).collect();
            let utilities: Vec<f64> = ok.iter().filter_map(|r| r.mean_utility).collect();
            let times: Vec<f64> = ok.iter().map(|r| r.wall_clock_s).collect();
            GroupSummary {
                rho_or_combo: label,
                strategy,
                runs: rs.len(),
                failed: rs.len() - ok.len(),
                mean_utility: ConfidenceInterval::student_t(&utilities, 0.95),
                wall_clock_s: ConfidenceInterval::student_t(&times, 0.95),
            }
        })
        .collect()
}

fn cmd_benchmark(ctx: &RunContext, a: &BenchmarkArgs) -> Result<()> {
    if a.runs == 0 || a.strategies.is_empty() {
        return Err(UsageError("--runs and --strategies must be non-empty".into()).into());
    }
    let scenarios = load_inputs(ctx, &a.inputs)?;
    let cfg = BenchmarkConfig {
        runs_per_cell: a.runs,
        seed: ctx.seed,
        sa: SaConfig {
            iterations: a.iterations,
            ..SaConfig::default()
        },
        lccs: lccs_config(a.iterations, a.converge, ctx.seed),
        matrix: read_matrix(ctx.matrix.as_deref())?,
        exec: ctx.exec,
    };
    let report = benchmark(&scenarios, &a.strategies, &cfg)?;
    let groups = group_rows(&report.rows);

    let mut out = OutputDir::create(&ctx.out)?;
    let mut csv = Vec::new();
    write_results_csv(&report.rows, &mut csv)?;
    out.write_bytes("results.csv", &csv)?;
    out.write_json(
        "benchmark-summary.json",
        &serde_json::json!({ "cells": report.cells, "groups": groups }),
    )?;
    for g in &groups {
        let u = g
            .mean_utility
            .as_ref()
            .map_or("n/a".to_string(), |c| format!("{:.4}", c.mean));
        let t = g
            .wall_clock_s
            .as_ref()
            .map_or("n/a".to_string(), |c| format!("{:.4}", c.mean));
        println!(
            "{:>8} {:>5}: mean utility {u}, elapsed {t} s",
            g.rho_or_combo, g.strategy
        );
    }
    out.finish("benchmark", ctx.seed, to_config(ctx, a)?)?;

    let failed: usize = groups.iter().map(|g| g.failed).sum();
    if failed > 0 {
        bail!("{failed} benchmark runs failed; see the error log above");
    }
    Ok(())
}
