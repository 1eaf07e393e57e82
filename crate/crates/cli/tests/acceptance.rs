//! Acceptance suite. Each criterion prints one PASS or FAIL line with the
//! measured values; the process exits nonzero when any criterion fails.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::Command;
use std::time::{Duration, Instant};

use chanassign::contraction::{contract, ContractionMode};
use chanassign::domain::{
    Channel, Coloring, InterferenceMatrix, InterferenceRadii, RadioParams, Scenario, Site,
};
use chanassign::experiments::stats::{ConfidenceInterval, FiveNumber};
use chanassign::experiments::{
    benchmark, correlation_study, BenchmarkConfig, BenchmarkRow, CorrelationConfig, Strategy,
};
use chanassign::graph::build_graph;
use chanassign::optimizers::{
    brute_force, random_assignment, simulated_annealing, DetailedObjective, SaConfig,
    DEFAULT_BRUTE_FORCE_CAP,
};
use chanassign::par::Execution;
use chanassign::radio::{path_loss, sinr, utility_from_sinr, DetailedModel};
use chanassign::rng::{derive_seed, rng_from_seed};
use chanassign::scenario_gen::{
    gen_corpus, gen_corpus_with, gen_random_scenario, ClassroomScenarioSpec, CorpusSpec, Family,
    RandomScenarioSpec, OCCUPATION_RATIOS, RANDOM_COMBOS,
};

const FORMULA_TOL: f64 = 1e-9;
const SHIFT_TOL: f64 = 1e-9;
const SCORE_MATCH_TOL: f64 = 1e-9;
const ORACLE_MATCH_FRACTION: f64 = 0.90;
const CI_LEVEL: f64 = 0.95;
const TIMING_RATIO: f64 = 0.05;

const CONTRACTION_BUDGET: Duration = Duration::from_secs(10);
const ORACLE_BUDGET: Duration = Duration::from_secs(120);
const ORDERING_BUDGET: Duration = Duration::from_secs(30 * 60);
const CORRELATION_BUDGET: Duration = Duration::from_secs(10 * 60);
const DETERMINISM_BUDGET: Duration = Duration::from_secs(60);
const COUNTS_BUDGET: Duration = Duration::from_secs(60);
const RADIO_BUDGET: Duration = Duration::from_secs(10);

const MASTER_SEED: u64 = 0;

struct Verdict {
    pass: bool,
    detail: String,
}

impl Verdict {
    fn new(pass: bool, detail: impl Into<String>) -> Self {
        Verdict {
            pass,
            detail: detail.into(),
        }
    }
}

fn within_budget(v: Verdict, elapsed: Duration, budget: Duration) -> Verdict {
    let detail = format!(
        "{}; {:.2} s (budget {} s)",
        v.detail,
        elapsed.as_secs_f64(),
        budget.as_secs()
    );
    Verdict::new(v.pass && elapsed <= budget, detail)
}

fn timed_criterion(budget: Duration, f: impl FnOnce() -> Verdict) -> Verdict {
    let start = Instant::now();
    let v = f();
    within_budget(v, start.elapsed(), budget)
}

fn criterion_1_formula_exactness() -> Verdict {
    let cases = [
        ((1.0, 1.0, 1.0), 7.6),
        ((10.0, 1.0, 1.0), 47.6),
        ((100.0, 2.0, 0.5), 87.6),
    ];
    let mut worst: f64 = 0.0;
    for ((d, ht, hr), expected) in cases {
        match path_loss(d, ht, hr) {
            Ok(got) => worst = worst.max((got - expected).abs()),
            Err(e) => return Verdict::new(false, format!("path_loss({d},{ht},{hr}) failed: {e}")),
        }
    }
    Verdict::new(
        worst <= FORMULA_TOL,
        format!("max |error| {worst:.3e} (tol {FORMULA_TOL:e})"),
    )
}

fn random_mini_corpus(n: usize, master: u64) -> Vec<Scenario> {
    (0..n)
        .map(|i| {
            let (aps, wds) = RANDOM_COMBOS[i % RANDOM_COMBOS.len()];
            gen_random_scenario(
                &RandomScenarioSpec::sized(aps, wds),
                derive_seed(master, &[i as u64]),
            )
            .expect("random scenario")
        })
        .collect()
}

fn criterion_2_contraction_conservation() -> Verdict {
    let corpus = random_mini_corpus(100, MASTER_SEED);
    let mut failures = Vec::new();
    let mut edges_total = 0usize;
    for (i, s) in corpus.iter().enumerate() {
        let g = build_graph(s).expect("graph");
        edges_total += g.interference_edges.len();
        let weighted = contract(&g, ContractionMode::Weighted);
        let uniform = contract(&g, ContractionMode::Uniform);
        if weighted.total_weight() != g.interference_edges.len() as u64 {
            failures.push(format!(
                "graph {i}: weight {} != |E_I| {}",
                weighted.total_weight(),
                g.interference_edges.len()
            ));
        }
        if uniform.edges.iter().any(|e| e.weight != 1) {
            failures.push(format!("graph {i}: uniform weight other than 1"));
        }
        if weighted.ap_vertices.len() != g.ap_vertices.len()
            || uniform.ap_vertices.len() != g.ap_vertices.len()
        {
            failures.push(format!(
                "graph {i}: contracted vertex count differs from |V_AP|"
            ));
        }
    }
    let detail = if failures.is_empty() {
        format!("100 graphs, {edges_total} interference edges conserved")
    } else {
        failures.join("; ")
    };
    Verdict::new(failures.is_empty(), detail)
}

fn criterion_3_oracle_equivalence() -> Verdict {
    const INSTANCES: u64 = 50;
    const SEEDS: u64 = 20;
    const ITERATIONS: u64 = 10_000;
    const K: u16 = 3;
    let mut matched = 0;
    let mut better_than_optimal = Vec::new();
    for inst in 0..INSTANCES {
        let n_aps = 1 + (inst % 5) as u32;
        let spec = RandomScenarioSpec {
            n_aps,
            n_wds: 3 * n_aps,
            width_m: 40.0,
            height_m: 40.0,
            spectrum_size: K,
            ..RandomScenarioSpec::default()
        };
        let s = gen_random_scenario(&spec, derive_seed(MASTER_SEED, &[3, inst])).expect("scenario");
        let w = InterferenceMatrix::default_for(K as usize).expect("matrix");
        let g = build_graph(&s).expect("graph");
        let model = DetailedModel::new(&g, &s.radio, &w).expect("model");
        let obj = DetailedObjective::new(&model);
        let optimum = brute_force(&g.ap_vertices, K as usize, &obj, DEFAULT_BRUTE_FORCE_CAP)
            .expect("brute force")
            .best_score;
        let best_sa = (0..SEEDS)
            .map(|seed| {
                let cfg = SaConfig {
                    iterations: ITERATIONS,
                    seed: derive_seed(MASTER_SEED, &[4, inst, seed]),
                    ..SaConfig::default()
                };
                simulated_annealing(&g.ap_vertices, K as usize, &obj, &cfg)
                    .expect("annealing")
                    .best_score
            })
            .fold(f64::NEG_INFINITY, f64::max);
        let tol = SCORE_MATCH_TOL * optimum.abs().max(1.0);
        if best_sa > optimum + tol {
            better_than_optimal.push(inst);
        }
        if (best_sa - optimum).abs() <= tol {
            matched += 1;
        }
    }
    let fraction = matched as f64 / INSTANCES as f64;
    Verdict::new(
        fraction >= ORACLE_MATCH_FRACTION && better_than_optimal.is_empty(),
        format!(
            "{matched}/{INSTANCES} optimal ({:.0}%, need {:.0}%), better-than-optimal on {:?}",
            100.0 * fraction,
            100.0 * ORACLE_MATCH_FRACTION,
            better_than_optimal
        ),
    )
}

fn rows_for<'a>(
    rows: &'a [BenchmarkRow],
    label: &str,
    strategy: Strategy,
) -> Vec<&'a BenchmarkRow> {
    rows.iter()
        .filter(|r| r.rho_or_combo == label && r.strategy == strategy)
        .collect()
}

fn mean_of(rows: &[&BenchmarkRow], f: impl Fn(&BenchmarkRow) -> f64) -> f64 {
    rows.iter().map(|r| f(r)).sum::<f64>() / rows.len() as f64
}

/// Criteria 4 and 5 share one benchmark over the bundled floorplan.
fn criteria_4_and_5_floorplan_benchmark() -> (Verdict, Verdict) {
    let start = Instant::now();
    let rhos = [0.25, 1.0];
    let spec = CorpusSpec {
        combos: Vec::new(),
        rhos: rhos.to_vec(),
        scenarios_per_rho: 3,
        classroom: ClassroomScenarioSpec::new(1.0, 0),
        ..CorpusSpec::default()
    };
    let scenarios =
        gen_corpus_with(&spec, MASTER_SEED, Execution::default()).expect("floorplan scenarios");
    let cfg = BenchmarkConfig {
        runs_per_cell: 10,
        seed: MASTER_SEED,
        // cells run one at a time so timings are not inflated by contention
        exec: Execution::Sequential,
        ..BenchmarkConfig::default()
    };
    let report = benchmark(&scenarios, &Strategy::ALL, &cfg).expect("benchmark");
    let failed = report.rows.iter().filter(|r| r.error.is_some()).count();

    let mut ordering_ok = failed == 0;
    let mut significant_somewhere = false;
    let mut lines = Vec::new();
    for rho in rhos {
        let label = format!("{rho}");
        let means: BTreeMap<Strategy, f64> = Strategy::ALL
            .iter()
            .map(|&st| {
                (
                    st,
                    mean_of(&rows_for(&report.rows, &label, st), |r| {
                        r.mean_utility.unwrap_or(f64::NAN)
                    }),
                )
            })
            .collect();
        let (g, w, l, u) = (
            means[&Strategy::SaG],
            means[&Strategy::SaW],
            means[&Strategy::Lccs],
            means[&Strategy::SaU],
        );
        let ordered = g >= w && w > l && l > u;
        ordering_ok &= ordered;

        // strategies share run seeds, so differences are paired per run
        let sa_w = rows_for(&report.rows, &label, Strategy::SaW);
        let lccs = rows_for(&report.rows, &label, Strategy::Lccs);
        let diffs: Vec<f64> = sa_w
            .iter()
            .zip(&lccs)
            .map(|(a, b)| {
                assert_eq!((&a.scenario_id, a.run), (&b.scenario_id, b.run));
                a.mean_utility.unwrap_or(f64::NAN) - b.mean_utility.unwrap_or(f64::NAN)
            })
            .collect();
        let ci = ConfidenceInterval::student_t(&diffs, CI_LEVEL).expect("paired interval");
        let lower = ci.lower().unwrap_or(f64::NEG_INFINITY);
        significant_somewhere |= lower > 0.0;
        lines.push(format!(
            "rho {rho}: SA_g {g:.4} SA_w {w:.4} LCCS {l:.4} SA_u {u:.4} ordered={ordered}, SA_w-LCCS {:.4} CI [{lower:.4}, {:.4}]",
            ci.mean,
            ci.upper().unwrap_or(f64::INFINITY)
        ));
    }
    let ordering = within_budget(
        Verdict::new(
            ordering_ok && significant_somewhere,
            format!(
                "{}; failed runs {failed}; significant at some rho={significant_somewhere}",
                lines.join("; ")
            ),
        ),
        start.elapsed(),
        ORDERING_BUDGET,
    );

    let label = "1";
    let elapsed = |st| mean_of(&rows_for(&report.rows, label, st), |r| r.wall_clock_s);
    let (t_g, t_u, t_w) = (
        elapsed(Strategy::SaG),
        elapsed(Strategy::SaU),
        elapsed(Strategy::SaW),
    );
    let timing = Verdict::new(
        t_u < TIMING_RATIO * t_g && t_w < TIMING_RATIO * t_g,
        format!(
            "rho 1.0 mean elapsed SA_g {t_g:.5} s, SA_u {t_u:.5} s ({:.4}x), SA_w {t_w:.5} s ({:.4}x), limit {TIMING_RATIO}x",
            t_u / t_g,
            t_w / t_g
        ),
    );
    (ordering, timing)
}

fn criterion_6_correlation() -> Verdict {
    let spec = CorpusSpec {
        graphs_per_combo: 3,
        rhos: vec![0.25, 0.5, 1.0],
        scenarios_per_rho: 1,
        ..CorpusSpec::default()
    };
    let corpus = gen_corpus_with(&spec, MASTER_SEED, Execution::default()).expect("mini corpus");
    assert_eq!(corpus.len(), 30);
    let cfg = CorrelationConfig {
        colorings_per_graph: 200,
        seed: MASTER_SEED,
        ..CorrelationConfig::default()
    };
    let study = correlation_study(&corpus, &cfg).expect("correlation study");
    let median = |mode| {
        study
            .summary(mode)
            .box_plot
            .as_ref()
            .map(|b: &FiveNumber| b.median)
    };
    let undefined = |mode| study.summary(mode).undefined;
    match (median(ContractionMode::Weighted), median(ContractionMode::Uniform)) {
        (Some(w), Some(u)) => Verdict::new(
            w > u && u > 0.0,
            format!(
                "30 graphs x 200 colorings: median r weighted {w:.4} > uniform {u:.4} > 0 (undefined: weighted {}, uniform {})",
                undefined(ContractionMode::Weighted),
                undefined(ContractionMode::Uniform)
            ),
        ),
        _ => Verdict::new(false, "no defined correlation coefficient"),
    }
}

fn run_cli(args: &[&str]) -> Result<(), String> {
    let out = Command::new(env!("CARGO_BIN_EXE_chanassign"))
        .args(args)
        .env_remove("CHANASSIGN_OUT")
        .output()
        .map_err(|e| format!("spawning cli: {e}"))?;
    if out.status.success() {
        Ok(())
    } else {
        Err(format!(
            "`chanassign {}` exited with {}: {}",
            args.join(" "),
            out.status,
            String::from_utf8_lossy(&out.stderr).trim()
        ))
    }
}

fn data_files(root: &Path) -> Vec<PathBuf> {
    let mut files = Vec::new();
    let mut stack = vec![root.to_path_buf()];
    while let Some(dir) = stack.pop() {
        for entry in fs::read_dir(&dir).expect("listing output") {
            let path = entry.expect("entry").path();
            if path.is_dir() {
                stack.push(path);
            } else if path.file_name().is_some_and(|n| n != "manifest.json") {
                files.push(path.strip_prefix(root).expect("prefix").to_path_buf());
            }
        }
    }
    files.sort();
    files
}

const TIMING_FIELDS: [&str; 2] = ["wall_clock_s", "cpu_time_s"];

/// Replaces measured durations by a placeholder; everything else is compared
/// byte for byte.
fn mask_timings(path: &Path, bytes: &[u8]) -> Vec<u8> {
    let text = String::from_utf8_lossy(bytes);
    match path.extension().and_then(|e| e.to_str()) {
        Some("json") => {
            fn walk(v: &mut serde_json::Value) {
                match v {
                    serde_json::Value::Object(map) => {
                        for (k, child) in map.iter_mut() {
                            if TIMING_FIELDS.contains(&k.as_str()) {
                                *child = serde_json::Value::Null;
                            } else {
                                walk(child);
                            }
                        }
                    }
                    serde_json::Value::Array(items) => items.iter_mut().for_each(walk),
                    _ => {}
                }
            }
            let mut v: serde_json::Value = serde_json::from_str(&text).expect("json output");
            walk(&mut v);
            serde_json::to_vec(&v).expect("json")
        }
        Some("csv") => {
            let mut lines = text.lines();
            let header: Vec<&str> = lines.next().unwrap_or_default().split(',').collect();
            let masked: Vec<usize> = (0..header.len())
                .filter(|&i| TIMING_FIELDS.contains(&header[i]))
                .collect();
            let mut out = header.join(",");
            for line in lines {
                let cells: Vec<&str> = line
                    .split(',')
                    .enumerate()
                    .map(|(i, c)| if masked.contains(&i) { "*" } else { c })
                    .collect();
                out.push('\n');
                out.push_str(&cells.join(","));
            }
            out.into_bytes()
        }
        _ => bytes.to_vec(),
    }
}

fn compare_runs(a: &Path, b: &Path) -> Result<usize, String> {
    let fa = data_files(a);
    let fb = data_files(b);
    if fa != fb {
        return Err(format!(
            "{} and {} list different files",
            a.display(),
            b.display()
        ));
    }
    if fa.is_empty() {
        return Err(format!("{} holds no data files", a.display()));
    }
    if !a.join("manifest.json").is_file() {
        return Err(format!("{} has no manifest", a.display()));
    }
    for rel in &fa {
        let x = fs::read(a.join(rel)).expect("read");
        let y = fs::read(b.join(rel)).expect("read");
        if mask_timings(rel, &x) != mask_timings(rel, &y) {
            return Err(format!("{} differs between runs", rel.display()));
        }
    }
    Ok(fa.len())
}

fn criterion_7_cli_determinism() -> Verdict {
    let tmp = tempfile::tempdir().expect("tempdir");
    let root = tmp.path();
    let p = |rel: &str| root.join(rel).to_string_lossy().into_owned();
    let classroom = p("a/classroom/classroom-rho0.25-s7.json");
    let random = p("a/random/random-15-75-s1.json");

    // (name, args after `--out <dir>`, extra args for the second run)
    let commands: Vec<(&str, Vec<String>, Vec<&str>)> = vec![
        (
            "classroom",
            vec![
                "generate".into(),
                "classroom".into(),
                "--rho".into(),
                "0.25".into(),
                "--seed".into(),
                "7".into(),
            ],
            vec![],
        ),
        (
            "random",
            vec![
                "generate".into(),
                "random".into(),
                "--aps".into(),
                "15".into(),
                "--wds".into(),
                "75".into(),
                "--seed".into(),
                "1".into(),
            ],
            vec![],
        ),
        (
            "corpus",
            vec![
                "generate".into(),
                "corpus".into(),
                "--seed".into(),
                "42".into(),
            ],
            vec!["--jobs", "1"],
        ),
        ("graph", vec!["graph".into(), random.clone()], vec![]),
        (
            "sa-g",
            vec![
                "optimize".into(),
                "--strategy".into(),
                "sa-g".into(),
                "--seed".into(),
                "3".into(),
                classroom.clone(),
            ],
            vec![],
        ),
        (
            "sa-u",
            vec![
                "optimize".into(),
                "--strategy".into(),
                "sa-u".into(),
                "--seed".into(),
                "3".into(),
                classroom.clone(),
            ],
            vec![],
        ),
        (
            "sa-w",
            vec![
                "optimize".into(),
                "--strategy".into(),
                "sa-w".into(),
                "--iterations".into(),
                "3000".into(),
                "--seed".into(),
                "3".into(),
                classroom.clone(),
            ],
            vec![],
        ),
        (
            "lccs",
            vec![
                "optimize".into(),
                "--strategy".into(),
                "lccs".into(),
                "--seed".into(),
                "3".into(),
                classroom.clone(),
            ],
            vec![],
        ),
        (
            "brute",
            vec![
                "optimize".into(),
                "--strategy".into(),
                "brute".into(),
                "--seed".into(),
                "3".into(),
                p("a/small/random-3-9-s5.json"),
            ],
            vec![],
        ),
        (
            "correlate",
            vec![
                "correlate".into(),
                "--colorings".into(),
                "100".into(),
                "--scatter".into(),
                "--seed".into(),
                "5".into(),
                p("a/random"),
                p("a/classroom"),
            ],
            vec!["--jobs", "1"],
        ),
        (
            "benchmark",
            vec![
                "benchmark".into(),
                "--runs".into(),
                "2".into(),
                "--seed".into(),
                "5".into(),
                p("a/classroom"),
                random.clone(),
            ],
            vec!["--jobs", "1"],
        ),
    ];

    if let Err(e) = run_cli(&[
        "--out",
        &p("a/small"),
        "generate",
        "random",
        "--aps",
        "3",
        "--wds",
        "9",
        "--seed",
        "5",
    ]) {
        return Verdict::new(false, e);
    }
    let mut summary = Vec::new();
    for (name, args, second_extra) in &commands {
        for (run, extra) in [("a", &Vec::new()), ("b", second_extra)] {
            let out = p(&format!("{run}/{name}"));
            let mut full: Vec<&str> = vec!["--out", &out];
            full.extend(args.iter().map(String::as_str));
            full.extend(extra.iter().copied());
            if let Err(e) = run_cli(&full) {
                return Verdict::new(false, e);
            }
        }
        // scenario-producing commands feed the later ones from run `a`
        if *name == "classroom" || *name == "random" {
            let from = root.join(format!("a/{name}"));
            let files = data_files(&from);
            if files.len() != 2 {
                return Verdict::new(false, format!("generate {name} wrote {files:?}"));
            }
        }
        match compare_runs(
            &root.join(format!("a/{name}")),
            &root.join(format!("b/{name}")),
        ) {
            Ok(n) => summary.push(format!("{name}:{n}")),
            Err(e) => return Verdict::new(false, e),
        }
    }
    let corpus_files = data_files(&root.join("a/corpus")).len();
    Verdict::new(
        corpus_files == 282 + 1,
        format!(
            "identical data files (timings masked) for {}; corpus wrote {} scenarios + index",
            summary.join(" "),
            corpus_files - 1
        ),
    )
}

fn criterion_8_scenario_counts() -> Verdict {
    let corpus = gen_corpus(MASTER_SEED).expect("corpus");
    let random = corpus.iter().filter(|s| s.family == Family::Random).count();
    let classroom: Vec<_> = corpus
        .iter()
        .filter(|s| s.family == Family::Classroom)
        .collect();
    let mut wd_counts = BTreeMap::new();
    let mut ok = random == 270 && classroom.len() == 12;
    for s in &classroom {
        let rho: f64 = s.label.parse().expect("rho label");
        let expected = (rho * 48.0).round() as usize * 25 + 100;
        ok &= s.scenario.wds.len() == expected;
        wd_counts.insert(s.label.clone(), s.scenario.wds.len());
    }
    for rho in OCCUPATION_RATIOS {
        ok &= classroom
            .iter()
            .filter(|s| s.label == format!("{rho}"))
            .count()
            == 3;
    }
    Verdict::new(
        ok,
        format!(
            "{random} random + {} classroom; WDs per rho {wd_counts:?}",
            classroom.len()
        ),
    )
}

/// Victim AP 0 with one WD, and two interfering APs at equal distance.
fn two_interferer_shift() -> Result<f64, String> {
    let mut s = Scenario::new(
        100.0,
        100.0,
        vec![
            Site::new(0, 50.0, 50.0),
            Site::new(1, 50.0, 70.0),
            Site::new(2, 50.0, 30.0),
        ],
        vec![Site::new(0, 52.0, 50.0)],
    );
    s.interference_radii = InterferenceRadii {
        ap_ap: 25.0,
        ap_wd: 10.0,
        wd_wd: 10.0,
    };
    let g = build_graph(&s).map_err(|e| e.to_string())?;
    let w = InterferenceMatrix::default_for(s.spectrum_size as usize).map_err(|e| e.to_string())?;
    let victim = chanassign::domain::Node::ap(0);
    let one = Coloring::from_assignment(&[0, 1, 2], &[1, 1, 11]);
    let two = Coloring::from_assignment(&[0, 1, 2], &[1, 1, 1]);
    let s1 = sinr(victim, &g, &one, &s.radio, &w).map_err(|e| e.to_string())?;
    let s2 = sinr(victim, &g, &two, &s.radio, &w).map_err(|e| e.to_string())?;
    Ok(s2 - s1)
}

fn unit_interval(seed: u64, i: u64) -> f64 {
    (derive_seed(seed, &[i]) >> 11) as f64 / (1u64 << 53) as f64
}

fn criterion_9_radio_invariants() -> Verdict {
    let shift = match two_interferer_shift() {
        Ok(v) => v,
        Err(e) => return Verdict::new(false, e),
    };
    let expected = -10.0 * 2f64.log10();
    let shift_err = (shift - expected).abs();

    let p = RadioParams::default();
    let mut violations = 0usize;
    let mut evaluations = 0usize;
    // direct SINR draws, including values far outside the thresholds
    for i in 0..5_000u64 {
        let sinr_db = -100.0 + 200.0 * unit_interval(9, i);
        let u = utility_from_sinr(sinr_db, &p);
        let expected =
            ((sinr_db - p.sinr_min_db) / (p.sinr_max_db - p.sinr_min_db)).clamp(0.0, 1.0);
        violations += usize::from(!(0.0..=1.0).contains(&u) || u != expected);
        evaluations += 1;
    }
    // per-vertex utilities of random colorings on random scenarios
    for i in 0..50u64 {
        let s = gen_random_scenario(&RandomScenarioSpec::sized(10, 40), derive_seed(9, &[1, i]))
            .expect("scenario");
        let g = build_graph(&s).expect("graph");
        let w = InterferenceMatrix::default_for(s.spectrum_size as usize).expect("matrix");
        let model = DetailedModel::new(&g, &s.radio, &w).expect("model");
        let mut rng = rng_from_seed(derive_seed(9, &[2, i]));
        for _ in 0..2 {
            let a: Vec<Channel> = random_assignment(g.ap_vertices.len(), w.k(), &mut rng);
            for u in model.per_vertex(&a) {
                violations += usize::from(!(0.0..=1.0).contains(&u));
                evaluations += 1;
            }
        }
    }
    Verdict::new(
        shift_err <= SHIFT_TOL && violations == 0 && evaluations >= 10_000,
        format!(
            "two-interferer shift {shift:.12} dB vs {expected:.12} (|error| {shift_err:.1e}); {evaluations} utility evaluations, {violations} out of range"
        ),
    )
}

fn main() {
    let mut results: Vec<(usize, &str, Verdict)> = Vec::new();
    let mut report = |n: usize, name: &'static str, v: Verdict| {
        println!(
            "[{}] {n}. {name}: {}",
            if v.pass { "PASS" } else { "FAIL" },
            v.detail
        );
        results.push((n, name, v));
    };

    report(
        1,
        "formula exactness",
        timed_criterion(Duration::from_secs(1), criterion_1_formula_exactness),
    );
    report(
        2,
        "contraction conservation",
        timed_criterion(CONTRACTION_BUDGET, criterion_2_contraction_conservation),
    );
    report(
        3,
        "oracle equivalence",
        timed_criterion(ORACLE_BUDGET, criterion_3_oracle_equivalence),
    );
    let (ordering, timing) = criteria_4_and_5_floorplan_benchmark();
    report(4, "ordering reproduction", ordering);
    report(5, "timing separation", timing);
    report(
        6,
        "correlation reproduction",
        timed_criterion(CORRELATION_BUDGET, criterion_6_correlation),
    );
    report(
        7,
        "determinism",
        timed_criterion(DETERMINISM_BUDGET, criterion_7_cli_determinism),
    );
    report(
        8,
        "scenario counts",
        timed_criterion(COUNTS_BUDGET, criterion_8_scenario_counts),
    );
    report(
        9,
        "radio invariants",
        timed_criterion(RADIO_BUDGET, criterion_9_radio_invariants),
    );

    let passed = results.iter().filter(|(_, _, v)| v.pass).count();
    println!("acceptance: {passed}/{} criteria passed", results.len());
    if passed != results.len() {
        std::process::exit(1);
    }
}
