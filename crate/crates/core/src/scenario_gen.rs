//! Scenario families: classroom occupancy on a floorplan, and uniform random
//! placements.

use rand::seq::index::sample;
use rand::Rng as _;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};

use crate::domain::{
    InterferenceRadii, RadioParams, Scenario, Site, DEFAULT_SPECTRUM_SIZE, FORMAT_VERSION,
};
use crate::error::{Error, Result};
use crate::par::Execution;
use crate::rng::{derive_seed, rng_from_seed, Rng};

const BUNDLED_FLOORPLAN: &str = include_str!("../data/floorplan_default.json");

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Rect {
    pub x_min: f64,
    pub y_min: f64,
    pub x_max: f64,
    pub y_max: f64,
}

impl Rect {
    /// Strict interior; the boundary belongs to the surrounding floor.
    pub fn contains_strictly(&self, x: f64, y: f64) -> bool {
        x > self.x_min && x < self.x_max && y > self.y_min && y < self.y_max
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Classroom {
    pub id: u32,
    pub x: f64,
    pub y: f64,
}

/// A rectangular building with an excluded courtyard, its APs and its
/// classrooms.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Floorplan {
    pub format: u32,
    #[serde(default)]
    pub name: String,
    pub width_m: f64,
    pub height_m: f64,
    pub courtyard: Option<Rect>,
    pub ap_positions: Vec<Point>,
    pub classrooms: Vec<Classroom>,
}

impl Floorplan {
    /// The bundled 130 m square plan: 26 APs along the corridor ring and 48
    /// classrooms in an outer and an inner row around a 60 m courtyard.
    ///
    /// It is synthetic. It reproduces the published building's size, AP count
    /// and classroom count, not its exact coordinates.
    pub fn bundled() -> Self {
        serde_json::from_str(BUNDLED_FLOORPLAN).expect("bundled floorplan parses")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let plan: Floorplan = serde_json::from_str(text)?;
        plan.validate()?;
        Ok(plan)
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn contains(&self, x: f64, y: f64) -> bool {
        let in_building = x >= 0.0 && y >= 0.0 && x <= self.width_m && y <= self.height_m;
        in_building && !self.courtyard.is_some_and(|c| c.contains_strictly(x, y))
    }

    pub fn validate(&self) -> Result<()> {
        if self.format != FORMAT_VERSION {
            return Err(Error::Validation(format!(
                "unsupported floorplan format {}",
                self.format
            )));
        }
        if !(self.width_m > 0.0 && self.height_m > 0.0) {
            return Err(Error::Validation(
                "floorplan dimensions must be positive".into(),
            ));
        }
        if self.ap_positions.is_empty() {
            return Err(Error::Validation("floorplan has no access points".into()));
        }
        let points = self
            .ap_positions
            .iter()
            .map(|p| (p.x, p.y))
            .chain(self.classrooms.iter().map(|c| (c.x, c.y)));
        for (x, y) in points {
            if !self.contains(x, y) {
                return Err(Error::Validation(format!(
                    "({x}, {y}) lies outside the building or inside the courtyard"
                )));
            }
        }
        Ok(())
    }

    fn uniform_point(&self, rng: &mut Rng) -> (f64, f64) {
        loop {
            let x = rng.random_range(0.0..=self.width_m);
            let y = rng.random_range(0.0..=self.height_m);
            if self.contains(x, y) {
                return (x, y);
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClassroomScenarioSpec {
    pub floorplan: Floorplan,
    /// Fraction of classrooms in use, in `(0, 1]`.
    pub rho: f64,
    pub students_per_classroom: u32,
    pub roaming_students: u32,
    /// Placement standard deviation as a fraction of the longer building side.
    pub placement_sigma_normalized: f64,
    pub radii: InterferenceRadii,
    pub radio: RadioParams,
    pub spectrum_size: u16,
    pub seed: u64,
}

impl ClassroomScenarioSpec {
    pub fn new(rho: f64, seed: u64) -> Self {
        ClassroomScenarioSpec {
            floorplan: Floorplan::bundled(),
            rho,
            students_per_classroom: 25,
            roaming_students: 100,
            placement_sigma_normalized: 0.05,
            radii: InterferenceRadii::default(),
            radio: RadioParams::default(),
            spectrum_size: DEFAULT_SPECTRUM_SIZE,
            seed,
        }
    }

    pub fn occupied_classrooms(&self) -> usize {
        (self.rho * self.floorplan.classrooms.len() as f64).round() as usize
    }
}

pub fn gen_classroom_scenario(spec: &ClassroomScenarioSpec) -> Result<Scenario> {
    if !(spec.rho > 0.0 && spec.rho <= 1.0) {
        return Err(Error::Validation(format!(
            "occupation ratio must lie in (0, 1], got {}",
            spec.rho
        )));
    }
    if !(spec.placement_sigma_normalized >= 0.0 && spec.placement_sigma_normalized.is_finite()) {
        return Err(Error::Validation(format!(
            "placement sigma must be non-negative, got {}",
            spec.placement_sigma_normalized
        )));
    }
    let plan = &spec.floorplan;
    plan.validate()?;
    let mut rng = rng_from_seed(spec.seed);

    let mut chosen = sample(&mut rng, plan.classrooms.len(), spec.occupied_classrooms()).into_vec();
    chosen.sort_unstable();

    let sigma = spec.placement_sigma_normalized * plan.width_m.max(plan.height_m);
    let mut wds = Vec::new();
    for idx in chosen {
        let room = plan.classrooms[idx];
        for _ in 0..spec.students_per_classroom {
            let (x, y) = if sigma > 0.0 {
                let nx = Normal::new(room.x, sigma).expect("finite sigma");
                let ny = Normal::new(room.y, sigma).expect("finite sigma");
                loop {
                    let (x, y) = (nx.sample(&mut rng), ny.sample(&mut rng));
                    if plan.contains(x, y) {
                        break (x, y);
                    }
                }
            } else {
                (room.x, room.y)
            };
            wds.push(Site::new(wds.len() as u32, x, y));
        }
    }
    for _ in 0..spec.roaming_students {
        let (x, y) = plan.uniform_point(&mut rng);
        wds.push(Site::new(wds.len() as u32, x, y));
    }

    let aps = plan
        .ap_positions
        .iter()
        .enumerate()
        .map(|(i, p)| Site::new(i as u32, p.x, p.y))
        .collect();
    Ok(Scenario {
        format: FORMAT_VERSION,
        width_m: plan.width_m,
        height_m: plan.height_m,
        aps,
        wds,
        radio: spec.radio,
        interference_radii: spec.radii,
        spectrum_size: spec.spectrum_size,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RandomScenarioSpec {
    pub n_aps: u32,
    pub n_wds: u32,
    pub width_m: f64,
    pub height_m: f64,
    pub radii: InterferenceRadii,
    pub radio: RadioParams,
    pub spectrum_size: u16,
}

impl Default for RandomScenarioSpec {
    fn default() -> Self {
        RandomScenarioSpec {
            n_aps: 15,
            n_wds: 15,
            width_m: 100.0,
            height_m: 100.0,
            radii: InterferenceRadii::default(),
            radio: RadioParams::default(),
            spectrum_size: DEFAULT_SPECTRUM_SIZE,
        }
    }
}

impl RandomScenarioSpec {
    pub fn sized(n_aps: u32, n_wds: u32) -> Self {
        RandomScenarioSpec {
            n_aps,
            n_wds,
            ..Self::default()
        }
    }
}

/// APs and WDs uniform over the rectangle.
pub fn gen_random_scenario(spec: &RandomScenarioSpec, seed: u64) -> Result<Scenario> {
    if spec.n_aps == 0 {
        return Err(Error::Validation(
            "a random scenario needs at least one AP".into(),
        ));
    }
    if !(spec.width_m > 0.0 && spec.height_m > 0.0) {
        return Err(Error::Validation(
            "scenario dimensions must be positive".into(),
        ));
    }
    let mut rng = rng_from_seed(seed);
    let mut place = |n: u32| -> Vec<Site> {
        (0..n)
            .map(|id| {
                let x = rng.random_range(0.0..=spec.width_m);
                let y = rng.random_range(0.0..=spec.height_m);
                Site::new(id, x, y)
            })
            .collect()
    };
    let aps = place(spec.n_aps);
    let wds = place(spec.n_wds);
    Ok(Scenario {
        format: FORMAT_VERSION,
        width_m: spec.width_m,
        height_m: spec.height_m,
        aps,
        wds,
        radio: spec.radio,
        interference_radii: spec.radii,
        spectrum_size: spec.spectrum_size,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Family {
    Random,
    Classroom,
}

impl Family {
    pub fn as_str(self) -> &'static str {
        match self {
            Family::Random => "random",
            Family::Classroom => "classroom",
        }
    }
}

/// A scenario with its provenance inside a corpus.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NamedScenario {
    pub id: String,
    pub family: Family,
    /// `rho` for classroom scenarios, `APSxWDS` for random ones.
    pub label: String,
    pub seed: u64,
    pub scenario: Scenario,
}

/// The published AP/WD combinations of the random corpus.
pub const RANDOM_COMBOS: [(u32, u32); 9] = [
    (15, 15),
    (15, 75),
    (15, 150),
    (50, 50),
    (50, 250),
    (50, 500),
    (100, 100),
    (100, 500),
    (100, 1000),
];

pub const OCCUPATION_RATIOS: [f64; 4] = [0.25, 0.5, 0.75, 1.0];

#[derive(Debug, Clone, PartialEq)]
pub struct CorpusSpec {
    pub combos: Vec<(u32, u32)>,
    pub graphs_per_combo: u32,
    pub random: RandomScenarioSpec,
    pub rhos: Vec<f64>,
    pub scenarios_per_rho: u32,
    /// Template for classroom scenarios; its `rho` and `seed` are replaced.
    pub classroom: ClassroomScenarioSpec,
}

impl Default for CorpusSpec {
    /// 30 graphs for each of the 9 combos and 3 floorplan scenarios for each
    /// of the 4 occupation ratios: 270 + 12 scenarios.
    fn default() -> Self {
        CorpusSpec {
            combos: RANDOM_COMBOS.to_vec(),
            graphs_per_combo: 30,
            random: RandomScenarioSpec::default(),
            rhos: OCCUPATION_RATIOS.to_vec(),
            scenarios_per_rho: 3,
            classroom: ClassroomScenarioSpec::new(1.0, 0),
        }
    }
}

pub fn gen_corpus(seed: u64) -> Result<Vec<NamedScenario>> {
    gen_corpus_with(&CorpusSpec::default(), seed, Execution::default())
}

/// Random scenarios first (combo-major), then classroom scenarios
/// (ratio-major). Child seeds depend only on the master seed and position.
pub fn gen_corpus_with(
    spec: &CorpusSpec,
    seed: u64,
    exec: Execution,
) -> Result<Vec<NamedScenario>> {
    enum Job {
        Random { combo: usize, rep: u32 },
        Classroom { rho: usize, rep: u32 },
    }
    let mut jobs = Vec::new();
    for combo in 0..spec.combos.len() {
        for rep in 0..spec.graphs_per_combo {
            jobs.push(Job::Random { combo, rep });
        }
    }
    for rho in 0..spec.rhos.len() {
        for rep in 0..spec.scenarios_per_rho {
            jobs.push(Job::Classroom { rho, rep });
        }
    }

    exec.map(&jobs, |job| match *job {
        Job::Random { combo, rep } => {
            let (n_aps, n_wds) = spec.combos[combo];
            let child = derive_seed(seed, &[0, combo as u64, rep as u64]);
            let rs = RandomScenarioSpec {
                n_aps,
                n_wds,
                ..spec.random
            };
            Ok(NamedScenario {
                id: format!("random-{n_aps}-{n_wds}-{rep:02}"),
                family: Family::Random,
                label: format!("{n_aps}x{n_wds}"),
                seed: child,
                scenario: gen_random_scenario(&rs, child)?,
            })
        }
        Job::Classroom { rho, rep } => {
            let ratio = spec.rhos[rho];
            let child = derive_seed(seed, &[1, rho as u64, rep as u64]);
            let cs = ClassroomScenarioSpec {
                rho: ratio,
                seed: child,
                ..spec.classroom.clone()
            };
            Ok(NamedScenario {
                id: format!("classroom-rho{ratio:.2}-{rep}"),
                family: Family::Classroom,
                label: format!("{ratio}"),
                seed: child,
                scenario: gen_classroom_scenario(&cs)?,
            })
        }
    })
    .into_iter()
    .collect()
}
