use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use chanassign::domain::{InterferenceMatrix, InterferenceRadii, Scenario};
use chanassign::scenario_gen::{Family, NamedScenario};
use serde::{Deserialize, Serialize};

use crate::manifest::{strip_manifest, MANIFEST_FILE};

pub const INDEX_FILE: &str = "corpus.json";

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct IndexEntry {
    pub id: String,
    pub family: Family,
    pub label: String,
    pub seed: u64,
    pub file: String,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CorpusIndex {
    pub scenarios: Vec<IndexEntry>,
}

pub fn read_scenario(path: &Path) -> Result<Scenario> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let value: serde_json::Value =
        serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))?;
    serde_json::from_value(strip_manifest(value))
        .with_context(|| format!("{} is not a scenario file", path.display()))
}

/// Provenance for a scenario file that is not listed in a corpus index.
fn infer(path: &Path, scenario: Scenario) -> NamedScenario {
    let id = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "scenario".into());
    let family = if id.starts_with("classroom") {
        Family::Classroom
    } else {
        Family::Random
    };
    NamedScenario {
        label: format!("{}x{}", scenario.aps.len(), scenario.wds.len()),
        id,
        family,
        seed: 0,
        scenario,
    }
}

/// Loads scenarios from each input. A file is one scenario. A directory with a
/// corpus index yields the indexed scenarios in index order; any other
/// directory yields its JSON files in name order.
pub fn load_scenarios(inputs: &[PathBuf]) -> Result<Vec<NamedScenario>> {
    let mut out = Vec::new();
    for input in inputs {
        if input.is_dir() {
            out.extend(load_dir(input)?);
        } else {
            out.push(infer(input, read_scenario(input)?));
        }
    }
    Ok(out)
}

fn load_dir(dir: &Path) -> Result<Vec<NamedScenario>> {
    let index_path = dir.join(INDEX_FILE);
    if index_path.is_file() {
        let text = fs::read_to_string(&index_path)
            .with_context(|| format!("reading {}", index_path.display()))?;
        let value = serde_json::from_str(&text)?;
        let index: CorpusIndex = serde_json::from_value(strip_manifest(value))
            .with_context(|| format!("parsing {}", index_path.display()))?;
        return index
            .scenarios
            .into_iter()
            .map(|e| {
                Ok(NamedScenario {
                    scenario: read_scenario(&dir.join(&e.file))?,
                    id: e.id,
                    family: e.family,
                    label: e.label,
                    seed: e.seed,
                })
            })
            .collect();
    }
    let mut files: Vec<PathBuf> = fs::read_dir(dir)
        .with_context(|| format!("listing {}", dir.display()))?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| {
            p.extension().is_some_and(|x| x == "json")
                && p.file_name().is_some_and(|n| n != MANIFEST_FILE)
        })
        .collect();
    files.sort();
    files
        .into_iter()
        .map(|p| Ok(infer(&p, read_scenario(&p)?)))
        .collect()
}

pub fn apply_radii(scenarios: &mut [NamedScenario], radii: Option<InterferenceRadii>) {
    if let Some(r) = radii {
        for s in scenarios {
            s.scenario.interference_radii = r;
        }
    }
}

pub fn read_matrix(path: Option<&Path>) -> Result<Option<InterferenceMatrix>> {
    let Some(path) = path else { return Ok(None) };
    let file = fs::File::open(path).with_context(|| format!("opening {}", path.display()))?;
    let w = InterferenceMatrix::read_csv(file)
        .with_context(|| format!("reading matrix {}", path.display()))?;
    Ok(Some(w))
}
