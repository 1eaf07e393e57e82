use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use serde::Serialize;
use serde_json::Value;

pub const MANIFEST_FILE: &str = "manifest.json";

/// Provenance record written next to every command's outputs. It is the only
/// file that carries a timestamp, so the data files stay reproducible.
#[derive(Debug, Serialize)]
pub struct RunManifest {
    pub tool: &'static str,
    pub version: &'static str,
    pub command: String,
    pub seed: u64,
    pub config: Value,
    pub timestamp: String,
    pub outputs: Vec<String>,
}

/// Collects the files a command writes under its output directory.
pub struct OutputDir {
    root: PathBuf,
    written: Vec<String>,
}

impl OutputDir {
    pub fn create(root: &Path) -> Result<Self> {
        fs::create_dir_all(root).with_context(|| format!("creating {}", root.display()))?;
        Ok(OutputDir {
            root: root.to_path_buf(),
            written: Vec::new(),
        })
    }

    pub fn root(&self) -> &Path {
        &self.root
    }

    pub fn write_bytes(&mut self, rel: &str, bytes: &[u8]) -> Result<PathBuf> {
        let path = self.root.join(rel);
        if let Some(parent) = path.parent() {
            fs::create_dir_all(parent).with_context(|| format!("creating {}", parent.display()))?;
        }
        fs::write(&path, bytes).with_context(|| format!("writing {}", path.display()))?;
        self.written.push(rel.to_string());
        Ok(path)
    }

    /// Writes `data` as pretty JSON with a `manifest` field pointing back at
    /// the manifest of this run.
    pub fn write_json<T: Serialize>(&mut self, rel: &str, data: &T) -> Result<PathBuf> {
        let mut value = serde_json::to_value(data)?;
        if let Value::Object(map) = &mut value {
            map.insert("manifest".into(), Value::String(self.manifest_ref(rel)));
        }
        let mut text = serde_json::to_string_pretty(&value)?;
        text.push('\n');
        self.write_bytes(rel, text.as_bytes())
    }

    /// Path of the manifest relative to the file `rel`.
    fn manifest_ref(&self, rel: &str) -> String {
        let depth = Path::new(rel).components().count().saturating_sub(1);
        let mut s = "../".repeat(depth);
        s.push_str(MANIFEST_FILE);
        s
    }

    pub fn finish(self, command: &str, seed: u64, config: Value) -> Result<PathBuf> {
        let manifest = RunManifest {
            tool: env!("CARGO_PKG_NAME"),
            version: env!("CARGO_PKG_VERSION"),
            command: command.to_string(),
            seed,
            config,
            timestamp: chrono::Utc::now().to_rfc3339(),
            outputs: self.written,
        };
        let path = self.root.join(MANIFEST_FILE);
        let text = serde_json::to_string_pretty(&manifest)? + "\n";
        fs::write(&path, text).with_context(|| format!("writing {}", path.display()))?;
        Ok(path)
    }
}

/// Removes the `manifest` back-reference so a data file written by
/// [`OutputDir::write_json`] parses as its plain type again.
pub fn strip_manifest(mut value: Value) -> Value {
    if let Value::Object(map) = &mut value {
        map.remove("manifest");
    }
    value
}
