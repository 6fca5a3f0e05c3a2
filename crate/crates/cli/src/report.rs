//! Machine-readable stage reports written to `<output>/reports/<stage>.json`.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use serde::Serialize;
use serde_json::Value;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Ok,
    GateFailed,
    Failed,
}

#[derive(Debug, Serialize)]
pub struct StageReport {
    pub stage: String,
    pub status: Status,
    pub duration_ms: u64,
    pub inputs: BTreeMap<String, String>,
    pub outputs: BTreeMap<String, String>,
    #[serde(skip_serializing_if = "Value::is_null")]
    pub summary: Value,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

/// Collects a stage's inputs, outputs and summary while it runs, so a
/// report can be written even when the stage fails part-way.
#[derive(Debug)]
pub struct Record {
    out_dir: PathBuf,
    pub inputs: BTreeMap<String, String>,
    pub outputs: BTreeMap<String, String>,
    pub summary: Value,
    pub gate_failed: bool,
}

impl Record {
    pub fn new(out_dir: &Path) -> Self {
        Record {
            out_dir: out_dir.to_path_buf(),
            inputs: BTreeMap::new(),
            outputs: BTreeMap::new(),
            summary: Value::Null,
            gate_failed: false,
        }
    }

    /// Paths inside the output directory are recorded relative to it so
    /// reports do not depend on where the run was placed.
    fn show(&self, path: &Path) -> String {
        path.strip_prefix(&self.out_dir)
            .unwrap_or(path)
            .to_string_lossy()
            .replace('\\', "/")
    }

    pub fn input(&mut self, key: &str, path: &Path) {
        let s = self.show(path);
        self.inputs.insert(key.to_string(), s);
    }

    pub fn output(&mut self, key: &str, path: &Path) {
        let s = self.show(path);
        self.outputs.insert(key.to_string(), s);
    }
}
