//! Versioned JSON reports.

use std::fs;
use std::path::{Path, PathBuf};

use anyhow::Context;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::config::{RunConfig, Task};

pub const SCHEMA: u32 = 1;
pub const TOOL: &str = "simplederiv";
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// Environment variable naming a directory that receives a copy of every
/// JSON report.
pub const OUT_DIR_ENV: &str = "SIMPLEDERIV_OUT_DIR";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    /// The outcome agrees with what the theory predicts (or nothing is predicted).
    Expected,
    /// The run found something the theory rules out.
    Counterexample,
}

impl Status {
    pub fn and(self, other: Status) -> Status {
        if self == Status::Expected && other == Status::Expected {
            Status::Expected
        } else {
            Status::Counterexample
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Verdict {
    pub status: Status,
    /// What the theory predicts for this configuration, or `none`.
    pub expectation: String,
    pub summary: String,
    /// `bounded` for finite searches, `exact` for finite identities.
    pub evidence: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Timing {
    pub millis: f64,
}

/// Report of a single task.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub schema: u32,
    pub tool: String,
    pub version: String,
    pub command: String,
    pub seed: u64,
    pub config: Task,
    pub verdict: Verdict,
    pub warnings: Vec<String>,
    pub result: Value,
    pub timing: Timing,
}

/// Report of a parameter grid: one sub-report per point in grid order.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GridReport {
    pub schema: u32,
    pub tool: String,
    pub version: String,
    pub command: String,
    pub seed: u64,
    pub config: RunConfig,
    pub verdict: Verdict,
    pub points: Vec<Report>,
    pub timing: Timing,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Output {
    Grid(GridReport),
    Point(Report),
}

impl Output {
    pub fn status(&self) -> Status {
        match self {
            Output::Grid(g) => g.verdict.status,
            Output::Point(p) => p.verdict.status,
        }
    }

    pub fn command(&self) -> &str {
        match self {
            Output::Grid(g) => &g.command,
            Output::Point(p) => &p.command,
        }
    }

    pub fn points(&self) -> Vec<&Report> {
        match self {
            Output::Grid(g) => g.points.iter().collect(),
            Output::Point(p) => vec![p],
        }
    }

    /// The run configuration that reproduces this report.
    pub fn run_config(&self) -> RunConfig {
        match self {
            Output::Grid(g) => g.config.clone(),
            Output::Point(p) => RunConfig {
                seed: p.seed,
                tasks: vec![p.config.clone()],
            },
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize") + "\n"
    }

    /// JSON with every `timing` field removed; identical configurations give
    /// identical output.
    pub fn to_json_without_timing(&self) -> String {
        let mut value = serde_json::to_value(self).expect("reports serialize");
        strip_timing(&mut value);
        serde_json::to_string_pretty(&value).expect("values serialize") + "\n"
    }

    /// Writes the JSON report into `dir` under a name derived from the
    /// configuration, and returns the path.
    pub fn write_to(&self, dir: &Path) -> anyhow::Result<PathBuf> {
        fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
        let config = serde_json::to_string(&self.run_config()).expect("configs serialize");
        let path = dir.join(format!("{}-{:016x}.json", self.command(), fnv1a(config.as_bytes())));
        fs::write(&path, self.to_json()).with_context(|| format!("writing {}", path.display()))?;
        Ok(path)
    }
}

pub fn strip_timing(value: &mut Value) {
    match value {
        Value::Object(map) => {
            map.remove("timing");
            map.values_mut().for_each(strip_timing);
        }
        Value::Array(items) => items.iter_mut().for_each(strip_timing),
        _ => {}
    }
}

fn fnv1a(bytes: &[u8]) -> u64 {
    bytes.iter().fold(0xcbf2_9ce4_8422_2325, |h, &b| {
        (h ^ u64::from(b)).wrapping_mul(0x0100_0000_01b3)
    })
}
