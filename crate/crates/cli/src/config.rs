//! TOML run configuration.
//!
//! Every field is optional. Command-line flags take precedence, and the
//! effective configuration is written next to each run's outputs so the run
//! can be repeated with `--config`. Relative paths resolve against the
//! working directory.

use std::path::{Path, PathBuf};

use anyhow::{bail, Context};
use chrono::{DateTime, TimeZone, Utc};
use serde::{Deserialize, Serialize};

pub const DEFAULT_SEED: u64 = 0;
pub const DEFAULT_DEDUP_THRESHOLD: f64 = 0.011;
pub const DEFAULT_MIN_MENTIONS: usize = 10;
pub const DEFAULT_MIN_COUNT: usize = 3;
pub const DEFAULT_TOP_K: usize = 100;
pub const DEFAULT_OUT_DIR: &str = "affectframe-run";

/// Start of the day the Babe.net article about Aziz Ansari appeared.
pub fn default_cutoff() -> DateTime<Utc> {
    Utc.with_ymd_and_hms(2018, 1, 13, 0, 0, 0).unwrap()
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub threads: Option<usize>,
    pub paths: PathsConfig,
    pub train: TrainConfig,
    pub slice: SliceConfig,
    pub analysis: AnalysisConfig,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PathsConfig {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub corpus: Option<PathBuf>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub power_agency: Option<PathBuf>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sentiment: Option<PathBuf>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub splits: Option<PathBuf>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub models: Option<PathBuf>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub scores: Option<PathBuf>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub merge_map: Option<PathBuf>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub exclusions: Option<PathBuf>,
    /// Not logged: a rerun usually writes elsewhere.
    #[serde(skip_serializing)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct TrainConfig {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub class_weights: Option<Vec<f64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub l2: Option<Vec<f64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tolerance: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub max_iterations: Option<usize>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SliceConfig {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub outlets: Option<Vec<String>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub from: Option<DateTime<Utc>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub until: Option<DateTime<Utc>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub keyword: Option<String>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub exclude: Vec<String>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct AnalysisConfig {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub dedup_threshold: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub min_mentions: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub min_count: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub top_k: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub cutoff: Option<DateTime<Utc>>,
}

impl RunConfig {
    pub fn load(path: &Path) -> anyhow::Result<Self> {
        let text = std::fs::read_to_string(path).with_context(|| format!("reading config {}", path.display()))?;
        toml::from_str(&text).with_context(|| format!("parsing config {}", path.display()))
    }

    pub fn to_toml(&self) -> anyhow::Result<String> {
        Ok(toml::to_string(self)?)
    }

    pub fn seed(&self) -> u64 {
        self.seed.unwrap_or(DEFAULT_SEED)
    }

    pub fn out_dir(&self) -> PathBuf {
        self.paths.output.clone().unwrap_or_else(|| PathBuf::from(DEFAULT_OUT_DIR))
    }

    pub fn dedup_threshold(&self) -> f64 {
        self.analysis.dedup_threshold.unwrap_or(DEFAULT_DEDUP_THRESHOLD)
    }

    pub fn min_mentions(&self) -> usize {
        self.analysis.min_mentions.unwrap_or(DEFAULT_MIN_MENTIONS)
    }

    pub fn min_count(&self) -> usize {
        self.analysis.min_count.unwrap_or(DEFAULT_MIN_COUNT)
    }

    pub fn top_k(&self) -> usize {
        self.analysis.top_k.unwrap_or(DEFAULT_TOP_K)
    }

    pub fn cutoff(&self) -> DateTime<Utc> {
        self.analysis.cutoff.unwrap_or_else(default_cutoff)
    }
}

/// Overwrites `slot` when the flag was given.
pub fn set<T>(slot: &mut Option<T>, flag: Option<T>) {
    if flag.is_some() {
        *slot = flag;
    }
}

/// The configured path for `what`, or an error naming the missing flag.
pub fn require<'a>(path: &'a Option<PathBuf>, what: &str, flag: &str) -> anyhow::Result<&'a Path> {
    match path {
        Some(p) => Ok(p),
        None => bail!("no {what} given (use {flag} or set it in the config file)"),
    }
}

/// Fails on the first path that does not exist, before any work starts.
pub fn check_inputs<'a>(paths: impl IntoIterator<Item = &'a Path>) -> anyhow::Result<()> {
    for p in paths {
        if !p.exists() {
            bail!("input not found: {}", p.display());
        }
    }
    Ok(())
}
