use std::fs;
use std::path::{Path, PathBuf};

use anyhow::Context;
use log::warn;
use serde::Serialize;

use crate::config::RunConfig;

pub const MANIFEST: &str = "manifest.json";
pub const CONFIG: &str = "config.toml";

/// Output directory of one command invocation.
#[derive(Debug)]
pub struct RunDir {
    dir: PathBuf,
    outputs: Vec<OutputRecord>,
    warnings: Vec<String>,
    summary: String,
}

#[derive(Debug, Clone, Serialize)]
struct OutputRecord {
    path: String,
    bytes: usize,
}

#[derive(Serialize)]
struct Manifest<'a> {
    tool: &'static str,
    version: &'static str,
    command: &'a str,
    seed: u64,
    options: serde_json::Value,
    outputs: &'a [OutputRecord],
    warnings: &'a [String],
}

impl RunDir {
    pub fn create(dir: impl Into<PathBuf>) -> anyhow::Result<Self> {
        let dir = dir.into();
        fs::create_dir_all(&dir).with_context(|| format!("creating output directory {}", dir.display()))?;
        Ok(RunDir {
            dir,
            outputs: Vec::new(),
            warnings: Vec::new(),
            summary: String::new(),
        })
    }

    pub fn path(&self) -> &Path {
        &self.dir
    }

    /// Writes `bytes` to `relative` inside the run directory.
    pub fn write(&mut self, relative: &str, bytes: &[u8]) -> anyhow::Result<PathBuf> {
        let path = self.dir.join(relative);
        if let Some(parent) = path.parent() {
            fs::create_dir_all(parent).with_context(|| format!("creating {}", parent.display()))?;
        }
        fs::write(&path, bytes).with_context(|| format!("writing {}", path.display()))?;
        self.outputs.retain(|o| o.path != relative);
        self.outputs.push(OutputRecord {
            path: relative.to_string(),
            bytes: bytes.len(),
        });
        Ok(path)
    }

    pub fn write_json(&mut self, relative: &str, value: &impl Serialize) -> anyhow::Result<PathBuf> {
        let mut text = serde_json::to_string_pretty(value)?;
        text.push('\n');
        self.write(relative, text.as_bytes())
    }

    pub fn warn(&mut self, message: impl Into<String>) {
        let message = message.into();
        warn!("{message}");
        self.warnings.push(message);
    }

    pub fn warnings(&self) -> &[String] {
        &self.warnings
    }

    /// Appends a line to the text printed on success.
    pub fn say(&mut self, line: impl AsRef<str>) {
        self.summary.push_str(line.as_ref());
        self.summary.push('\n');
    }

    pub fn summary(&self) -> &str {
        &self.summary
    }

    /// Logs the effective configuration and the manifest.
    pub fn finish(&mut self, command: &str, config: &RunConfig, options: &impl Serialize) -> anyhow::Result<()> {
        let toml = config.to_toml()?;
        self.write(CONFIG, toml.as_bytes())?;
        let mut outputs = self.outputs.clone();
        outputs.sort_by(|a, b| a.path.cmp(&b.path));
        let manifest = Manifest {
            tool: "affectframe",
            version: env!("CARGO_PKG_VERSION"),
            command,
            seed: config.seed(),
            options: serde_json::to_value(options)?,
            outputs: &outputs,
            warnings: &self.warnings,
        };
        let mut text = serde_json::to_string_pretty(&manifest)?;
        text.push('\n');
        let path = self.dir.join(MANIFEST);
        fs::write(&path, text).with_context(|| format!("writing {}", path.display()))
    }
}
