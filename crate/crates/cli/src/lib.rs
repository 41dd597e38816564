//! Command-line front end for the `affectframe` pipeline.
//!
//! Each subcommand writes into its own run directory, alongside a
//! `manifest.json` listing outputs and warnings and the effective
//! `config.toml`, which reproduces the run when passed back via `--config`.

pub mod args;
pub mod commands;
pub mod config;
pub mod run;

use std::path::PathBuf;

use anyhow::Context;

pub use args::Cli;
use args::Command;
use config::RunConfig;

/// Process exit status.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Success = 0,
    /// Finished, but something was skipped along the way.
    Warnings = 1,
    /// Bad arguments, a missing file or malformed input.
    InvalidInput = 2,
}

#[derive(Debug)]
pub struct Outcome {
    pub out_dir: PathBuf,
    pub summary: String,
    pub warnings: Vec<String>,
}

impl Outcome {
    pub fn status(&self) -> Status {
        if self.warnings.is_empty() {
            Status::Success
        } else {
            Status::Warnings
        }
    }
}

/// Loads the configuration, applies the global flags and runs the command
/// on a thread pool of the requested size.
pub fn execute(cli: &Cli) -> anyhow::Result<Outcome> {
    let mut config = match &cli.config {
        Some(path) => RunConfig::load(path)?,
        None => RunConfig::default(),
    };
    config::set(&mut config.seed, cli.seed);
    config::set(&mut config.threads, cli.threads);
    config::set(&mut config.paths.output, cli.out_dir.clone());

    let mut pool = rayon::ThreadPoolBuilder::new();
    if let Some(n) = config.threads {
        anyhow::ensure!(n > 0, "--threads must be at least 1");
        pool = pool.num_threads(n);
    }
    let pool = pool.build().context("starting worker threads")?;
    pool.install(|| dispatch(&cli.command, &mut config))
}

fn dispatch(command: &Command, config: &mut RunConfig) -> anyhow::Result<Outcome> {
    let (mut out, options) = match command {
        Command::Ingest(a) => (commands::ingest::run(a, config)?, serde_json::to_value(a)?),
        Command::Train(a) => (commands::train::run(a, config)?, serde_json::to_value(a)?),
        Command::Score(a) => (commands::score::run(a, config)?, serde_json::to_value(a)?),
        Command::Analyze(c) => (commands::analyze::run(c, config)?, analyze_options(c)?),
        Command::Eval(c) => (commands::eval::run(c, config)?, eval_options(c)?),
        Command::Synth(a) => (commands::synth::run(a, config)?, serde_json::to_value(a)?),
    };
    out.finish(command.name(), config, &options)?;
    Ok(Outcome {
        out_dir: out.path().to_path_buf(),
        summary: out.summary().to_string(),
        warnings: out.warnings().to_vec(),
    })
}

fn analyze_options(c: &args::AnalyzeCommand) -> serde_json::Result<serde_json::Value> {
    use args::AnalyzeCommand::*;
    match c {
        Top(a) => serde_json::to_value(a),
        Pair(a) => serde_json::to_value(a),
        Graph(a) => serde_json::to_value(a),
        Temporal(a) => serde_json::to_value(a),
    }
}

fn eval_options(c: &args::EvalCommand) -> serde_json::Result<serde_json::Value> {
    use args::EvalCommand::*;
    match c {
        Lexicon(a) => serde_json::to_value(a),
        Contextual(a) => serde_json::to_value(a),
        Entity(a) => serde_json::to_value(a),
    }
}
