#![allow(dead_code)]

use std::fs;
use std::path::{Path, PathBuf};
use std::process::Command;

use affectframe::induction::AffectModel;
use affectframe::FrameDimension;

pub struct Run {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl Run {
    pub fn ok(self) -> Run {
        assert_eq!(self.code, 0, "stdout:\n{}\nstderr:\n{}", self.stdout, self.stderr);
        self
    }
}

/// Runs the binary inside `cwd`, ignoring any ambient config variable.
pub fn affectframe(cwd: &Path, args: &[&str]) -> Run {
    affectframe_env(cwd, args, &[])
}

pub fn affectframe_env(cwd: &Path, args: &[&str], env: &[(&str, &str)]) -> Run {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_affectframe"));
    cmd.current_dir(cwd).args(args).env_remove("AFFECTFRAME_CONFIG").env("RUST_LOG", "error");
    for (k, v) in env {
        cmd.env(k, v);
    }
    let out = cmd.output().expect("binary runs");
    Run {
        code: out.status.code().expect("exited normally"),
        stdout: String::from_utf8(out.stdout).unwrap(),
        stderr: String::from_utf8(out.stderr).unwrap(),
    }
}

pub fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(name)
}

pub fn fixture_str(name: &str) -> String {
    fixture(name).to_str().unwrap().to_string()
}

/// Bias-only models: each dimension always predicts the label at `labels[d]`.
pub fn constant_models(dir: &Path, dim: usize, labels: &[(FrameDimension, usize)]) {
    fs::create_dir_all(dir).unwrap();
    for &(d, idx) in labels {
        let mut rows = vec![vec![0.0; dim + 1]; 3];
        rows[idx][dim] = 1.0;
        AffectModel::from_weights(d, rows)
            .unwrap()
            .save(dir.join(format!("{d}.json")))
            .unwrap();
    }
}

/// Every regular file below `dir`, as (relative path, bytes), sorted.
pub fn tree(dir: &Path) -> Vec<(String, Vec<u8>)> {
    let mut out = Vec::new();
    let mut stack = vec![dir.to_path_buf()];
    while let Some(d) = stack.pop() {
        for entry in fs::read_dir(&d).unwrap() {
            let p = entry.unwrap().path();
            if p.is_dir() {
                stack.push(p);
            } else {
                let rel = p.strip_prefix(dir).unwrap().to_string_lossy().into_owned();
                out.push((rel, fs::read(&p).unwrap()));
            }
        }
    }
    out.sort();
    out
}

/// Small grid so fits finish quickly in debug builds.
pub const FAST_GRID: [&str; 4] = ["--l2", "0.1,1", "--class-weights", "1,2"];

/// synth -> ingest -> train -> score -> analyze inside `dir`, all with
/// relative paths.
pub fn pipeline(dir: &Path, seed: &str, threads: &str) {
    let run = |args: &[&str]| {
        let mut full = vec!["--seed", seed, "--threads", threads];
        full.extend_from_slice(args);
        affectframe(dir, &full).ok()
    };
    run(&["--out-dir", "synth", "synth", "--verbs", "45", "--documents", "30", "--embedding-dim", "8"]);
    run(&["--out-dir", "ingest", "ingest", "--corpus", "synth/world/corpus.jsonl", "--dedup-threshold"]);
    let mut train = vec![
        "--out-dir",
        "train",
        "train",
        "--corpus",
        "ingest/corpus.jsonl",
        "--power-agency",
        "synth/world/power_agency.csv",
        "--sentiment",
        "synth/world/sentiment.tsv",
    ];
    train.extend_from_slice(&FAST_GRID);
    run(&train);
    run(&["--out-dir", "score", "score", "--corpus", "ingest/corpus.jsonl", "--models", "train/models"]);
    run(&["--out-dir", "top", "analyze", "top", "--scores", "score", "--dimension", "power", "--min-count", "1"]);
    run(&["--out-dir", "graph", "analyze", "graph", "--scores", "score"]);
    run(&["--out-dir", "temporal", "analyze", "temporal", "--scores", "score", "--cutoff", "2018-01-04T00:00:00Z"]);
}
