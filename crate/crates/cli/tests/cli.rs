mod common;

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use affectframe::analysis::pairwise_compare;
use affectframe::corpus::{load_corpus, write_corpus};
use affectframe::eval::entity::{agreed_ranks, build_judgments, load_rankings, pairwise_power_accuracy, StepScores};
use affectframe::induction::AffectModel;
use affectframe::scoring::{read_contributions, read_mentions};
use affectframe::scoring::{build_profiles, score_corpus, ModelSet, ProfileSet, SliceDescriptor, VerbScorer};
use affectframe::synth::{planted_rankings, SynthConfig, SynthWorld};
use affectframe::{EntityDimension, FrameDimension};
use common::*;
use tempfile::tempdir;

fn read(path: impl AsRef<Path>) -> String {
    fs::read_to_string(path.as_ref()).unwrap_or_else(|e| panic!("{}: {e}", path.as_ref().display()))
}

fn run_ok(run: &Run) {
    assert_eq!(run.code, 0, "{}", run.stderr);
}

fn push_models(dir: &Path) {
    constant_models(
        dir,
        4,
        &[
            (FrameDimension::Power, 2),
            (FrameDimension::Agency, 2),
            (FrameDimension::SentimentAgent, 1),
            (FrameDimension::SentimentTheme, 1),
        ],
    );
}

#[test]
fn ingest_reports_documents_and_pairs() {
    let dir = tempdir().unwrap();
    let run = affectframe(dir.path(), &["--out-dir", "out", "ingest", "--corpus", &fixture_str("push.jsonl")]).ok();
    assert!(run.stdout.contains("documents: 2"), "{}", run.stdout);
    assert!(run.stdout.contains("pairs: 2"), "{}", run.stdout);
    let corpus = load_corpus(dir.path().join("out/corpus.jsonl")).unwrap();
    assert_eq!(corpus.len(), 2);
    assert!(!dir.path().join("out/discarded.tsv").exists());
}

#[test]
fn bare_dedup_flag_applies_the_default_threshold() {
    let dir = tempdir().unwrap();
    let corpus = fixture_str("duplicated.jsonl");
    let run = affectframe(dir.path(), &["--out-dir", "d", "ingest", "--corpus", &corpus, "--dedup-threshold"]).ok();
    assert!(run.stdout.contains("documents: 1"), "{}", run.stdout);
    assert!(run.stdout.contains("threshold 0.011"), "{}", run.stdout);
    assert!(read(dir.path().join("d/discarded.tsv")).contains("fig1-repost"));

    let run = affectframe(dir.path(), &["--out-dir", "n", "ingest", "--corpus", &corpus]).ok();
    assert!(run.stdout.contains("documents: 2"), "{}", run.stdout);
}

#[test]
fn corrupt_record_exits_2_and_names_the_line() {
    let dir = tempdir().unwrap();
    let run = affectframe(dir.path(), &["ingest", "--corpus", &fixture_str("corrupt.jsonl")]);
    assert_eq!(run.code, 2);
    assert!(run.stderr.contains("line 3"), "{}", run.stderr);
}

#[test]
fn merge_map_renames_entities() {
    let dir = tempdir().unwrap();
    affectframe(
        dir.path(),
        &["--out-dir", "o", "ingest", "--corpus", &fixture_str("push.jsonl"), "--merge-map", &fixture_str("merge.tsv")],
    )
    .ok();
    let corpus = load_corpus(dir.path().join("o/corpus.jsonl")).unwrap();
    let names: Vec<&str> = corpus.documents[0].mentions.iter().map(|m| m.canonical_name.as_str()).collect();
    assert_eq!(names, ["She", "He"]);
}

#[test]
fn missing_embeddings_exit_1_with_warnings_in_the_manifest() {
    let dir = tempdir().unwrap();
    let run = affectframe(dir.path(), &["--out-dir", "o", "ingest", "--corpus", &fixture_str("no_embedding.jsonl")]);
    assert_eq!(run.code, 1, "{}", run.stderr);
    let manifest: serde_json::Value = serde_json::from_str(&read(dir.path().join("o/manifest.json"))).unwrap();
    assert!(!manifest["warnings"].as_array().unwrap().is_empty());
}

#[test]
fn missing_lexicon_exits_2() {
    let dir = tempdir().unwrap();
    let run = affectframe(
        dir.path(),
        &["train", "--corpus", &fixture_str("push.jsonl"), "--power-agency", "nowhere.csv"],
    );
    assert_eq!(run.code, 2);
    assert!(run.stderr.contains("nowhere.csv"), "{}", run.stderr);
}

#[test]
fn training_is_reproducible_and_models_feed_scoring() {
    let dir = tempdir().unwrap();
    let d = dir.path();
    affectframe(d, &["--out-dir", "s", "synth", "--verbs", "60", "--documents", "20", "--embedding-dim", "6"]).ok();
    for out in ["t1", "t2"] {
        let mut args = vec![
            "--seed",
            "3",
            "--out-dir",
            out,
            "train",
            "--corpus",
            "s/world/corpus.jsonl",
            "--power-agency",
            "s/world/power_agency.csv",
            "--dimension",
            "power,agency",
        ];
        args.extend_from_slice(&FAST_GRID);
        affectframe(d, &args).ok();
    }
    for m in ["power.json", "agency.json"] {
        assert_eq!(read(d.join("t1/models").join(m)), read(d.join("t2/models").join(m)));
        AffectModel::load(d.join("t1/models").join(m)).unwrap();
    }
    for split in ["train", "dev", "test"] {
        assert_eq!(read(d.join(format!("t1/splits/power/{split}.txt"))), read(d.join(format!("t2/splits/power/{split}.txt"))));
    }

    affectframe(d, &["--out-dir", "sc", "score", "--corpus", "s/world/corpus.jsonl", "--models", "t1/models"]).ok();
    let corpus = load_corpus(d.join("s/world/corpus.jsonl")).unwrap();
    let models: ModelSet = ["power.json", "agency.json"]
        .iter()
        .map(|m| AffectModel::load(d.join("t1/models").join(m)).unwrap())
        .collect();
    let expected = score_corpus(&corpus, VerbScorer::Models(&models)).unwrap();
    let written = read_contributions(fs::File::open(d.join("sc/contributions.tsv")).unwrap()).unwrap();
    assert_eq!(written, expected.contributions);
    let profiles: ProfileSet = serde_json::from_str(&read(d.join("sc/profiles.json"))).unwrap();
    assert_eq!(profiles, build_profiles(&expected.contributions, &SliceDescriptor::all()));
}

#[test]
fn empty_corpus_gives_header_only_exports() {
    let dir = tempdir().unwrap();
    push_models(&dir.path().join("models"));
    affectframe(dir.path(), &["--out-dir", "o", "score", "--corpus", &fixture_str("empty.jsonl"), "--models", "models"]).ok();
    for f in ["contributions.tsv", "mentions.tsv", "profiles.tsv"] {
        let text = read(dir.path().join("o").join(f));
        assert_eq!(text.lines().count(), 1, "{f}: {text}");
    }
    let profiles: ProfileSet = serde_json::from_str(&read(dir.path().join("o/profiles.json"))).unwrap();
    assert!(profiles.profiles.is_empty());
}

#[test]
fn model_and_corpus_dimension_mismatch_exits_2() {
    let dir = tempdir().unwrap();
    constant_models(&dir.path().join("models"), 3, &[(FrameDimension::Power, 2)]);
    let run = affectframe(dir.path(), &["score", "--corpus", &fixture_str("push.jsonl"), "--models", "models"]);
    assert_eq!(run.code, 2);
    assert!(run.stderr.contains('4') && run.stderr.contains('3'), "{}", run.stderr);
}

#[test]
fn push_example_scores_through_the_binary() {
    let dir = tempdir().unwrap();
    push_models(&dir.path().join("models"));
    affectframe(dir.path(), &["--out-dir", "o", "score", "--corpus", &fixture_str("push.jsonl"), "--models", "models"]).ok();
    let profiles: ProfileSet = serde_json::from_str(&read(dir.path().join("o/profiles.json"))).unwrap();
    let she = profiles.get("She").unwrap();
    assert_eq!(she.mean(EntityDimension::Power), Some(1.0));
    assert_eq!(she.mean(EntityDimension::Agency), Some(1.0));
    assert_eq!(she.mean(EntityDimension::Sentiment), Some(0.0));
    let him = profiles.get("him").unwrap();
    assert_eq!(him.mean(EntityDimension::Power), Some(-1.0));
    assert_eq!(him.mean(EntityDimension::Agency), None);
}

/// One synthetic pipeline shared by the analysis tests.
fn scored(dir: &Path) {
    pipeline(dir, "5", "1");
}

#[test]
fn analysis_commands_agree_with_the_library() {
    let dir = tempdir().unwrap();
    let d = dir.path();
    scored(d);

    // graph: node scores sum to zero
    let dot = read(d.join("graph/graph.dot"));
    let scores: Vec<f64> = dot
        .split("score=")
        .skip(1)
        .map(|s| s.trim_start_matches('"').split(|c: char| c == '"' || c == ',' || c == ']').next().unwrap().parse().unwrap())
        .collect();
    assert!(!scores.is_empty());
    assert!(scores.iter().sum::<f64>().abs() < 1e-6, "{scores:?}");

    // top -k 1: a single ranked row
    affectframe(d, &["--out-dir", "top1", "analyze", "top", "--scores", "score", "-k", "1", "--dimension", "power", "--min-count", "1"]).ok();
    assert_eq!(read(d.join("top1/top.tsv")).lines().count(), 2);

    // pair: identical to a direct call
    let contributions = read_contributions(fs::File::open(d.join("score/contributions.tsv")).unwrap()).unwrap();
    let mentions = read_mentions(fs::File::open(d.join("score/mentions.tsv")).unwrap()).unwrap();
    let mut names: BTreeMap<&str, usize> = BTreeMap::new();
    for m in &mentions {
        *names.entry(m.entity.as_str()).or_default() += m.mentions;
    }
    let mut ranked: Vec<_> = names.into_iter().collect();
    ranked.sort_by(|a, b| b.1.cmp(&a.1).then(a.0.cmp(b.0)));
    let (a, b) = (ranked[0].0, ranked[1].0);
    affectframe(
        d,
        &["--out-dir", "pair", "analyze", "pair", "--scores", "score", "--a", a, "--b", b, "--dimension", "power", "--min-mentions", "1"],
    )
    .ok();
    let expected = pairwise_compare(&contributions, &mentions, a, b, EntityDimension::Power, 1).unwrap();
    let written: serde_json::Value = serde_json::from_str(&read(d.join("pair/pair.json"))).unwrap();
    assert_eq!(written, serde_json::to_value(&expected).unwrap());

    // unknown entity in pair is an input error
    let run = affectframe(d, &["analyze", "pair", "--scores", "score", "--a", a, "--b", "Nobody Atall"]);
    assert_eq!(run.code, 2);
}

#[test]
fn majority_baseline_line_matches_hand_counts() {
    let dir = tempdir().unwrap();
    let d = dir.path();
    // test holds 4 power_agent, 2 power_theme and 1 power_equal
    let mut csv = String::from("verb,power,agency\n");
    let labels = ["power_agent", "power_agent", "power_agent", "power_theme", "power_agent", "power_agent", "power_agent", "power_agent", "power_theme", "power_theme", "power_equal"];
    for (i, l) in labels.iter().enumerate() {
        csv.push_str(&format!("v{i},{l},agency_pos\n"));
    }
    fs::write(d.join("pa.csv"), csv).unwrap();
    fs::create_dir_all(d.join("splits/power")).unwrap();
    fs::write(d.join("splits/power/train.txt"), "v0\nv1\nv2\n").unwrap();
    fs::write(d.join("splits/power/dev.txt"), "v3\n").unwrap();
    fs::write(d.join("splits/power/test.txt"), "v4\nv5\nv6\nv7\nv8\nv9\nv10\n").unwrap();
    let run = affectframe(
        d,
        &["--out-dir", "e", "eval", "lexicon", "--power-agency", "pa.csv", "--dimension", "power", "--splits", "splits", "--majority"],
    );
    run_ok(&run);
    // every label occurs in test, so macro-F1 averages over three classes
    let a: f64 = 4.0 / 7.0;
    let f1 = 100.0 * (2.0 * a / (1.0 + a)) / 3.0;
    let want = format!("power majority accuracy {:.2} macro-F1 {f1:.2} (n=7)", 100.0 * a);
    assert!(run.stdout.contains(&want), "want {want}\n{}\n{}", run.stdout, run.stderr);
}

#[test]
fn separable_lexicon_evaluates_perfectly() {
    let dir = tempdir().unwrap();
    let d = dir.path();
    let world = SynthWorld::generate(&SynthConfig {
        seed: 11,
        verbs: 45,
        documents: 30,
        // wide enough for the label prototypes to be linearly independent
        embedding_dim: 32,
        verb_noise: 0.0,
        context_noise: 0.0,
        power_mix: [0.34, 0.33, 0.33],
        ..SynthConfig::default()
    });
    let mut buf = Vec::new();
    write_corpus(&world.corpus, &mut buf).unwrap();
    fs::write(d.join("corpus.jsonl"), buf).unwrap();
    fs::write(d.join("pa.csv"), world.power_agency_csv()).unwrap();
    affectframe(
        d,
        &["--out-dir", "t", "train", "--corpus", "corpus.jsonl", "--power-agency", "pa.csv", "--dimension", "power", "--l2", "0.01", "--class-weights", "1"],
    )
    .ok();
    let run = affectframe(
        d,
        &["--out-dir", "e", "eval", "lexicon", "--power-agency", "pa.csv", "--dimension", "power", "--corpus", "corpus.jsonl", "--models", "t/models"],
    );
    assert!(run.code <= 1, "{}", run.stderr);
    for level in ["type-level", "token-level"] {
        let line = run.stdout.lines().find(|l| l.contains(level)).unwrap_or_else(|| panic!("{}", run.stdout));
        assert!(line.contains("accuracy 100.00 macro-F1 100.00"), "{line}");
    }
}

#[test]
fn entity_eval_matches_a_direct_computation() {
    let dir = tempdir().unwrap();
    let d = dir.path();
    scored(d);
    let contributions = read_contributions(fs::File::open(d.join("score/contributions.tsv")).unwrap()).unwrap();
    let means = build_profiles(&contributions, &SliceDescriptor::all()).means(EntityDimension::Power);
    let rankings = planted_rankings(&means, 3, 2, 0.0, 10, 1);
    let mut tsv = String::from("annotator\tstep\tentity\trank\n");
    for r in &rankings {
        tsv.push_str(&format!("{}\t{}\t{}\t{}\n", r.annotator, r.step, r.entity, r.rank));
    }
    fs::write(d.join("rankings.tsv"), tsv).unwrap();
    let run = affectframe(d, &["--out-dir", "ent", "eval", "entity", "--rankings", "rankings.tsv", "--model-scores", "score"]);
    assert!(run.code <= 1, "{}", run.stderr);

    let agreed = agreed_ranks(&load_rankings(d.join("rankings.tsv"), 10).unwrap(), Some(2.0));
    let judgments = build_judgments(&agreed, None);
    let scores: StepScores = (1..=3).map(|s| (s, means.clone())).collect();
    let acc = pairwise_power_accuracy(&scores, &judgments.judgments).unwrap();
    assert_eq!(acc.correct, acc.total);
    let want = format!("model accuracy {:.2} ({}/{})", 100.0 * acc.accuracy, acc.correct, acc.total);
    assert!(run.stdout.contains(&want), "want {want}\n{}", run.stdout);
    assert!(run.stdout.contains("frequency accuracy"), "{}", run.stdout);
}

#[test]
fn config_file_supplies_defaults_and_flags_override_it() {
    let dir = tempdir().unwrap();
    let d = dir.path();
    fs::write(d.join("af.toml"), format!("seed = 4\n[paths]\ncorpus = {:?}\n", fixture_str("empty.jsonl"))).unwrap();

    let run = affectframe_env(d, &["--out-dir", "a", "ingest"], &[("AFFECTFRAME_CONFIG", "af.toml")]).ok();
    assert!(run.stdout.contains("documents: 0"), "{}", run.stdout);

    let push = fixture_str("push.jsonl");
    let run = affectframe(d, &["--config", "af.toml", "--out-dir", "b", "ingest", "--corpus", &push]).ok();
    assert!(run.stdout.contains("documents: 2"), "{}", run.stdout);
    let logged = read(d.join("b/config.toml"));
    assert!(logged.contains("push.jsonl") && logged.contains("seed = 4"), "{logged}");

    // the logged config reproduces the run
    let run = affectframe(d, &["--config", "b/config.toml", "--out-dir", "c", "ingest"]).ok();
    assert!(run.stdout.contains("documents: 2"), "{}", run.stdout);
    assert_eq!(read(d.join("b/corpus.jsonl")), read(d.join("c/corpus.jsonl")));
    assert_eq!(read(d.join("b/config.toml")), read(d.join("c/config.toml")));
}

#[test]
fn unknown_config_key_exits_2() {
    let dir = tempdir().unwrap();
    fs::write(dir.path().join("bad.toml"), "[analysis]\ntop_kk = 3\n").unwrap();
    let run = affectframe(dir.path(), &["--config", "bad.toml", "ingest", "--corpus", &fixture_str("push.jsonl")]);
    assert_eq!(run.code, 2);
    assert!(run.stderr.contains("top_kk"), "{}", run.stderr);
}

#[test]
fn thread_count_does_not_change_outputs() {
    let one = tempdir().unwrap();
    let three = tempdir().unwrap();
    pipeline(one.path(), "9", "1");
    pipeline(three.path(), "9", "3");
    let strip = |t: Vec<(String, Vec<u8>)>| -> Vec<(String, Vec<u8>)> {
        t.into_iter().filter(|(p, _)| !p.ends_with("manifest.json") && !p.ends_with("config.toml")).collect()
    };
    let (a, b) = (strip(tree(one.path())), strip(tree(three.path())));
    assert_eq!(a.len(), b.len());
    for ((pa, ba), (pb, bb)) in a.iter().zip(&b) {
        assert_eq!(pa, pb);
        assert!(ba == bb, "{pa} differs between thread counts");
    }
}
