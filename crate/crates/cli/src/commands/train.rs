use std::collections::BTreeMap;

use affectframe::induction::{decontextualize_corpus, train, HyperGrid, LabeledSet, TrainConfig};
use affectframe::lexicon::{split_lexicon, LemmaTable, LexiconEntry, SplitPolicy};
use affectframe::FrameDimension;
use anyhow::{bail, Context};
use serde::Serialize;

use crate::args::TrainArgs;
use crate::config::{check_inputs, require, set, RunConfig};
use crate::run::RunDir;

#[derive(Debug, Serialize)]
struct DimensionReport {
    train: usize,
    dev: usize,
    test: usize,
    /// Split verbs with no embedded occurrence in the corpus.
    skipped: usize,
    dev_macro_f1: f64,
    class_weights: [f64; 3],
    l2: f64,
    iterations: usize,
    converged: bool,
}

pub fn split_policy(config: &RunConfig, dimension: FrameDimension) -> SplitPolicy {
    match &config.paths.splits {
        Some(dir) => SplitPolicy::provided_in(dir.join(dimension.as_str())),
        None => SplitPolicy::EqualThirds,
    }
}

pub fn merge(args: &TrainArgs, config: &mut RunConfig) {
    set(&mut config.paths.corpus, args.corpus.clone());
    super::merge_lexicon_args(&args.lexicons, config);
    set(&mut config.paths.splits, args.splits.clone());
    set(&mut config.train.class_weights, args.class_weights.clone());
    set(&mut config.train.l2, args.l2.clone());
    set(&mut config.train.tolerance, args.tolerance);
    set(&mut config.train.max_iterations, args.max_iterations);
}

pub fn train_config(config: &RunConfig) -> TrainConfig {
    let defaults = TrainConfig::default();
    TrainConfig {
        grid: HyperGrid {
            class_weight_values: config.train.class_weights.clone().unwrap_or(defaults.grid.class_weight_values),
            l2_values: config.train.l2.clone().unwrap_or(defaults.grid.l2_values),
        },
        tolerance: config.train.tolerance.unwrap_or(defaults.tolerance),
        max_iterations: config.train.max_iterations.unwrap_or(defaults.max_iterations),
        seed: config.seed(),
    }
}

fn lemma_list(entries: &[LexiconEntry]) -> String {
    entries.iter().map(|e| format!("{}\n", e.lemma)).collect()
}

pub fn run(args: &TrainArgs, config: &mut RunConfig) -> anyhow::Result<RunDir> {
    merge(args, config);
    let corpus_path = require(&config.paths.corpus, "corpus", "--corpus")?;
    let lexicons = super::lexicon_paths(config);
    if lexicons.is_empty() {
        bail!("no lexicon given (use --power-agency and/or --sentiment)");
    }
    check_inputs([corpus_path].into_iter().chain(lexicons).chain(config.paths.splits.as_deref()))?;

    let corpus = super::load_corpus_from(config)?;
    let lexicons = super::load_lexicon_set(config, &LemmaTable::from_corpus(&corpus))?;
    let dimensions: Vec<FrameDimension> = if args.dimensions.is_empty() {
        lexicons.lexicons.keys().copied().collect()
    } else {
        args.dimensions.clone()
    };
    let features = decontextualize_corpus(&corpus)?;
    let settings = train_config(config);

    let mut out = RunDir::create(config.out_dir())?;
    for w in &lexicons.warnings {
        out.warn(w.clone());
    }
    let mut report = BTreeMap::new();
    for d in dimensions {
        let Some(lexicon) = lexicons.get(d) else {
            bail!("no lexicon provides the {d} dimension");
        };
        let split = split_lexicon(lexicon, config.seed(), &split_policy(config, d))?;
        for w in &split.warnings {
            out.warn(w.clone());
        }
        let (train_set, skipped_train) = LabeledSet::type_level(&split.train, &features);
        let (dev_set, skipped_dev) = LabeledSet::type_level(&split.dev, &features);
        let (_, skipped_test) = LabeledSet::type_level(&split.test, &features);
        let skipped = skipped_train.len() + skipped_dev.len() + skipped_test.len();
        if skipped > 0 {
            out.warn(format!("{d}: {skipped} lexicon verbs do not occur in the corpus"));
        }
        let model = train(d, &train_set, &dev_set, &settings).with_context(|| format!("training {d}"))?;
        let meta = model.metadata.as_ref().expect("train records metadata");
        if !meta.converged {
            out.warn(format!("{d}: selected fit stopped at gradient norm {:.3e}", meta.gradient_norm));
        }
        for (name, part) in [("train", &split.train), ("dev", &split.dev), ("test", &split.test)] {
            out.write(&format!("splits/{d}/{name}.txt"), lemma_list(part).as_bytes())?;
        }
        out.write_json(&format!("models/{d}.json"), &model)?;
        out.say(format!(
            "{d}: train {} dev {} dev macro-F1 {:.4} (class weights {:?}, l2 {})",
            train_set.len(),
            dev_set.len(),
            meta.dev_macro_f1,
            model.class_weights.as_array(),
            model.l2
        ));
        report.insert(
            d,
            DimensionReport {
                train: train_set.len(),
                dev: dev_set.len(),
                test: split.test.len() - skipped_test.len(),
                skipped,
                dev_macro_f1: meta.dev_macro_f1,
                class_weights: model.class_weights.as_array(),
                l2: model.l2,
                iterations: meta.iterations,
                converged: meta.converged,
            },
        );
    }
    out.write_json("train.json", &report)?;
    Ok(out)
}
