//! Shared fixtures for the benchmarks.

use affectframe::corpus::AnnotatedCorpus;
use affectframe::induction::{decontextualize_corpus, AffectModel, HyperGrid, LabeledSet, TrainConfig};
use affectframe::lexicon::{split_lexicon, SplitPolicy};
use affectframe::scoring::ModelSet;
use affectframe::synth::{SynthConfig, SynthWorld};
use affectframe::FrameDimension;

/// A synthetic world with `documents` articles over `verbs` verbs.
pub fn world(documents: usize, verbs: usize, embedding_dim: usize) -> SynthWorld {
    SynthWorld::generate(&SynthConfig {
        seed: 1,
        documents,
        verbs,
        embedding_dim,
        entities: 12,
        ..SynthConfig::default()
    })
}

/// The corpus followed by a copy of every document with a later timestamp,
/// so half the articles are exact duplicates.
pub fn with_reposts(corpus: &AnnotatedCorpus) -> AnnotatedCorpus {
    let mut out = corpus.clone();
    for doc in &corpus.documents {
        let mut copy = doc.clone();
        copy.id.push_str("-repost");
        copy.timestamp += chrono::Duration::hours(1);
        out.documents.push(copy);
    }
    out
}

/// Type-level train and dev sets for one dimension.
pub fn labeled_sets(world: &SynthWorld, dimension: FrameDimension) -> (LabeledSet, LabeledSet) {
    let lexicons = world.lexicons(0);
    let split = split_lexicon(lexicons.get(dimension).expect("lexicon"), 0, &SplitPolicy::EqualThirds).expect("split");
    let features = decontextualize_corpus(&world.corpus).expect("features");
    let (train, _) = LabeledSet::type_level(&split.train, &features);
    let (dev, _) = LabeledSet::type_level(&split.dev, &features);
    (train, dev)
}

/// One grid point, so a benchmark iteration measures a single fit.
pub fn single_point_config() -> TrainConfig {
    TrainConfig {
        grid: HyperGrid {
            class_weight_values: vec![1.0],
            l2_values: vec![1.0],
        },
        ..TrainConfig::default()
    }
}

/// Models for every verb dimension, trained on `world`.
pub fn trained_models(world: &SynthWorld) -> ModelSet {
    FrameDimension::ALL
        .into_iter()
        .map(|d| {
            let (train, dev) = labeled_sets(world, d);
            affectframe::induction::train(d, &train, &dev, &single_point_config()).expect("train")
        })
        .collect::<Vec<AffectModel>>()
        .into_iter()
        .collect()
}
