//! Entity scoring checked against an independent fold over the corpus.

use std::collections::{BTreeMap, BTreeSet};

use affectframe::corpus::{AnnotatedCorpus, AnnotatedDocument, Pos};
use affectframe::induction::AffectModel;
use affectframe::lexicon::LexiconSet;
use affectframe::scoring::{
    build_profiles, read_contributions, score_corpus, write_contributions, ModelSet, ScoreContribution,
    SliceDescriptor, VerbScorer,
};
use affectframe::synth::{SynthConfig, SynthWorld};
use affectframe::{EntityDimension, FrameDimension, Role};
use chrono::Duration;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn random_world(seed: u64) -> SynthWorld {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    SynthWorld::generate(&SynthConfig {
        seed,
        embedding_dim: 4,
        verbs: rng.random_range(1..12),
        documents: rng.random_range(1..=10),
        sentences_per_document: rng.random_range(1..5),
        entities: rng.random_range(1..=8),
        outlets: rng.random_range(1..4),
        ..SynthConfig::default()
    })
}

fn random_models(seed: u64, dim: usize) -> ModelSet {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed);
    FrameDimension::ALL
        .into_iter()
        .map(|d| {
            let rows = (0..3).map(|_| (0..=dim).map(|_| rng.random_range(-2.0..2.0)).collect()).collect();
            AffectModel::from_weights(d, rows).unwrap()
        })
        .collect()
}

fn random_slice(rng: &mut ChaCha8Rng, corpus: &AnnotatedCorpus) -> SliceDescriptor {
    let mut slice = SliceDescriptor::all();
    if rng.random_bool(0.5) {
        let outlets: BTreeSet<String> = corpus.documents.iter().map(|d| d.outlet.clone()).collect();
        slice.outlets = Some(outlets.into_iter().filter(|_| rng.random_bool(0.6)).collect());
    }
    if rng.random_bool(0.5) && !corpus.is_empty() {
        let d = &corpus.documents[rng.random_range(0..corpus.len())];
        slice.from = Some(d.timestamp);
        slice.until = Some(d.timestamp + Duration::hours(rng.random_range(0..60)));
    }
    if rng.random_bool(0.5) {
        slice.documents = Some(corpus.documents.iter().filter(|_| rng.random_bool(0.5)).map(|d| d.id.clone()).collect());
    }
    slice
}

/// Brute force over every (verb, dependent) pair, written without the
/// library's pair extraction.
fn oracle(corpus: &AnnotatedCorpus, models: &ModelSet, slice: &SliceDescriptor) -> BTreeMap<(String, EntityDimension), (i64, usize)> {
    let mut acc: BTreeMap<(String, EntityDimension), (i64, usize)> = BTreeMap::new();
    for doc in &corpus.documents {
        if !slice.matches_document(&doc.id, &doc.outlet, doc.timestamp) {
            continue;
        }
        for (vi, verb) in doc.verbs.iter().enumerate() {
            let sentence = &doc.sentences[verb.sentence];
            let mut seen = BTreeSet::new();
            for edge in sentence.edges.iter().filter(|e| e.head == verb.token) {
                let role = match edge.relation.as_str() {
                    "nsubj" => Role::Agent,
                    "dobj" | "obj" | "nsubjpass" | "nsubj:pass" => Role::Theme,
                    _ => continue,
                };
                let Some((mi, mention)) = smallest_mention(doc, verb.sentence, edge.dependent) else {
                    continue;
                };
                if is_unchained_pronoun(doc, mi) {
                    continue;
                }
                if !seen.insert((mi, role)) {
                    continue;
                }
                let e = verb.embedding.as_ref().unwrap();
                let label = |d: FrameDimension| i64::from(models.get(d).unwrap().predict(e).unwrap().label.value());
                let cells: Vec<(EntityDimension, i64)> = match role {
                    Role::Agent => vec![
                        (EntityDimension::Sentiment, label(FrameDimension::SentimentAgent)),
                        (EntityDimension::Power, label(FrameDimension::Power)),
                        (EntityDimension::Agency, label(FrameDimension::Agency)),
                    ],
                    Role::Theme => vec![
                        (EntityDimension::Sentiment, label(FrameDimension::SentimentTheme)),
                        (EntityDimension::Power, -label(FrameDimension::Power)),
                    ],
                };
                let _ = vi;
                for (d, v) in cells {
                    let cell = acc.entry((mention.to_string(), d)).or_insert((0, 0));
                    cell.0 += v;
                    cell.1 += 1;
                }
            }
        }
    }
    acc
}

fn smallest_mention(doc: &AnnotatedDocument, sentence: usize, token: usize) -> Option<(usize, &str)> {
    let mut best: Option<(usize, usize)> = None;
    for (i, m) in doc.mentions.iter().enumerate() {
        if m.sentence == sentence && m.start <= token && token < m.end {
            let len = m.end - m.start;
            if best.is_none_or(|(_, l)| len < l) {
                best = Some((i, len));
            }
        }
    }
    best.map(|(i, _)| (i, doc.mentions[i].canonical_name.as_str()))
}

fn is_unchained_pronoun(doc: &AnnotatedDocument, mention: usize) -> bool {
    let m = &doc.mentions[mention];
    let s = &doc.sentences[m.sentence];
    // single-token mentions only carry pronouns in the generated corpora
    m.chain_id.is_none() && (m.start..m.end).any(|t| s.tokens[t].pos == Pos::Pron)
}

#[test]
fn profiles_equal_a_brute_force_fold() {
    for seed in 0..100 {
        let world = random_world(seed);
        let models = random_models(seed, 4);
        let out = score_corpus(&world.corpus, VerbScorer::Models(&models)).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed + 1000);
        for _ in 0..3 {
            let slice = random_slice(&mut rng, &world.corpus);
            let profiles = build_profiles(&out.contributions, &slice);
            let want = oracle(&world.corpus, &models, &slice);
            let mut got = BTreeMap::new();
            for p in &profiles.profiles {
                for (d, s) in &p.scores {
                    got.insert((p.entity.clone(), *d), (s.sum, s.count));
                    assert_eq!(s.mean, s.sum as f64 / s.count as f64);
                    assert!((-1.0..=1.0).contains(&s.mean));
                }
            }
            assert_eq!(got, want, "seed {seed}, slice {slice:?}");
        }
    }
}

#[test]
fn agent_and_theme_power_are_opposite_for_every_verb() {
    let mut checked = 0;
    for seed in 0..100 {
        let world = random_world(seed);
        let models = random_models(seed, 4);
        let out = score_corpus(&world.corpus, VerbScorer::Models(&models)).unwrap();
        let mut by_verb: BTreeMap<(&str, usize, usize), (BTreeSet<i8>, BTreeSet<i8>)> = BTreeMap::new();
        for c in out.contributions.iter().filter(|c| c.dimension == EntityDimension::Power) {
            let p = &c.provenance;
            let slot = by_verb.entry((p.document.as_str(), p.sentence, p.token)).or_default();
            match p.role {
                Role::Agent => slot.0.insert(c.value),
                Role::Theme => slot.1.insert(c.value),
            };
        }
        for (agent, theme) in by_verb.values() {
            if agent.is_empty() || theme.is_empty() {
                continue;
            }
            assert_eq!(agent.len(), 1);
            assert_eq!(theme.len(), 1);
            assert_eq!(*agent.first().unwrap(), -*theme.first().unwrap());
            checked += 1;
        }
    }
    assert!(checked > 100, "only {checked} transitive verbs");
}

#[test]
fn document_order_does_not_matter() {
    for seed in 0..20 {
        let world = random_world(seed);
        let models = random_models(seed, 4);
        let a = score_corpus(&world.corpus, VerbScorer::Models(&models)).unwrap();
        let mut shuffled = world.corpus.clone();
        shuffled.documents.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
        let b = score_corpus(&shuffled, VerbScorer::Models(&models)).unwrap();
        assert_eq!(a.contributions, b.contributions);
    }
}

#[test]
fn profiles_rebuild_from_the_log_bit_for_bit() {
    for seed in 0..20 {
        let world = random_world(seed);
        let models = random_models(seed, 4);
        let out = score_corpus(&world.corpus, VerbScorer::Models(&models)).unwrap();
        let mut log = Vec::new();
        write_contributions(&out.contributions, &mut log).unwrap();
        let back: Vec<ScoreContribution> = read_contributions(log.as_slice()).unwrap();
        assert_eq!(back, out.contributions);
        let slice = SliceDescriptor::all();
        let a = serde_json::to_string(&build_profiles(&out.contributions, &slice)).unwrap();
        let b = serde_json::to_string(&build_profiles(&back, &slice)).unwrap();
        assert_eq!(a, b);
    }
}

#[test]
fn intransitive_verbs_still_score_their_subject() {
    let world = random_world(3);
    let models = random_models(3, 4);
    let out = score_corpus(&world.corpus, VerbScorer::Models(&models)).unwrap();
    let lone_agents = out
        .contributions
        .iter()
        .filter(|c| c.dimension == EntityDimension::Power && c.provenance.role == Role::Agent)
        .filter(|c| {
            !out.contributions.iter().any(|o| {
                o.provenance.role == Role::Theme
                    && (o.provenance.document.as_str(), o.provenance.sentence, o.provenance.token)
                        == (c.provenance.document.as_str(), c.provenance.sentence, c.provenance.token)
            })
        })
        .count();
    assert!(lone_agents > 0);
}

#[test]
fn lexicon_scoring_only_uses_listed_verbs() {
    let world = random_world(8);
    let mut lexicons: LexiconSet = world.lexicons(0);
    let power = lexicons.lexicons.remove(&FrameDimension::Power).unwrap();
    let mut only_power = LexiconSet::default();
    only_power.lexicons.insert(FrameDimension::Power, power);
    let out = score_corpus(&world.corpus, VerbScorer::Lexicons(&only_power)).unwrap();
    assert!(out.contributions.iter().all(|c| c.dimension == EntityDimension::Power));
    let empty = score_corpus(&world.corpus, VerbScorer::Lexicons(&LexiconSet::default())).unwrap();
    assert!(empty.contributions.is_empty());
}
