//! Seeded synthetic data: corpora with planted verb connotations, matching
//! lexicons, per-sentence annotations, and power rankings.
//!
//! Embeddings are built from one random prototype vector per (dimension,
//! label) pair, so a linear classifier can recover the planted labels from
//! them when the noise is moderate.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use chrono::{DateTime, Duration, TimeZone, Utc};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

use crate::corpus::{
    bag_of_words, AnnotatedCorpus, AnnotatedDocument, CorpusHeader, DependencyEdge, EntityMention, Pos, Sentence,
    Token, VerbInstance,
};
use crate::eval::RankingAnnotation;
use crate::label::{FrameDimension, Label};
use crate::lexicon::{LexiconEntry, LexiconSet, Lexicon, SentenceAnnotation};

const NAMES: [&str; 24] = [
    "Avery Quinn", "Blake Moreno", "Casey Lin", "Dana Okafor", "Ellis Grant", "Finley Shah", "Gray Novak",
    "Harper Diaz", "Indra Cole", "Jordan Reyes", "Kai Larsen", "Logan Petrov", "Morgan Ito", "Noel Abbott",
    "Oakley Brandt", "Parker Sousa", "Quinn Mensah", "Riley Tanaka", "Sage Duval", "Taylor Kim", "Umber Hale",
    "Val Ruiz", "Wren Adler", "Yael Haddad",
];

/// Name for the `k`th synthetic entity.
pub fn entity_name(k: usize) -> String {
    match NAMES.get(k) {
        Some(n) => n.to_string(),
        None => format!("Person {k}"),
    }
}

fn verb_lemma(k: usize) -> String {
    const SYLLABLES: [&str; 16] = [
        "ba", "ce", "di", "fo", "gu", "ha", "ke", "li", "mo", "nu", "pa", "re", "si", "to", "vu", "za",
    ];
    let mut s = String::new();
    let mut n = k;
    loop {
        s.push_str(SYLLABLES[n % 16]);
        n /= 16;
        if n == 0 {
            break;
        }
    }
    s.push('t');
    s
}

#[derive(Debug, Clone, PartialEq)]
pub struct SynthConfig {
    pub seed: u64,
    pub embedding_dim: usize,
    pub verbs: usize,
    pub documents: usize,
    pub sentences_per_document: usize,
    pub entities: usize,
    pub outlets: usize,
    /// Spread of each verb's own offset around its label prototypes.
    pub verb_noise: f64,
    /// Spread of each occurrence around its verb.
    pub context_noise: f64,
    /// Label probabilities (negative, neutral, positive) for power.
    pub power_mix: [f64; 3],
    pub agency_mix: [f64; 3],
    pub sentiment_mix: [f64; 3],
}

impl Default for SynthConfig {
    fn default() -> Self {
        SynthConfig {
            seed: 7,
            embedding_dim: 16,
            verbs: 60,
            documents: 40,
            sentences_per_document: 4,
            entities: 8,
            outlets: 3,
            verb_noise: 0.3,
            context_noise: 0.5,
            power_mix: [0.15, 0.15, 0.7],
            agency_mix: [0.1, 0.1, 0.8],
            sentiment_mix: [0.3, 0.4, 0.3],
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SynthVerb {
    pub lemma: String,
    pub labels: BTreeMap<FrameDimension, Label>,
}

#[derive(Debug, Clone)]
pub struct SynthWorld {
    pub verbs: Vec<SynthVerb>,
    pub corpus: AnnotatedCorpus,
    pub entities: Vec<String>,
}

fn draw_label(rng: &mut ChaCha8Rng, mix: [f64; 3]) -> Label {
    let total: f64 = mix.iter().sum();
    let mut u = rng.random::<f64>() * total;
    for (k, p) in mix.iter().enumerate() {
        if u < *p {
            return Label::from_index(k).expect("k < 3");
        }
        u -= p;
    }
    Label::Positive
}

fn gaussian(rng: &mut ChaCha8Rng, dim: usize, sd: f64) -> Vec<f64> {
    if sd == 0.0 {
        return vec![0.0; dim];
    }
    let normal = Normal::new(0.0, sd).expect("positive sd");
    (0..dim).map(|_| normal.sample(rng)).collect()
}

fn add(a: &mut [f64], b: &[f64]) {
    a.iter_mut().zip(b).for_each(|(x, y)| *x += y);
}

/// Representative value inside a label's raw range.
fn raw_for(label: Label, rng: &mut ChaCha8Rng) -> f64 {
    let r = match label {
        Label::Negative => rng.random_range(-1.0..-0.3),
        Label::Neutral => rng.random_range(-0.2..0.2),
        Label::Positive => rng.random_range(0.3..1.0),
    };
    (r * 1000.0f64).round() / 1000.0
}

fn token(surface: &str, lemma: &str, pos: Pos) -> Token {
    Token {
        index: 0,
        surface: surface.to_string(),
        lemma: lemma.to_string(),
        pos,
    }
}

fn base_time() -> DateTime<Utc> {
    Utc.with_ymd_and_hms(2018, 1, 1, 9, 0, 0).unwrap()
}

/// Appends a name as PROPN tokens (multi-word names are joined by
/// `compound` edges to their last token) and returns the span.
fn push_name(tokens: &mut Vec<Token>, edges: &mut Vec<DependencyEdge>, name: &str) -> (usize, usize) {
    let start = tokens.len();
    for w in name.split(' ') {
        tokens.push(token(w, w, Pos::Propn));
    }
    let end = tokens.len();
    for t in start..end - 1 {
        edges.push(DependencyEdge {
            head: end - 1,
            dependent: t,
            relation: "compound".into(),
        });
    }
    (start, end)
}

impl SynthWorld {
    pub fn generate(config: &SynthConfig) -> SynthWorld {
        let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
        let d = config.embedding_dim;
        let mut prototypes: BTreeMap<(FrameDimension, Label), Vec<f64>> = BTreeMap::new();
        for dim in FrameDimension::ALL {
            for label in Label::ALL {
                prototypes.insert((dim, label), gaussian(&mut rng, d, 1.0));
            }
        }

        let mut verbs = Vec::with_capacity(config.verbs);
        let mut centres = Vec::with_capacity(config.verbs);
        for k in 0..config.verbs {
            let mut labels = BTreeMap::new();
            labels.insert(FrameDimension::Power, draw_label(&mut rng, config.power_mix));
            labels.insert(FrameDimension::Agency, draw_label(&mut rng, config.agency_mix));
            labels.insert(FrameDimension::SentimentAgent, draw_label(&mut rng, config.sentiment_mix));
            labels.insert(FrameDimension::SentimentTheme, draw_label(&mut rng, config.sentiment_mix));
            let mut centre = gaussian(&mut rng, d, config.verb_noise);
            for (dim, label) in &labels {
                add(&mut centre, &prototypes[&(*dim, *label)]);
            }
            verbs.push(SynthVerb {
                lemma: verb_lemma(k),
                labels,
            });
            centres.push(centre);
        }

        let entities: Vec<String> = (0..config.entities).map(entity_name).collect();
        let total_sentences = config.documents * config.sentences_per_document;
        // every verb occurs at least once when there are enough sentences
        let mut verb_order: Vec<usize> = (0..total_sentences).map(|i| i % config.verbs.max(1)).collect();
        verb_order.shuffle(&mut rng);

        let mut documents = Vec::with_capacity(config.documents);
        let mut next = 0;
        for doc_index in 0..config.documents {
            let mut sentences = Vec::new();
            let mut mentions = Vec::new();
            let mut verb_instances = Vec::new();
            for s in 0..config.sentences_per_document {
                let v = verb_order[next];
                next += 1;
                let agent = rng.random_range(0..entities.len());
                let mut theme = rng.random_range(0..entities.len());
                if theme == agent && entities.len() > 1 {
                    theme = (theme + 1) % entities.len();
                }
                let shape = rng.random_range(0..10);
                let lemma = &verbs[v].lemma;
                let mut tokens = Vec::new();
                let mut edges = Vec::new();
                let verb_token;
                match shape {
                    // passive: "<theme> was <verb>ed"
                    0 | 1 => {
                        let (ts, te) = push_name(&mut tokens, &mut edges, &entities[theme]);
                        tokens.push(token("was", "be", Pos::Aux));
                        verb_token = tokens.len();
                        tokens.push(token(&format!("{lemma}ed"), lemma, Pos::Verb));
                        edges.push(DependencyEdge { head: verb_token, dependent: te - 1, relation: "nsubjpass".into() });
                        edges.push(DependencyEdge { head: verb_token, dependent: verb_token - 1, relation: "aux".into() });
                        mentions.push(EntityMention {
                            sentence: s,
                            start: ts,
                            end: te,
                            surface: entities[theme].clone(),
                            chain_id: Some(format!("c{theme}")),
                            canonical_name: entities[theme].clone(),
                        });
                    }
                    // intransitive: "<agent> <verb>ed"
                    2 => {
                        let (as_, ae) = push_name(&mut tokens, &mut edges, &entities[agent]);
                        verb_token = tokens.len();
                        tokens.push(token(&format!("{lemma}ed"), lemma, Pos::Verb));
                        edges.push(DependencyEdge { head: verb_token, dependent: ae - 1, relation: "nsubj".into() });
                        mentions.push(EntityMention {
                            sentence: s,
                            start: as_,
                            end: ae,
                            surface: entities[agent].clone(),
                            chain_id: Some(format!("c{agent}")),
                            canonical_name: entities[agent].clone(),
                        });
                    }
                    // transitive, sometimes with a pronoun object
                    _ => {
                        let (as_, ae) = push_name(&mut tokens, &mut edges, &entities[agent]);
                        verb_token = tokens.len();
                        tokens.push(token(&format!("{lemma}ed"), lemma, Pos::Verb));
                        edges.push(DependencyEdge { head: verb_token, dependent: ae - 1, relation: "nsubj".into() });
                        mentions.push(EntityMention {
                            sentence: s,
                            start: as_,
                            end: ae,
                            surface: entities[agent].clone(),
                            chain_id: Some(format!("c{agent}")),
                            canonical_name: entities[agent].clone(),
                        });
                        let (os, oe, surface, chain) = match shape {
                            3 => {
                                tokens.push(token("them", "they", Pos::Pron));
                                (tokens.len() - 1, tokens.len(), "them".to_string(), Some(format!("c{theme}")))
                            }
                            4 => {
                                // a pronoun the coreference step could not resolve
                                tokens.push(token("it", "it", Pos::Pron));
                                (tokens.len() - 1, tokens.len(), "it".to_string(), None)
                            }
                            _ => {
                                let (os, oe) = push_name(&mut tokens, &mut edges, &entities[theme]);
                                (os, oe, entities[theme].clone(), Some(format!("c{theme}")))
                            }
                        };
                        edges.push(DependencyEdge { head: verb_token, dependent: oe - 1, relation: "dobj".into() });
                        mentions.push(EntityMention {
                            sentence: s,
                            start: os,
                            end: oe,
                            surface,
                            chain_id: chain.clone(),
                            canonical_name: if chain.is_some() { entities[theme].clone() } else { "it".into() },
                        });
                    }
                }
                tokens.push(token(".", ".", Pos::Punct));
                for (i, t) in tokens.iter_mut().enumerate() {
                    t.index = i;
                }
                let mut embedding = centres[v].clone();
                add(&mut embedding, &gaussian(&mut rng, d, config.context_noise));
                verb_instances.push(VerbInstance {
                    sentence: s,
                    token: verb_token,
                    lemma: lemma.clone(),
                    embedding: Some(embedding),
                });
                sentences.push(Sentence { tokens, edges });
            }
            let bag = bag_of_words(&sentences);
            documents.push(AnnotatedDocument {
                id: format!("doc{doc_index:04}"),
                outlet: format!("outlet{}.example", doc_index % config.outlets.max(1)),
                timestamp: base_time() + Duration::hours(7 * doc_index as i64),
                sentences,
                mentions,
                verbs: verb_instances,
                bag_of_words: bag,
            });
        }

        SynthWorld {
            verbs,
            corpus: AnnotatedCorpus {
                header: CorpusHeader::new(d),
                documents,
            },
            entities,
        }
    }

    /// Lexicons holding the planted labels; sentiment entries get a raw
    /// value inside their label's range.
    pub fn lexicons(&self, seed: u64) -> LexiconSet {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut set = LexiconSet::default();
        for dim in FrameDimension::ALL {
            let mut lex = Lexicon::new(dim);
            for v in &self.verbs {
                let label = v.labels[&dim];
                let raw_value = matches!(dim, FrameDimension::SentimentAgent | FrameDimension::SentimentTheme)
                    .then(|| raw_for(label, &mut rng));
                lex.insert(LexiconEntry {
                    lemma: v.lemma.clone(),
                    dimension: dim,
                    label,
                    raw_value,
                });
            }
            set.lexicons.insert(dim, lex);
        }
        set
    }

    /// Comma-separated `verb,power,agency` file.
    pub fn power_agency_csv(&self) -> String {
        let mut out = String::from("verb,power,agency\n");
        for v in &self.verbs {
            let power = match v.labels[&FrameDimension::Power] {
                Label::Positive => "power_agent",
                Label::Neutral => "power_equal",
                Label::Negative => "power_theme",
            };
            let agency = match v.labels[&FrameDimension::Agency] {
                Label::Positive => "agency_pos",
                Label::Neutral => "agency_equal",
                Label::Negative => "agency_neg",
            };
            let _ = writeln!(out, "{},{power},{agency}", v.lemma);
        }
        out
    }

    /// Tab-separated sentiment file with writer-perspective columns.
    pub fn sentiment_tsv(&self, seed: u64) -> String {
        let set = self.lexicons(seed);
        let mut out = String::from("verb\tPerspective(ws)\tPerspective(wo)\n");
        for v in &self.verbs {
            let agent = set.lexicons[&FrameDimension::SentimentAgent].get(&v.lemma).and_then(|e| e.raw_value);
            let theme = set.lexicons[&FrameDimension::SentimentTheme].get(&v.lemma).and_then(|e| e.raw_value);
            let _ = writeln!(out, "{}\t{}\t{}", v.lemma, agent.unwrap_or(0.0), theme.unwrap_or(0.0));
        }
        out
    }
}

/// Per-sentence sentiment annotations together with a corpus holding one
/// embedding per annotated sentence.
#[derive(Debug, Clone)]
pub struct SentimentContexts {
    pub corpus: AnnotatedCorpus,
    pub agent: Vec<SentenceAnnotation>,
    pub theme: Vec<SentenceAnnotation>,
    /// Tab-separated sentiment lexicon: the mean over all of a verb's
    /// annotations per perspective.
    pub lexicon_tsv: String,
    pub lemmas: Vec<String>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ContextConfig {
    pub seed: u64,
    pub embedding_dim: usize,
    pub verbs: usize,
    pub sentences_per_verb: usize,
    pub annotators_per_sentence: usize,
    /// How far a sentence can move a verb's connotation.
    pub context_shift: f64,
    pub annotator_noise: f64,
    pub embedding_noise: f64,
}

impl Default for ContextConfig {
    fn default() -> Self {
        ContextConfig {
            seed: 11,
            embedding_dim: 12,
            verbs: 150,
            sentences_per_verb: 3,
            annotators_per_sentence: 5,
            context_shift: 0.6,
            annotator_noise: 0.35,
            embedding_noise: 0.15,
        }
    }
}

const SUBJECTS: [&str; 8] = ["hero", "student", "boy", "doctor", "teacher", "lawyer", "farmer", "singer"];
const OBJECTS: [&str; 8] = [
    "appellation", "opportunity", "punishment", "reward", "warning", "letter", "award", "fine",
];

fn clamp_unit(x: f64) -> f64 {
    x.clamp(-1.0, 1.0)
}

impl SentimentContexts {
    /// Each verb has a base connotation per perspective; each sentence shifts
    /// it, annotators add noise, and the sentence embedding encodes the
    /// shifted value along one fixed direction per perspective.
    pub fn generate(config: &ContextConfig) -> SentimentContexts {
        let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
        let d = config.embedding_dim;
        let agent_dir = gaussian(&mut rng, d, 1.0);
        let theme_dir = gaussian(&mut rng, d, 1.0);
        let annotator = Normal::new(0.0, config.annotator_noise.max(1e-12)).expect("positive sd");
        let round = |x: f64| (x * 100.0).round() / 100.0;

        let mut documents = Vec::new();
        let mut agent = Vec::new();
        let mut theme = Vec::new();
        let mut lemmas = Vec::new();
        let mut lexicon_tsv = String::from("verb\tPerspective(ws)\tPerspective(wo)\n");
        for k in 0..config.verbs {
            let lemma = verb_lemma(k);
            let base = [rng.random_range(-0.7..0.7), rng.random_range(-0.7..0.7)];
            let mut sentences = Vec::new();
            let mut verb_instances = Vec::new();
            let mut pooled = [Vec::new(), Vec::new()];
            for s in 0..config.sentences_per_verb {
                let subject = SUBJECTS[(k + s) % SUBJECTS.len()];
                let object = OBJECTS[(k * 3 + s * 5) % OBJECTS.len()];
                let words = [
                    ("the", "the", Pos::Det),
                    (subject, subject, Pos::Noun),
                    (&*format!("{lemma}s"), &*lemma, Pos::Verb),
                    ("the", "the", Pos::Det),
                    (object, object, Pos::Noun),
                ];
                let mut tokens: Vec<Token> = words.iter().map(|(w, l, p)| token(w, l, *p)).collect();
                let text = format!("the {subject} {lemma}s the {object} {s}");
                tokens.push(token(&s.to_string(), &s.to_string(), Pos::Num));
                for (i, t) in tokens.iter_mut().enumerate() {
                    t.index = i;
                }
                let edges = vec![
                    DependencyEdge { head: 1, dependent: 0, relation: "det".into() },
                    DependencyEdge { head: 2, dependent: 1, relation: "nsubj".into() },
                    DependencyEdge { head: 4, dependent: 3, relation: "det".into() },
                    DependencyEdge { head: 2, dependent: 4, relation: "dobj".into() },
                    DependencyEdge { head: 4, dependent: 5, relation: "nummod".into() },
                ];
                let shifted = [
                    clamp_unit(base[0] + rng.random_range(-config.context_shift..=config.context_shift)),
                    clamp_unit(base[1] + rng.random_range(-config.context_shift..=config.context_shift)),
                ];
                let mut embedding = gaussian(&mut rng, d, config.embedding_noise);
                for j in 0..d {
                    embedding[j] += shifted[0] * agent_dir[j] + shifted[1] * theme_dir[j];
                }
                for (p, out) in [&mut agent, &mut theme].into_iter().enumerate() {
                    let scores: Vec<f64> = (0..config.annotators_per_sentence)
                        .map(|_| round(clamp_unit(shifted[p] + annotator.sample(&mut rng))))
                        .collect();
                    pooled[p].extend_from_slice(&scores);
                    out.push(SentenceAnnotation {
                        lemma: lemma.clone(),
                        sentence: text.clone(),
                        scores,
                    });
                }
                verb_instances.push(VerbInstance {
                    sentence: s,
                    token: 2,
                    lemma: lemma.clone(),
                    embedding: Some(embedding),
                });
                sentences.push(Sentence { tokens, edges });
            }
            let mean = |v: &[f64]| v.iter().sum::<f64>() / v.len() as f64;
            let _ = writeln!(lexicon_tsv, "{lemma}\t{}\t{}", mean(&pooled[0]), mean(&pooled[1]));
            let bag = bag_of_words(&sentences);
            documents.push(AnnotatedDocument {
                id: format!("ctx{k:04}"),
                outlet: "contexts".into(),
                timestamp: base_time(),
                sentences,
                mentions: Vec::new(),
                verbs: verb_instances,
                bag_of_words: bag,
            });
            lemmas.push(lemma);
        }
        SentimentContexts {
            corpus: AnnotatedCorpus {
                header: CorpusHeader::new(d),
                documents,
            },
            agent,
            theme,
            lexicon_tsv,
            lemmas,
        }
    }

    /// Tab-separated `verb sentence scores` file for one perspective.
    pub fn annotations_tsv(annotations: &[SentenceAnnotation]) -> String {
        let mut out = String::from("verb\tsentence\tscores\n");
        for a in annotations {
            let scores: Vec<String> = a.scores.iter().map(|s| s.to_string()).collect();
            let _ = writeln!(out, "{}\t{}\t{}", a.lemma, a.sentence, scores.join(","));
        }
        out
    }
}

/// Rankings from annotators who see entities with planted power values.
/// Each annotator perturbs the planted value before ranking on a 1..=scale
/// grid.
pub fn planted_rankings(
    planted: &BTreeMap<String, f64>,
    steps: u32,
    annotators: usize,
    noise: f64,
    scale: u8,
    seed: u64,
) -> Vec<RankingAnnotation> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let normal = Normal::new(0.0, noise.max(1e-12)).expect("positive sd");
    let (lo, hi) = planted
        .values()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), &v| (a.min(v), b.max(v)));
    let span = (hi - lo).max(1e-12);
    let mut out = Vec::new();
    for step in 1..=steps {
        for a in 0..annotators {
            for (entity, &value) in planted {
                let seen = (value - lo) / span + if noise > 0.0 { normal.sample(&mut rng) } else { 0.0 };
                let rank = (1.0 + seen.clamp(0.0, 1.0) * f64::from(scale - 1)).round() as u8;
                out.push(RankingAnnotation {
                    annotator: format!("annotator{}", a + 1),
                    step,
                    entity: entity.clone(),
                    rank,
                });
            }
        }
    }
    out
}

/// Entities mentioned at least once, for convenience in tests.
pub fn mentioned_entities(corpus: &AnnotatedCorpus) -> BTreeSet<String> {
    corpus
        .documents
        .iter()
        .flat_map(|d| d.mention_counts().into_keys())
        .collect()
}
