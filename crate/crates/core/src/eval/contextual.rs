//! Evaluation against per-sentence annotations.
//!
//! Each annotated verb comes with several short sentences, each scored by a
//! handful of annotators. Averaging within a sentence rather than across all
//! of a verb's sentences gives one gold label per context.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::corpus::AnnotatedCorpus;
use crate::error::{Error, Result};
use crate::eval::agreement::{krippendorff_alpha, DistanceMetric};
use crate::eval::metrics::{classification_report, ClassificationReport};
use crate::induction::{DecontextualizedFeature, LabeledSet};
use crate::induction::AffectModel;
use crate::label::Label;
use crate::lexicon::{ternarize, SentenceAnnotation};

/// Lowercased words with ASCII punctuation removed, joined by single spaces.
/// Used to match annotated sentences against corpus sentences.
pub fn normalize_sentence(text: &str) -> String {
    text.split_whitespace()
        .map(|w| {
            w.chars()
                .filter(|c| !c.is_ascii_punctuation())
                .flat_map(char::to_lowercase)
                .collect::<String>()
        })
        .filter(|w| !w.is_empty())
        .collect::<Vec<_>>()
        .join(" ")
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ContextualGold {
    pub lemma: String,
    /// Normalized sentence text.
    pub sentence: String,
    pub mean: f64,
    pub annotations: usize,
    pub label: Label,
}

/// Scores grouped by (lemma, normalized sentence); rows repeating a pair are
/// merged.
fn group_by_sentence<'a>(
    annotations: &'a [SentenceAnnotation],
    lemmas: Option<&BTreeSet<String>>,
) -> BTreeMap<(&'a str, String), Vec<f64>> {
    let mut grouped: BTreeMap<(&str, String), Vec<f64>> = BTreeMap::new();
    for a in annotations {
        if lemmas.is_some_and(|keep| !keep.contains(&a.lemma)) {
            continue;
        }
        grouped
            .entry((a.lemma.as_str(), normalize_sentence(&a.sentence)))
            .or_default()
            .extend_from_slice(&a.scores);
    }
    grouped
}

/// One gold item per (verb, sentence) for the verbs in `lemmas`.
pub fn contextual_eval_split(
    annotations: &[SentenceAnnotation],
    lemmas: &BTreeSet<String>,
) -> Result<Vec<ContextualGold>> {
    group_by_sentence(annotations, Some(lemmas))
        .into_iter()
        .map(|((lemma, sentence), scores)| {
            let mean = scores.iter().sum::<f64>() / scores.len() as f64;
            Ok(ContextualGold {
                lemma: lemma.to_string(),
                sentence,
                mean,
                annotations: scores.len(),
                label: ternarize(mean)?,
            })
        })
        .collect()
}

/// Agreement units: one per verb when `pooled`, otherwise one per sentence.
pub fn agreement_units(
    annotations: &[SentenceAnnotation],
    lemmas: Option<&BTreeSet<String>>,
    pooled: bool,
) -> Vec<Vec<f64>> {
    let grouped = group_by_sentence(annotations, lemmas);
    if !pooled {
        return grouped.into_values().collect();
    }
    let mut by_verb: BTreeMap<&str, Vec<f64>> = BTreeMap::new();
    for ((lemma, _), scores) in grouped {
        by_verb.entry(lemma).or_default().extend(scores);
    }
    by_verb.into_values().collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AgreementComparison {
    pub pooled: f64,
    pub per_sentence: f64,
    pub pooled_units: usize,
    pub sentence_units: usize,
}

pub fn compare_agreement(
    annotations: &[SentenceAnnotation],
    lemmas: Option<&BTreeSet<String>>,
    metric: DistanceMetric,
) -> Result<AgreementComparison> {
    let pooled = agreement_units(annotations, lemmas, true);
    let per_sentence = agreement_units(annotations, lemmas, false);
    Ok(AgreementComparison {
        pooled: krippendorff_alpha(&pooled, metric)?,
        per_sentence: krippendorff_alpha(&per_sentence, metric)?,
        pooled_units: pooled.len(),
        sentence_units: per_sentence.len(),
    })
}

/// Contextual embedding of each (lemma, normalized sentence) found in a
/// corpus; the first occurrence wins.
pub fn sentence_embeddings(corpus: &AnnotatedCorpus) -> BTreeMap<(String, String), Vec<f64>> {
    let mut out = BTreeMap::new();
    for doc in &corpus.documents {
        for v in &doc.verbs {
            let (Some(e), Some(s)) = (&v.embedding, doc.sentences.get(v.sentence)) else {
                continue;
            };
            out.entry((v.lemma.clone(), normalize_sentence(&s.text())))
                .or_insert_with(|| e.clone());
        }
    }
    out
}

/// Training rows built from per-sentence gold items, skipping contexts that
/// have no embedding.
pub fn sentence_training_set(gold: &[ContextualGold], contexts: &BTreeMap<(String, String), Vec<f64>>) -> LabeledSet {
    let mut set = LabeledSet::default();
    for g in gold {
        if let Some(e) = contexts.get(&(g.lemma.clone(), g.sentence.clone())) {
            set.push(format!("{} | {}", g.lemma, g.sentence), e.clone(), g.label);
        }
    }
    set
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ContextualReport {
    /// One prediction per verb from its mean embedding, copied to each of
    /// its sentences.
    pub verb_level: ClassificationReport,
    /// One prediction per sentence from that sentence's embedding.
    pub sentence_level: ClassificationReport,
    /// As `sentence_level`, using a model trained on per-sentence labels.
    pub sentence_trained: Option<ClassificationReport>,
    pub evaluated: usize,
    /// `lemma | sentence` for gold items lacking an embedding or a verb-level
    /// feature.
    pub skipped: Vec<String>,
}

pub fn evaluate_contextual(
    model: &AffectModel,
    gold: &[ContextualGold],
    contexts: &BTreeMap<(String, String), Vec<f64>>,
    type_features: &BTreeMap<String, DecontextualizedFeature>,
    sentence_model: Option<&AffectModel>,
) -> Result<ContextualReport> {
    let mut gold_labels = Vec::new();
    let mut verb_level = Vec::new();
    let mut sentence_level = Vec::new();
    let mut trained = Vec::new();
    let mut skipped = Vec::new();
    let mut verb_cache: BTreeMap<&str, Label> = BTreeMap::new();
    for g in gold {
        let context = contexts.get(&(g.lemma.clone(), g.sentence.clone()));
        let (Some(context), Some(feature)) = (context, type_features.get(&g.lemma)) else {
            skipped.push(format!("{} | {}", g.lemma, g.sentence));
            continue;
        };
        let verb_label = match verb_cache.get(g.lemma.as_str()) {
            Some(&l) => l,
            None => {
                let l = model.predict(&feature.mean)?.label;
                verb_cache.insert(g.lemma.as_str(), l);
                l
            }
        };
        gold_labels.push(g.label);
        verb_level.push(verb_label);
        sentence_level.push(model.predict(context)?.label);
        if let Some(m) = sentence_model {
            trained.push(m.predict(context)?.label);
        }
    }
    if gold_labels.is_empty() {
        return Err(Error::InsufficientData(
            "no gold sentence matched a corpus sentence with an embedding".into(),
        ));
    }
    Ok(ContextualReport {
        verb_level: classification_report(&gold_labels, &verb_level)?,
        sentence_level: classification_report(&gold_labels, &sentence_level)?,
        sentence_trained: match sentence_model {
            Some(_) => Some(classification_report(&gold_labels, &trained)?),
            None => None,
        },
        evaluated: gold_labels.len(),
        skipped,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ann(lemma: &str, sentence: &str, scores: &[f64]) -> SentenceAnnotation {
        SentenceAnnotation {
            lemma: lemma.into(),
            sentence: sentence.into(),
            scores: scores.to_vec(),
        }
    }

    #[test]
    fn one_gold_item_per_sentence() {
        let a = [
            ann("deserve", "The hero deserves appellation.", &[1.0, 0.5, 1.0]),
            ann("deserve", "The student deserves an opportunity", &[0.0, 0.5, 0.0]),
            ann("deserve", "the boy deserves punishment", &[-1.0, -0.5, -1.0]),
            ann("run", "She runs", &[0.1]),
        ];
        let keep = BTreeSet::from(["deserve".to_string()]);
        let gold = contextual_eval_split(&a, &keep).unwrap();
        assert_eq!(gold.len(), 3);
        let labels: Vec<Label> = gold.iter().map(|g| g.label).collect();
        // sorted by normalized sentence text
        assert_eq!(labels, [Label::Negative, Label::Positive, Label::Neutral]);
        assert_eq!(gold[1].sentence, "the hero deserves appellation");
    }

    #[test]
    fn single_sentence_matches_the_verb_label() {
        let a = [ann("grab", "He grabbed it", &[-0.5, -1.0])];
        let keep = BTreeSet::from(["grab".to_string()]);
        let gold = contextual_eval_split(&a, &keep).unwrap();
        assert_eq!(gold.len(), 1);
        assert_eq!(gold[0].label, ternarize(a[0].mean()).unwrap());
    }

    #[test]
    fn pooling_never_has_more_units() {
        let a = [
            ann("x", "a b", &[1.0, 1.0]),
            ann("x", "c d", &[-1.0, -1.0]),
            ann("y", "e f", &[0.0, 0.5]),
        ];
        assert_eq!(agreement_units(&a, None, true).len(), 2);
        assert_eq!(agreement_units(&a, None, false).len(), 3);
        let cmp = compare_agreement(&a, None, DistanceMetric::Interval).unwrap();
        assert!(cmp.per_sentence > cmp.pooled);
    }

    #[test]
    fn normalization_ignores_case_and_punctuation() {
        assert_eq!(normalize_sentence("  The boy, deserves  punishment! "), "the boy deserves punishment");
    }
}
