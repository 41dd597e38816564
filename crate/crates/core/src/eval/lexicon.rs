use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::eval::metrics::{classification_report, majority_label, ClassificationReport};
use crate::induction::AffectModel;
use crate::induction::{aggregate_token_majority, aggregate_type};
use crate::label::Label;
use crate::lexicon::LexiconEntry;

/// Held-out lexicon scores for one dimension.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LexiconEvaluation {
    pub majority_label: Label,
    pub majority: ClassificationReport,
    pub type_level: Option<ClassificationReport>,
    pub token_level: Option<ClassificationReport>,
    /// Test verbs scored.
    pub evaluated: usize,
    /// Test verbs with no occurrence in the corpus.
    pub skipped: Vec<String>,
}

/// Scores the training-majority predictor and, when a model is supplied,
/// both aggregation modes. All three are computed over the same test verbs:
/// those with at least one corpus occurrence when `instances` is given,
/// otherwise every test entry.
pub fn evaluate_lexicon(
    train: &[LexiconEntry],
    test: &[LexiconEntry],
    scoring: Option<(&AffectModel, &BTreeMap<&str, Vec<&[f64]>>)>,
) -> Result<LexiconEvaluation> {
    let train_labels: Vec<Label> = train.iter().map(|e| e.label).collect();
    let majority = majority_label(&train_labels).ok_or_else(|| Error::InsufficientData("empty training split".into()))?;

    let mut skipped = Vec::new();
    let mut gold = Vec::new();
    let mut type_pred = Vec::new();
    let mut token_pred = Vec::new();
    for entry in test {
        match scoring {
            None => gold.push(entry.label),
            Some((model, instances)) => match instances.get(entry.lemma.as_str()) {
                Some(es) if !es.is_empty() => {
                    gold.push(entry.label);
                    type_pred.push(aggregate_type(model, es)?);
                    token_pred.push(aggregate_token_majority(model, es)?);
                }
                _ => skipped.push(entry.lemma.clone()),
            },
        }
    }
    if gold.is_empty() {
        return Err(Error::InsufficientData("no test verb occurs in the corpus".into()));
    }
    let majority_report = classification_report(&gold, &vec![majority; gold.len()])?;
    let (type_level, token_level) = match scoring {
        Some(_) => (
            Some(classification_report(&gold, &type_pred)?),
            Some(classification_report(&gold, &token_pred)?),
        ),
        None => (None, None),
    };
    Ok(LexiconEvaluation {
        majority_label: majority,
        majority: majority_report,
        type_level,
        token_level,
        evaluated: gold.len(),
        skipped,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::label::FrameDimension;

    fn entry(lemma: &str, label: Label) -> LexiconEntry {
        LexiconEntry {
            lemma: lemma.into(),
            dimension: FrameDimension::Power,
            label,
            raw_value: None,
        }
    }

    #[test]
    fn majority_only_uses_every_test_entry() {
        let train = [entry("a", Label::Positive), entry("b", Label::Positive), entry("c", Label::Negative)];
        let test = [entry("d", Label::Positive), entry("e", Label::Neutral)];
        let r = evaluate_lexicon(&train, &test, None).unwrap();
        assert_eq!(r.majority_label, Label::Positive);
        assert_eq!(r.majority.accuracy, 0.5);
        assert!(r.type_level.is_none());
    }

    #[test]
    fn verbs_missing_from_the_corpus_are_skipped() {
        let model = AffectModel::from_weights(
            FrameDimension::Power,
            vec![vec![-1.0, 0.0], vec![0.0, 0.0], vec![1.0, 0.0]],
        )
        .unwrap();
        let train = [entry("a", Label::Neutral)];
        let test = [entry("up", Label::Positive), entry("gone", Label::Negative)];
        let v = [2.0];
        let instances = BTreeMap::from([("up", vec![&v[..]])]);
        let r = evaluate_lexicon(&train, &test, Some((&model, &instances))).unwrap();
        assert_eq!(r.skipped, ["gone"]);
        assert_eq!(r.evaluated, 1);
        assert_eq!(r.type_level.unwrap().accuracy, 1.0);
        assert_eq!(r.majority.accuracy, 0.0);
    }
}
