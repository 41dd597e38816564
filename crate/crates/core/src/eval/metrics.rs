use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::label::Label;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClassMetrics {
    pub label: Label,
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
    /// Gold occurrences.
    pub support: usize,
    pub predicted: usize,
    /// False when the label occurs in neither gold nor predictions.
    pub in_macro: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClassificationReport {
    pub accuracy: f64,
    pub macro_f1: f64,
    pub per_class: Vec<ClassMetrics>,
    pub total: usize,
}

/// Accuracy plus per-class and macro-averaged F1. A class that appears in
/// gold but is never predicted scores F1 = 0; a class absent from both is
/// left out of the macro average.
pub fn classification_report(gold: &[Label], predicted: &[Label]) -> Result<ClassificationReport> {
    if gold.len() != predicted.len() {
        return Err(Error::LengthMismatch {
            gold: gold.len(),
            predicted: predicted.len(),
        });
    }
    if gold.is_empty() {
        return Err(Error::InsufficientData("no labels to score".into()));
    }
    let mut confusion = [[0usize; 3]; 3];
    for (g, p) in gold.iter().zip(predicted) {
        confusion[g.index()][p.index()] += 1;
    }
    let correct: usize = (0..3).map(|k| confusion[k][k]).sum();

    let mut per_class = Vec::with_capacity(3);
    for label in Label::ALL {
        let k = label.index();
        let tp = confusion[k][k] as f64;
        let support: usize = confusion[k].iter().sum();
        let predicted_k: usize = (0..3).map(|g| confusion[g][k]).sum();
        let precision = if predicted_k > 0 { tp / predicted_k as f64 } else { 0.0 };
        let recall = if support > 0 { tp / support as f64 } else { 0.0 };
        let f1 = if precision + recall > 0.0 {
            2.0 * precision * recall / (precision + recall)
        } else {
            0.0
        };
        per_class.push(ClassMetrics {
            label,
            precision,
            recall,
            f1,
            support,
            predicted: predicted_k,
            in_macro: support + predicted_k > 0,
        });
    }
    let included: Vec<f64> = per_class.iter().filter(|c| c.in_macro).map(|c| c.f1).collect();
    let macro_f1 = included.iter().sum::<f64>() / included.len() as f64;
    Ok(ClassificationReport {
        accuracy: correct as f64 / gold.len() as f64,
        macro_f1,
        per_class,
        total: gold.len(),
    })
}

/// Most frequent label, lower label on ties.
pub fn majority_label(labels: &[Label]) -> Option<Label> {
    let mut counts = [0usize; 3];
    for l in labels {
        counts[l.index()] += 1;
    }
    if labels.is_empty() {
        return None;
    }
    let mut best = 0;
    for k in 1..3 {
        if counts[k] > counts[best] {
            best = k;
        }
    }
    Label::from_index(best)
}

/// Predicts the training majority label for every test item.
pub fn majority_baseline(train: &[Label], test: &[Label]) -> Result<ClassificationReport> {
    let label = majority_label(train).ok_or_else(|| Error::InsufficientData("empty training labels".into()))?;
    classification_report(test, &vec![label; test.len()])
}
