//! Lexicon induction: per-dimension classifiers trained on averaged verb
//! embeddings and applied to individual verb occurrences.

mod model;
pub mod optimizer;

use std::collections::BTreeMap;

use ndarray::Array2;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::corpus::AnnotatedCorpus;
use crate::error::{Error, Result};
use crate::eval::classification_report;
use crate::label::{FrameDimension, Label};
use crate::lexicon::LexiconEntry;

pub use model::{
    AffectModel, ClassWeights, ContextualScore, GridResult, TrainingMetadata, MODEL_FORMAT, MODEL_VERSION,
};
pub use optimizer::{Fit, FitOptions};

/// A verb's embedding averaged over all of its occurrences.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DecontextualizedFeature {
    pub lemma: String,
    pub mean: Vec<f64>,
    pub count: usize,
}

pub fn decontextualize(lemma: &str, embeddings: &[&[f64]]) -> Result<DecontextualizedFeature> {
    let first = embeddings.first().ok_or_else(|| Error::EmptyFeature(lemma.to_string()))?;
    let dim = first.len();
    let mut mean = vec![0.0; dim];
    for (k, e) in embeddings.iter().enumerate() {
        if e.len() != dim {
            return Err(Error::FeatureDimension {
                expected: dim,
                found: e.len(),
            });
        }
        // running mean
        let inv = 1.0 / (k + 1) as f64;
        for (m, &x) in mean.iter_mut().zip(e.iter()) {
            *m += (x - *m) * inv;
        }
    }
    Ok(DecontextualizedFeature {
        lemma: lemma.to_string(),
        mean,
        count: embeddings.len(),
    })
}

/// One feature per verb lemma with at least one embedded occurrence.
pub fn decontextualize_corpus(corpus: &AnnotatedCorpus) -> Result<BTreeMap<String, DecontextualizedFeature>> {
    corpus
        .embeddings_by_lemma()
        .into_iter()
        .map(|(lemma, es)| Ok((lemma.to_string(), decontextualize(lemma, &es)?)))
        .collect()
}

/// Feature rows with labels, in insertion order.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct LabeledSet {
    pub names: Vec<String>,
    pub features: Vec<Vec<f64>>,
    pub labels: Vec<Label>,
}

impl LabeledSet {
    pub fn push(&mut self, name: impl Into<String>, features: Vec<f64>, label: Label) {
        self.names.push(name.into());
        self.features.push(features);
        self.labels.push(label);
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    /// Type-level set: one row per lexicon entry whose verb occurs in the
    /// corpus. Entries without a feature are returned as the skip list.
    pub fn type_level(
        entries: &[LexiconEntry],
        features: &BTreeMap<String, DecontextualizedFeature>,
    ) -> (LabeledSet, Vec<String>) {
        let mut set = LabeledSet::default();
        let mut skipped = Vec::new();
        for e in entries {
            match features.get(&e.lemma) {
                Some(f) => set.push(e.lemma.clone(), f.mean.clone(), e.label),
                None => skipped.push(e.lemma.clone()),
            }
        }
        (set, skipped)
    }

    fn validate(&self, expected_dim: Option<usize>) -> Result<usize> {
        let dim = expected_dim
            .or_else(|| self.features.first().map(Vec::len))
            .ok_or_else(|| Error::Training("empty feature set".into()))?;
        for (name, f) in self.names.iter().zip(&self.features) {
            if f.len() != dim {
                return Err(Error::FeatureDimension {
                    expected: dim,
                    found: f.len(),
                });
            }
            if f.iter().any(|v| !v.is_finite()) {
                return Err(Error::NonFinite(name.clone()));
            }
        }
        Ok(dim)
    }

    /// Design matrix with a trailing bias column.
    fn design_matrix(&self, dim: usize) -> Array2<f64> {
        let mut x = Array2::<f64>::ones((self.len(), dim + 1));
        for (i, f) in self.features.iter().enumerate() {
            for (j, &v) in f.iter().enumerate() {
                x[[i, j]] = v;
            }
        }
        x
    }
}

/// Class-weight and L2 values searched by [`train`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HyperGrid {
    /// Each class's sample weight is drawn from this list independently.
    pub class_weight_values: Vec<f64>,
    pub l2_values: Vec<f64>,
}

impl Default for HyperGrid {
    fn default() -> Self {
        HyperGrid {
            class_weight_values: vec![0.5, 1.0, 2.0, 4.0],
            l2_values: vec![0.01, 0.1, 1.0, 10.0],
        }
    }
}

impl HyperGrid {
    /// Grid points in a fixed order: l2 outermost, then negative, neutral and
    /// positive weights. Weights of classes absent from training are pinned
    /// to the first value since they have no effect.
    fn points(&self, present: [bool; 3]) -> Vec<(ClassWeights, f64)> {
        let values_for = |k: usize| -> Vec<f64> {
            if present[k] {
                self.class_weight_values.clone()
            } else {
                self.class_weight_values.iter().take(1).copied().collect()
            }
        };
        let mut out = Vec::new();
        for &l2 in &self.l2_values {
            for &a in &values_for(0) {
                for &b in &values_for(1) {
                    for &c in &values_for(2) {
                        out.push((ClassWeights::from_array([a, b, c]), l2));
                    }
                }
            }
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrainConfig {
    pub grid: HyperGrid,
    pub tolerance: f64,
    pub max_iterations: usize,
    /// Recorded in the model; fitting itself is deterministic.
    pub seed: u64,
}

impl Default for TrainConfig {
    fn default() -> Self {
        TrainConfig {
            grid: HyperGrid::default(),
            tolerance: 1e-6,
            max_iterations: 20_000,
            seed: 0,
        }
    }
}

/// Fits one model per grid point and keeps the one with the best dev
/// macro-F1 (earliest grid point on ties).
pub fn train(dimension: FrameDimension, train: &LabeledSet, dev: &LabeledSet, config: &TrainConfig) -> Result<AffectModel> {
    let dim = train.validate(None)?;
    if dev.is_empty() {
        return Err(Error::Training("dev set is empty".into()));
    }
    dev.validate(Some(dim))?;
    if config.grid.class_weight_values.is_empty() || config.grid.l2_values.is_empty() {
        return Err(Error::Training("hyperparameter grid is empty".into()));
    }
    if config.grid.class_weight_values.iter().any(|&w| !(w > 0.0)) || config.grid.l2_values.iter().any(|&l| !(l >= 0.0)) {
        return Err(Error::Training("class weights must be positive and l2 non-negative".into()));
    }

    let mut present = [false; 3];
    for l in &train.labels {
        present[l.index()] = true;
    }
    if present.iter().filter(|&&p| p).count() < 2 {
        return Err(Error::SingleClass(train.labels[0].to_string()));
    }

    let x = train.design_matrix(dim);
    let targets: Vec<usize> = train.labels.iter().map(|l| l.index()).collect();

    let points = config.grid.points(present);
    let fits: Vec<(Fit, AffectModel, f64)> = points
        .par_iter()
        .map(|&(weights, l2)| {
            let opts = FitOptions {
                l2,
                class_weights: weights.as_array(),
                tolerance: config.tolerance,
                max_iterations: config.max_iterations,
            };
            let fit = optimizer::fit(x.view(), &targets, present, &opts);
            let model = AffectModel {
                format: MODEL_FORMAT.into(),
                version: MODEL_VERSION,
                dimension,
                embedding_dim: dim,
                weights: fit.weights.outer_iter().map(|r| r.to_vec()).collect(),
                classes_present: present,
                class_weights: weights,
                l2,
                metadata: None,
            };
            let predicted: Vec<Label> = dev
                .features
                .iter()
                .map(|f| model.predict(f).map(|s| s.label))
                .collect::<Result<_>>()?;
            let f1 = classification_report(&dev.labels, &predicted)?.macro_f1;
            Ok((fit, model, f1))
        })
        .collect::<Result<_>>()?;

    let mut best = 0;
    for (i, (_, _, f1)) in fits.iter().enumerate() {
        if *f1 > fits[best].2 {
            best = i;
        }
    }
    let grid = fits
        .iter()
        .map(|(fit, m, f1)| GridResult {
            class_weights: m.class_weights,
            l2: m.l2,
            dev_macro_f1: *f1,
            iterations: fit.iterations,
            converged: fit.converged,
        })
        .collect();
    let (fit, mut model, dev_macro_f1) = fits.into_iter().nth(best).expect("grid is non-empty");
    model.metadata = Some(TrainingMetadata {
        seed: config.seed,
        train_size: train.len(),
        dev_size: dev.len(),
        dev_macro_f1,
        iterations: fit.iterations,
        gradient_norm: fit.gradient_norm,
        converged: fit.converged,
        grid,
    });
    Ok(model)
}

pub fn predict_instance(model: &AffectModel, embedding: &[f64]) -> Result<ContextualScore> {
    model.predict(embedding)
}

/// Type-level label: predict once on the mean embedding.
pub fn aggregate_type(model: &AffectModel, instances: &[&[f64]]) -> Result<Label> {
    let feature = decontextualize("", instances)?;
    Ok(model.predict(&feature.mean)?.label)
}

/// Token-level label: majority vote over per-instance predictions. Ties go
/// to the tied label with the larger summed probability, then to the lower
/// label.
pub fn aggregate_token_majority(model: &AffectModel, instances: &[&[f64]]) -> Result<Label> {
    if instances.is_empty() {
        return Err(Error::EmptyFeature(String::new()));
    }
    let scores = instances
        .iter()
        .map(|e| model.predict(e))
        .collect::<Result<Vec<_>>>()?;
    Ok(majority_vote(&scores))
}

pub(crate) fn majority_vote(scores: &[ContextualScore]) -> Label {
    let mut votes = [0usize; 3];
    let mut mass = [0.0f64; 3];
    for s in scores {
        votes[s.label.index()] += 1;
        for k in 0..3 {
            mass[k] += s.probabilities[k];
        }
    }
    let mut best = 0;
    for k in 1..3 {
        if votes[k] > votes[best] || (votes[k] == votes[best] && mass[k] > mass[best]) {
            best = k;
        }
    }
    Label::from_index(best).expect("index < 3")
}
