use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::label::{FrameDimension, Label};

pub const MODEL_FORMAT: &str = "affectframe-model";
pub const MODEL_VERSION: u32 = 1;

/// Per-class sample weights used during fitting.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ClassWeights {
    pub negative: f64,
    pub neutral: f64,
    pub positive: f64,
}

impl ClassWeights {
    pub const UNIFORM: ClassWeights = ClassWeights {
        negative: 1.0,
        neutral: 1.0,
        positive: 1.0,
    };

    pub fn as_array(&self) -> [f64; 3] {
        [self.negative, self.neutral, self.positive]
    }

    pub fn from_array(w: [f64; 3]) -> Self {
        ClassWeights {
            negative: w[0],
            neutral: w[1],
            positive: w[2],
        }
    }

    pub fn get(&self, label: Label) -> f64 {
        self.as_array()[label.index()]
    }
}

/// Outcome of one hyperparameter setting during grid search.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridResult {
    pub class_weights: ClassWeights,
    pub l2: f64,
    pub dev_macro_f1: f64,
    pub iterations: usize,
    pub converged: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrainingMetadata {
    pub seed: u64,
    pub train_size: usize,
    pub dev_size: usize,
    pub dev_macro_f1: f64,
    pub iterations: usize,
    pub gradient_norm: f64,
    pub converged: bool,
    pub grid: Vec<GridResult>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ContextualScore {
    pub dimension: FrameDimension,
    pub label: Label,
    /// Indexed by [`Label::index`].
    pub probabilities: [f64; 3],
}

impl ContextualScore {
    pub fn probability(&self, label: Label) -> f64 {
        self.probabilities[label.index()]
    }
}

/// Three linear scorers (one per label) over an embedding plus bias.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AffectModel {
    pub format: String,
    pub version: u32,
    pub dimension: FrameDimension,
    pub embedding_dim: usize,
    /// Rows in label order, each `embedding_dim + 1` long with the bias last.
    pub weights: Vec<Vec<f64>>,
    /// Labels seen in training; the others are never predicted.
    pub classes_present: [bool; 3],
    pub class_weights: ClassWeights,
    pub l2: f64,
    pub metadata: Option<TrainingMetadata>,
}

impl AffectModel {
    /// A model with the given weight rows and all classes enabled.
    pub fn from_weights(dimension: FrameDimension, weights: Vec<Vec<f64>>) -> Result<Self> {
        if weights.len() != 3 || weights.iter().any(|r| r.len() != weights[0].len()) || weights[0].is_empty() {
            return Err(Error::Invalid("weights must be 3 rows of equal, non-zero length".into()));
        }
        let embedding_dim = weights[0].len() - 1;
        Ok(AffectModel {
            format: MODEL_FORMAT.into(),
            version: MODEL_VERSION,
            dimension,
            embedding_dim,
            weights,
            classes_present: [true; 3],
            class_weights: ClassWeights::UNIFORM,
            l2: 0.0,
            metadata: None,
        })
    }

    /// Softmax over the three linear scores; the label is the argmax with
    /// ties resolved toward the lower label.
    pub fn predict(&self, embedding: &[f64]) -> Result<ContextualScore> {
        if embedding.len() != self.embedding_dim {
            return Err(Error::FeatureDimension {
                expected: self.embedding_dim,
                found: embedding.len(),
            });
        }
        let mut scores = [f64::NEG_INFINITY; 3];
        for (k, row) in self.weights.iter().enumerate() {
            if !self.classes_present[k] {
                continue;
            }
            let (w, bias) = row.split_at(self.embedding_dim);
            scores[k] = w.iter().zip(embedding).map(|(a, b)| a * b).sum::<f64>() + bias[0];
        }
        let max = scores.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let mut probabilities = [0.0; 3];
        let mut total = 0.0;
        for k in 0..3 {
            if self.classes_present[k] {
                probabilities[k] = (scores[k] - max).exp();
                total += probabilities[k];
            }
        }
        probabilities.iter_mut().for_each(|p| *p /= total);
        Ok(ContextualScore {
            dimension: self.dimension,
            label: argmax(&probabilities),
            probabilities,
        })
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        let json = serde_json::to_string_pretty(self).map_err(|e| Error::Model {
            path: path.to_path_buf(),
            message: e.to_string(),
        })?;
        std::fs::write(path, json + "\n").map_err(|e| Error::io(path, e))
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let model_err = |message: String| Error::Model {
            path: path.to_path_buf(),
            message,
        };
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        let model: AffectModel = serde_json::from_str(&text).map_err(|e| model_err(e.to_string()))?;
        if model.format != MODEL_FORMAT {
            return Err(model_err(format!("not a model file (format {:?})", model.format)));
        }
        if model.version != MODEL_VERSION {
            return Err(model_err(format!("unsupported model version {}", model.version)));
        }
        if model.weights.len() != 3 || model.weights.iter().any(|r| r.len() != model.embedding_dim + 1) {
            return Err(model_err("weight matrix shape disagrees with embedding_dim".into()));
        }
        if !model.classes_present.iter().any(|&p| p) {
            return Err(model_err("no classes enabled".into()));
        }
        Ok(model)
    }
}

/// Highest entry, earliest index on ties.
pub(crate) fn argmax(values: &[f64; 3]) -> Label {
    let mut best = 0;
    for k in 1..3 {
        if values[k] > values[best] {
            best = k;
        }
    }
    Label::from_index(best).expect("index < 3")
}
