//! Metrics and evaluation protocols.

pub mod agreement;
pub mod contextual;
pub mod entity;
mod lexicon;
mod metrics;
pub mod rank;

pub use agreement::{krippendorff_alpha, DistanceMetric};
pub use contextual::{
    compare_agreement, contextual_eval_split, evaluate_contextual, normalize_sentence, sentence_embeddings,
    AgreementComparison, ContextualGold, ContextualReport,
};
pub use entity::{
    agreed_ranks, build_judgments, inter_annotator_spearman, load_rankings, pairwise_power_accuracy, AgreedRank,
    Comparator, JudgmentSet, PairJudgment, PairwiseAccuracy, RankingAnnotation, StepScores,
};
pub use lexicon::{evaluate_lexicon, LexiconEvaluation};
pub use metrics::{classification_report, majority_baseline, majority_label, ClassMetrics, ClassificationReport};
pub use rank::{average_ranks, spearman, spearman_with, PValueMethod, Spearman};
