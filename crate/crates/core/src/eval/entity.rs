//! Pairwise evaluation of entity power scores against human rankings.
//!
//! Annotators rank a fixed list of entities after every block of articles.
//! Rankings where annotators disagree too much are dropped, the remaining
//! ranks are averaged, and every pair of entities with unequal averages at a
//! step becomes one judgment "A is more powerful than B".

use std::collections::{BTreeMap, BTreeSet};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::eval::rank::{spearman, Spearman};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RankingAnnotation {
    pub annotator: String,
    pub step: u32,
    pub entity: String,
    pub rank: u8,
}

/// Tab-separated `annotator<TAB>step<TAB>entity<TAB>rank` with a header row.
/// Ranks must lie in `1..=scale`.
pub fn load_rankings(path: impl AsRef<Path>, scale: u8) -> Result<Vec<RankingAnnotation>> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let bad = |line: usize, message: String| Error::Invalid(format!("{}:{line}: {message}", path.display()));
    let mut out = Vec::new();
    let mut seen = BTreeSet::new();
    for (i, raw) in text.lines().enumerate().skip(1) {
        let line = i + 1;
        let raw = raw.trim_end_matches('\r');
        if raw.trim().is_empty() {
            continue;
        }
        let cols: Vec<&str> = raw.split('\t').collect();
        let [annotator, step, entity, rank] = cols[..] else {
            return Err(bad(line, format!("expected 4 columns, found {}", cols.len())));
        };
        let step: u32 = step.trim().parse().map_err(|_| bad(line, format!("bad step {step:?}")))?;
        let rank: u8 = rank.trim().parse().map_err(|_| bad(line, format!("bad rank {rank:?}")))?;
        if rank == 0 || rank > scale {
            return Err(bad(line, format!("rank {rank} outside 1..={scale}")));
        }
        if !seen.insert((annotator.to_string(), step, entity.to_string())) {
            return Err(bad(line, format!("{annotator} ranks {entity:?} twice at step {step}")));
        }
        out.push(RankingAnnotation {
            annotator: annotator.to_string(),
            step,
            entity: entity.to_string(),
            rank,
        });
    }
    Ok(out)
}

/// Ranks given to one entity at one step, in annotator-id order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AgreedRank {
    pub step: u32,
    pub entity: String,
    pub ranks: Vec<f64>,
    pub mean: f64,
}

/// Collects (step, entity) samples ranked by every annotator and keeps those
/// whose largest rank difference is at most `max_difference`.
pub fn agreed_ranks(annotations: &[RankingAnnotation], max_difference: Option<f64>) -> Vec<AgreedRank> {
    let annotators: BTreeSet<&str> = annotations.iter().map(|a| a.annotator.as_str()).collect();
    let mut samples: BTreeMap<(u32, &str), BTreeMap<&str, u8>> = BTreeMap::new();
    for a in annotations {
        samples
            .entry((a.step, a.entity.as_str()))
            .or_default()
            .insert(a.annotator.as_str(), a.rank);
    }
    samples
        .into_iter()
        .filter(|(_, by)| by.len() == annotators.len() && by.len() >= 2)
        .filter_map(|((step, entity), by)| {
            let ranks: Vec<f64> = by.values().map(|&r| f64::from(r)).collect();
            let spread = ranks.iter().copied().fold(f64::NEG_INFINITY, f64::max)
                - ranks.iter().copied().fold(f64::INFINITY, f64::min);
            if max_difference.is_some_and(|m| spread > m) {
                return None;
            }
            let mean = ranks.iter().sum::<f64>() / ranks.len() as f64;
            Some(AgreedRank {
                step,
                entity: entity.to_string(),
                ranks,
                mean,
            })
        })
        .collect()
}

/// Rank correlation between the first two annotators over the agreed samples.
pub fn inter_annotator_spearman(agreed: &[AgreedRank]) -> Result<Spearman> {
    let (a, b): (Vec<f64>, Vec<f64>) = agreed
        .iter()
        .filter(|s| s.ranks.len() >= 2)
        .map(|s| (s.ranks[0], s.ranks[1]))
        .unzip();
    spearman(&a, &b)
}

/// Gold judgment: at `step`, `higher` was ranked above `lower`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct PairJudgment {
    pub step: u32,
    pub higher: String,
    pub lower: String,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct JudgmentSet {
    pub judgments: Vec<PairJudgment>,
    /// Pairs dropped because their averaged ranks were equal.
    pub ties: usize,
}

/// Every within-step pair of agreed samples with unequal mean rank. When
/// `entities` is given, only those entities take part.
pub fn build_judgments(agreed: &[AgreedRank], entities: Option<&BTreeSet<String>>) -> JudgmentSet {
    let mut by_step: BTreeMap<u32, Vec<&AgreedRank>> = BTreeMap::new();
    for s in agreed {
        if entities.is_none_or(|keep| keep.contains(&s.entity)) {
            by_step.entry(s.step).or_default().push(s);
        }
    }
    let mut set = JudgmentSet::default();
    for (step, samples) in by_step {
        for (i, a) in samples.iter().enumerate() {
            for b in &samples[i + 1..] {
                let (higher, lower) = if a.mean > b.mean {
                    (a, b)
                } else if b.mean > a.mean {
                    (b, a)
                } else {
                    set.ties += 1;
                    continue;
                };
                set.judgments.push(PairJudgment {
                    step,
                    higher: higher.entity.clone(),
                    lower: lower.entity.clone(),
                });
            }
        }
    }
    set
}

/// Entity scores at each step, usually computed from the articles read up to
/// that step.
pub type StepScores = BTreeMap<u32, BTreeMap<String, f64>>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Comparator {
    /// Mean contextual power.
    Model,
    /// Mention count.
    Frequency,
    /// Mean power from the uncontextualized lexicon.
    OffTheShelf,
}

impl Comparator {
    pub const ALL: [Comparator; 3] = [Comparator::OffTheShelf, Comparator::Frequency, Comparator::Model];

    pub fn as_str(self) -> &'static str {
        match self {
            Comparator::Model => "model",
            Comparator::Frequency => "frequency",
            Comparator::OffTheShelf => "off-the-shelf",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PairwiseAccuracy {
    pub correct: usize,
    pub total: usize,
    /// Judgments where the comparator scored both entities equally.
    pub ties: usize,
    /// Judgments where the comparator had no score for an entity.
    pub missing: usize,
    pub accuracy: f64,
}

/// Fraction of judgments whose order the scores reproduce. A tie or a
/// missing score counts as wrong.
pub fn pairwise_power_accuracy(scores: &StepScores, judgments: &[PairJudgment]) -> Result<PairwiseAccuracy> {
    if judgments.is_empty() {
        return Err(Error::InsufficientData("no pair judgments".into()));
    }
    let (mut correct, mut ties, mut missing) = (0, 0, 0);
    for j in judgments {
        let step = scores.get(&j.step);
        let get = |e: &str| step.and_then(|s| s.get(e)).copied();
        match (get(&j.higher), get(&j.lower)) {
            (Some(h), Some(l)) if h > l => correct += 1,
            (Some(h), Some(l)) if h == l => ties += 1,
            (Some(_), Some(_)) => {}
            _ => missing += 1,
        }
    }
    Ok(PairwiseAccuracy {
        correct,
        total: judgments.len(),
        ties,
        missing,
        accuracy: correct as f64 / judgments.len() as f64,
    })
}
