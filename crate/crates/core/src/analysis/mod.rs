//! Entity rankings, pairwise comparisons, corpus slicing, and the relative
//! power graph.

mod graph;

use std::collections::{BTreeMap, BTreeSet};

use chrono::{DateTime, Utc};
use serde::{Deserialize, Serialize};

use crate::corpus::{AnnotatedCorpus, MentionRow};
use crate::error::{Error, Result};
use crate::label::EntityDimension;
use crate::scoring::{build_profiles, DimensionScore, ProfileSet, ScoreContribution, SliceDescriptor};

pub use graph::{article_power_means, build_power_graph, ArticlePower, PowerEdge, PowerGraph, PowerNode};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Direction {
    /// Lowest mean first.
    Ascending,
    /// Highest mean first.
    Descending,
}

/// Mention counts per entity within a slice. With `proper_only`, only
/// mentions headed by a proper noun are counted.
pub fn entity_frequencies(mentions: &[MentionRow], slice: &SliceDescriptor, proper_only: bool) -> BTreeMap<String, usize> {
    let mut out: BTreeMap<String, usize> = BTreeMap::new();
    for row in mentions {
        if !slice.matches_document(&row.document, &row.outlet, row.timestamp) {
            continue;
        }
        let n = if proper_only { row.proper } else { row.mentions };
        if n > 0 {
            *out.entry(row.entity.clone()).or_default() += n;
        }
    }
    out
}

/// The `k` most frequent entities, most frequent first, ties by name.
pub fn most_frequent(frequencies: &BTreeMap<String, usize>, k: usize) -> Vec<&str> {
    let mut ranked: Vec<(&str, usize)> = frequencies.iter().map(|(e, &n)| (e.as_str(), n)).collect();
    ranked.sort_by(|a, b| b.1.cmp(&a.1).then_with(|| a.0.cmp(b.0)));
    ranked.into_iter().take(k).map(|(e, _)| e).collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RankedEntity {
    pub entity: String,
    pub mean: f64,
    pub count: usize,
    pub frequency: usize,
}

/// Restricts to the `k` most frequent proper-noun entities, then orders them
/// by their mean along `dimension`. Entities without a score on that
/// dimension are left out.
pub fn top_entities(
    profiles: &ProfileSet,
    proper_frequencies: &BTreeMap<String, usize>,
    k: usize,
    dimension: EntityDimension,
    direction: Direction,
) -> Vec<RankedEntity> {
    let mut ranked: Vec<RankedEntity> = most_frequent(proper_frequencies, k)
        .into_iter()
        .filter_map(|e| {
            let s = profiles.get(e)?.scores.get(&dimension)?;
            Some(RankedEntity {
                entity: e.to_string(),
                mean: s.mean,
                count: s.count,
                frequency: proper_frequencies[e],
            })
        })
        .collect();
    ranked.sort_by(|a, b| {
        let by_mean = a.mean.total_cmp(&b.mean);
        let by_mean = match direction {
            Direction::Ascending => by_mean,
            Direction::Descending => by_mean.reverse(),
        };
        by_mean.then_with(|| a.entity.cmp(&b.entity))
    });
    ranked
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComparisonRow {
    /// `None` for the row covering every outlet.
    pub outlet: Option<String>,
    pub a_mentions: usize,
    pub b_mentions: usize,
    pub a: Option<DimensionScore>,
    pub b: Option<DimensionScore>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PairwiseComparison {
    pub a: String,
    pub b: String,
    pub dimension: EntityDimension,
    pub min_mentions: usize,
    /// Qualifying outlets in name order, then the global row.
    pub rows: Vec<ComparisonRow>,
}

/// Per-outlet scores for two entities, restricted to outlets that mention
/// both at least `min_mentions` times, plus a global row over the whole
/// input.
pub fn pairwise_compare(
    contributions: &[ScoreContribution],
    mentions: &[MentionRow],
    a: &str,
    b: &str,
    dimension: EntityDimension,
    min_mentions: usize,
) -> Result<PairwiseComparison> {
    if min_mentions == 0 {
        return Err(Error::Invalid("min_mentions must be at least 1".into()));
    }
    let known = |e: &str| mentions.iter().any(|m| m.entity == e) || contributions.iter().any(|c| c.entity == e);
    for e in [a, b] {
        if !known(e) {
            return Err(Error::UnknownEntity(e.to_string()));
        }
    }
    let mut counts: BTreeMap<&str, (usize, usize)> = BTreeMap::new();
    for m in mentions {
        let cell = counts.entry(m.outlet.as_str()).or_default();
        if m.entity == a {
            cell.0 += m.mentions;
        }
        if m.entity == b {
            cell.1 += m.mentions;
        }
    }
    let row = |outlet: Option<&str>, a_mentions, b_mentions| {
        let slice = match outlet {
            Some(o) => SliceDescriptor::outlet(o),
            None => SliceDescriptor::all(),
        };
        let set = build_profiles(contributions, &slice);
        let score = |e: &str| set.get(e).and_then(|p| p.scores.get(&dimension)).copied();
        ComparisonRow {
            outlet: outlet.map(str::to_string),
            a_mentions,
            b_mentions,
            a: score(a),
            b: score(b),
        }
    };
    let mut rows: Vec<ComparisonRow> = counts
        .iter()
        .filter(|(_, &(na, nb))| na >= min_mentions && nb >= min_mentions)
        .map(|(&o, &(na, nb))| row(Some(o), na, nb))
        .collect();
    let (ta, tb) = counts.values().fold((0, 0), |(x, y), &(na, nb)| (x + na, y + nb));
    rows.push(row(None, ta, tb));
    Ok(PairwiseComparison {
        a: a.to_string(),
        b: b.to_string(),
        dimension,
        min_mentions,
        rows,
    })
}

/// Documents strictly before `cutoff`, and those at or after it.
pub fn temporal_split(corpus: &AnnotatedCorpus, cutoff: DateTime<Utc>) -> (AnnotatedCorpus, AnnotatedCorpus) {
    let (before, after) = corpus.documents.iter().cloned().partition(|d| d.timestamp < cutoff);
    (
        AnnotatedCorpus {
            header: corpus.header.clone(),
            documents: before,
        },
        AnnotatedCorpus {
            header: corpus.header.clone(),
            documents: after,
        },
    )
}

/// The same partition expressed as contribution slices.
pub fn temporal_slices(cutoff: DateTime<Utc>) -> (SliceDescriptor, SliceDescriptor) {
    (
        SliceDescriptor {
            until: Some(cutoff),
            ..Default::default()
        },
        SliceDescriptor {
            from: Some(cutoff),
            ..Default::default()
        },
    )
}

/// Documents containing `term` as a whole token, ignoring case.
pub fn keyword_slice(corpus: &AnnotatedCorpus, term: &str) -> Result<AnnotatedCorpus> {
    if term.trim().is_empty() {
        return Err(Error::Invalid("keyword must not be empty".into()));
    }
    Ok(AnnotatedCorpus {
        header: corpus.header.clone(),
        documents: corpus.documents.iter().filter(|d| d.contains_token(term)).cloned().collect(),
    })
}

/// Ids of the documents in a corpus, for use as a slice's article subset.
pub fn document_ids(corpus: &AnnotatedCorpus) -> BTreeSet<String> {
    corpus.documents.iter().map(|d| d.id.clone()).collect()
}
