//! Transfers verb labels to the entities that are their agents and themes,
//! and aggregates the results into per-entity profiles.

mod io;

use std::collections::{BTreeMap, BTreeSet};

use chrono::{DateTime, Utc};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::corpus::{extract_entity_verb_pairs, AnnotatedCorpus, AnnotatedDocument};
use crate::error::{Error, Result};
use crate::induction::AffectModel;
use crate::label::{EntityDimension, FrameDimension, Label, Role};
use crate::lexicon::LexiconSet;

pub use io::{
    read_contributions, read_mentions, write_contributions, write_mentions, write_profiles_json, write_profiles_tsv,
};

/// Signed entity score implied by one verb label.
///
/// | role  | sentiment        | power     | agency   |
/// |-------|------------------|-----------|----------|
/// | agent | sentiment(agent) | power     | agency   |
/// | theme | sentiment(theme) | −power    | none     |
pub fn transfer_score(role: Role, dimension: EntityDimension, labels: &BTreeMap<FrameDimension, Label>) -> Option<i8> {
    let value = |d: FrameDimension| labels.get(&d).map(|l| l.value());
    match (role, dimension) {
        (Role::Agent, EntityDimension::Sentiment) => value(FrameDimension::SentimentAgent),
        (Role::Agent, EntityDimension::Power) => value(FrameDimension::Power),
        (Role::Agent, EntityDimension::Agency) => value(FrameDimension::Agency),
        (Role::Theme, EntityDimension::Sentiment) => value(FrameDimension::SentimentTheme),
        (Role::Theme, EntityDimension::Power) => value(FrameDimension::Power).map(|v| -v),
        (Role::Theme, EntityDimension::Agency) => None,
    }
}

/// Where a contribution came from.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Provenance {
    pub document: String,
    pub sentence: usize,
    pub token: usize,
    pub role: Role,
    pub verb: String,
    pub outlet: String,
    pub timestamp: DateTime<Utc>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScoreContribution {
    pub entity: String,
    pub dimension: EntityDimension,
    pub value: i8,
    pub provenance: Provenance,
}

impl ScoreContribution {
    /// Provenance first, then entity and dimension.
    fn sort_key(&self) -> (&Provenance, &str, EntityDimension) {
        (&self.provenance, &self.entity, self.dimension)
    }
}

/// Models keyed by the verb dimension they predict.
#[derive(Debug, Clone, Default)]
pub struct ModelSet {
    pub models: BTreeMap<FrameDimension, AffectModel>,
}

impl ModelSet {
    pub fn insert(&mut self, model: AffectModel) -> Option<AffectModel> {
        self.models.insert(model.dimension, model)
    }

    pub fn get(&self, dimension: FrameDimension) -> Option<&AffectModel> {
        self.models.get(&dimension)
    }

    pub fn is_empty(&self) -> bool {
        self.models.is_empty()
    }
}

impl FromIterator<AffectModel> for ModelSet {
    fn from_iter<I: IntoIterator<Item = AffectModel>>(iter: I) -> Self {
        let mut set = ModelSet::default();
        for m in iter {
            set.insert(m);
        }
        set
    }
}

/// Source of verb labels for scoring.
#[derive(Debug, Clone, Copy)]
pub enum VerbScorer<'a> {
    /// Contextual predictions from each occurrence's embedding.
    Models(&'a ModelSet),
    /// Fixed per-lemma labels; verbs outside the lexicon contribute nothing.
    Lexicons(&'a LexiconSet),
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct ScoringOutcome {
    pub contributions: Vec<ScoreContribution>,
    /// Verb occurrences with entity arguments whose embedding was absent.
    pub missing_embeddings: usize,
}

/// One contribution per (entity-verb pair, dimension with a formula), sorted
/// by provenance so the result does not depend on document order.
pub fn score_corpus(corpus: &AnnotatedCorpus, scorer: VerbScorer<'_>) -> Result<ScoringOutcome> {
    if let VerbScorer::Models(models) = scorer {
        if models.is_empty() {
            return Err(Error::Invalid("no models supplied for scoring".into()));
        }
        for m in models.models.values() {
            if m.embedding_dim != corpus.embedding_dim() {
                return Err(Error::FeatureDimension {
                    expected: corpus.embedding_dim(),
                    found: m.embedding_dim,
                });
            }
        }
    }
    let per_doc = corpus
        .documents
        .par_iter()
        .map(|doc| score_document(doc, scorer))
        .collect::<Result<Vec<_>>>()?;
    let mut outcome = ScoringOutcome::default();
    for (contributions, missing) in per_doc {
        outcome.contributions.extend(contributions);
        outcome.missing_embeddings += missing;
    }
    outcome.contributions.sort_by(|a, b| a.sort_key().cmp(&b.sort_key()));
    Ok(outcome)
}

fn verb_labels(doc: &AnnotatedDocument, verb: usize, scorer: VerbScorer<'_>) -> Result<Option<BTreeMap<FrameDimension, Label>>> {
    let v = &doc.verbs[verb];
    let mut labels = BTreeMap::new();
    match scorer {
        VerbScorer::Models(models) => {
            let Some(e) = &v.embedding else {
                return Ok(None);
            };
            for (&d, m) in &models.models {
                labels.insert(d, m.predict(e)?.label);
            }
        }
        VerbScorer::Lexicons(lexicons) => {
            for (&d, lex) in &lexicons.lexicons {
                if let Some(l) = lex.label(&v.lemma) {
                    labels.insert(d, l);
                }
            }
        }
    }
    Ok(Some(labels))
}

fn score_document(doc: &AnnotatedDocument, scorer: VerbScorer<'_>) -> Result<(Vec<ScoreContribution>, usize)> {
    let pairs = extract_entity_verb_pairs(doc);
    let mut out = Vec::new();
    let mut missing = BTreeSet::new();
    let mut cache: BTreeMap<usize, Option<BTreeMap<FrameDimension, Label>>> = BTreeMap::new();
    for pair in pairs {
        if !cache.contains_key(&pair.verb) {
            cache.insert(pair.verb, verb_labels(doc, pair.verb, scorer)?);
        }
        let Some(labels) = &cache[&pair.verb] else {
            missing.insert(pair.verb);
            continue;
        };
        let v = &doc.verbs[pair.verb];
        for dimension in EntityDimension::ALL {
            let Some(value) = transfer_score(pair.role, dimension, labels) else {
                continue;
            };
            out.push(ScoreContribution {
                entity: pair.entity.clone(),
                dimension,
                value,
                provenance: Provenance {
                    document: doc.id.clone(),
                    sentence: v.sentence,
                    token: v.token,
                    role: pair.role,
                    verb: v.lemma.clone(),
                    outlet: doc.outlet.clone(),
                    timestamp: doc.timestamp,
                },
            });
        }
    }
    Ok((out, missing.len()))
}

/// Conjunctive filter over contributions. `None` fields match everything;
/// the date range is half-open, `[from, until)`.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SliceDescriptor {
    pub outlets: Option<BTreeSet<String>>,
    pub from: Option<DateTime<Utc>>,
    pub until: Option<DateTime<Utc>>,
    pub documents: Option<BTreeSet<String>>,
}

impl SliceDescriptor {
    pub fn all() -> Self {
        SliceDescriptor::default()
    }

    pub fn outlet(name: impl Into<String>) -> Self {
        SliceDescriptor {
            outlets: Some(BTreeSet::from([name.into()])),
            ..Default::default()
        }
    }

    pub fn matches_document(&self, document: &str, outlet: &str, timestamp: DateTime<Utc>) -> bool {
        self.outlets.as_ref().is_none_or(|o| o.contains(outlet))
            && self.from.is_none_or(|f| timestamp >= f)
            && self.until.is_none_or(|u| timestamp < u)
            && self.documents.as_ref().is_none_or(|d| d.contains(document))
    }

    pub fn matches(&self, p: &Provenance) -> bool {
        self.matches_document(&p.document, &p.outlet, p.timestamp)
    }

    /// Short human-readable summary used in exports.
    pub fn describe(&self) -> String {
        let mut parts = Vec::new();
        if let Some(o) = &self.outlets {
            parts.push(format!("outlets={}", o.iter().cloned().collect::<Vec<_>>().join(",")));
        }
        if let Some(f) = self.from {
            parts.push(format!("from={}", f.to_rfc3339()));
        }
        if let Some(u) = self.until {
            parts.push(format!("until={}", u.to_rfc3339()));
        }
        if let Some(d) = &self.documents {
            parts.push(format!("documents={}", d.len()));
        }
        if parts.is_empty() {
            "all".to_string()
        } else {
            parts.join(";")
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DimensionScore {
    pub mean: f64,
    pub count: usize,
    pub sum: i64,
}

impl DimensionScore {
    fn from_sum(sum: i64, count: usize) -> Self {
        DimensionScore {
            mean: sum as f64 / count as f64,
            count,
            sum,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EntityProfile {
    pub entity: String,
    /// Only dimensions with at least one contribution appear.
    pub scores: BTreeMap<EntityDimension, DimensionScore>,
}

impl EntityProfile {
    pub fn mean(&self, dimension: EntityDimension) -> Option<f64> {
        self.scores.get(&dimension).map(|s| s.mean)
    }

    pub fn count(&self, dimension: EntityDimension) -> usize {
        self.scores.get(&dimension).map_or(0, |s| s.count)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProfileSet {
    pub slice: SliceDescriptor,
    /// Sorted by entity name.
    pub profiles: Vec<EntityProfile>,
}

impl ProfileSet {
    pub fn get(&self, entity: &str) -> Option<&EntityProfile> {
        self.profiles
            .binary_search_by(|p| p.entity.as_str().cmp(entity))
            .ok()
            .map(|i| &self.profiles[i])
    }

    /// Entity to mean score along one dimension.
    pub fn means(&self, dimension: EntityDimension) -> BTreeMap<String, f64> {
        self.profiles
            .iter()
            .filter_map(|p| Some((p.entity.clone(), p.mean(dimension)?)))
            .collect()
    }
}

/// Per-entity, per-dimension means over the contributions inside `slice`.
/// Sums are kept as integers, so the result is independent of
/// contribution order.
pub fn build_profiles(contributions: &[ScoreContribution], slice: &SliceDescriptor) -> ProfileSet {
    let mut acc: BTreeMap<&str, BTreeMap<EntityDimension, (i64, usize)>> = BTreeMap::new();
    for c in contributions.iter().filter(|c| slice.matches(&c.provenance)) {
        let cell = acc.entry(&c.entity).or_default().entry(c.dimension).or_insert((0, 0));
        cell.0 += i64::from(c.value);
        cell.1 += 1;
    }
    let profiles = acc
        .into_iter()
        .map(|(entity, dims)| EntityProfile {
            entity: entity.to_string(),
            scores: dims
                .into_iter()
                .map(|(d, (sum, count))| (d, DimensionScore::from_sum(sum, count)))
                .collect(),
        })
        .collect();
    ProfileSet {
        slice: slice.clone(),
        profiles,
    }
}

/// Drops dimension scores backed by fewer than `min_count` contributions,
/// then entities left with no scores.
pub fn filter_profiles(set: &ProfileSet, min_count: usize) -> ProfileSet {
    let profiles = set
        .profiles
        .iter()
        .filter_map(|p| {
            let scores: BTreeMap<_, _> = p.scores.iter().filter(|(_, s)| s.count >= min_count).map(|(d, s)| (*d, *s)).collect();
            (!scores.is_empty()).then(|| EntityProfile {
                entity: p.entity.clone(),
                scores,
            })
        })
        .collect();
    ProfileSet {
        slice: set.slice.clone(),
        profiles,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn labels(pairs: &[(FrameDimension, Label)]) -> BTreeMap<FrameDimension, Label> {
        pairs.iter().copied().collect()
    }

    #[test]
    fn theme_power_is_negated() {
        let l = labels(&[(FrameDimension::Power, Label::Positive)]);
        assert_eq!(transfer_score(Role::Agent, EntityDimension::Power, &l), Some(1));
        assert_eq!(transfer_score(Role::Theme, EntityDimension::Power, &l), Some(-1));
    }

    #[test]
    fn theme_agency_has_no_formula() {
        let l = labels(&[(FrameDimension::Agency, Label::Positive)]);
        assert_eq!(transfer_score(Role::Theme, EntityDimension::Agency, &l), None);
        assert_eq!(transfer_score(Role::Agent, EntityDimension::Agency, &l), Some(1));
    }

    #[test]
    fn sentiment_reads_the_role_specific_label() {
        let l = labels(&[
            (FrameDimension::SentimentAgent, Label::Negative),
            (FrameDimension::SentimentTheme, Label::Positive),
        ]);
        assert_eq!(transfer_score(Role::Agent, EntityDimension::Sentiment, &l), Some(-1));
        assert_eq!(transfer_score(Role::Theme, EntityDimension::Sentiment, &l), Some(1));
    }

    fn contribution(entity: &str, dimension: EntityDimension, value: i8, doc: &str) -> ScoreContribution {
        ScoreContribution {
            entity: entity.into(),
            dimension,
            value,
            provenance: Provenance {
                document: doc.into(),
                sentence: 0,
                token: 0,
                role: Role::Agent,
                verb: "v".into(),
                outlet: "o".into(),
                timestamp: DateTime::<Utc>::default(),
            },
        }
    }

    #[test]
    fn opposite_contributions_average_to_zero() {
        let cs = [
            contribution("A", EntityDimension::Power, 1, "d"),
            contribution("A", EntityDimension::Power, -1, "d"),
        ];
        let set = build_profiles(&cs, &SliceDescriptor::all());
        let s = set.get("A").unwrap().scores[&EntityDimension::Power];
        assert_eq!((s.mean, s.count), (0.0, 2));
    }

    #[test]
    fn slices_are_conjunctive() {
        let cs = [
            contribution("A", EntityDimension::Power, 1, "d1"),
            contribution("A", EntityDimension::Power, -1, "d2"),
        ];
        let mut slice = SliceDescriptor::outlet("o");
        slice.documents = Some(BTreeSet::from(["d1".to_string()]));
        assert_eq!(build_profiles(&cs, &slice).get("A").unwrap().mean(EntityDimension::Power), Some(1.0));
        slice.outlets = Some(BTreeSet::from(["other".to_string()]));
        assert!(build_profiles(&cs, &slice).profiles.is_empty());
    }

    #[test]
    fn filter_drops_thin_dimensions_then_empty_entities() {
        let cs = [
            contribution("A", EntityDimension::Power, 1, "d"),
            contribution("A", EntityDimension::Power, 1, "d"),
            contribution("A", EntityDimension::Agency, 1, "d"),
            contribution("B", EntityDimension::Power, 1, "d"),
        ];
        let set = build_profiles(&cs, &SliceDescriptor::all());
        assert_eq!(filter_profiles(&set, 0), set);
        let f = filter_profiles(&set, 2);
        assert_eq!(f.profiles.len(), 1);
        assert_eq!(f.profiles[0].scores.len(), 1);
        assert_eq!(f.profiles[0].count(EntityDimension::Power), 2);
    }
}
