//! Seed connotation-frame lexicons.
//!
//! Sentiment lexicons carry real-valued crowd averages per perspective and are
//! ternarized on load; power and agency lexicons carry categorical triples.

mod io;
mod split;

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::corpus::{AnnotatedCorpus, Pos};
use crate::error::{Error, Result};
use crate::label::{FrameDimension, Label};

pub use io::{load_lexicons, load_sentence_annotations, LexiconFormat, LexiconSet, SentenceAnnotation};
pub use split::{split_lexicon, LexiconSplit, SplitPolicy};

/// Cut-offs: negative on `[-1, -0.25)`, neutral on `[-0.25, 0.25]`,
/// positive on `(0.25, 1]`.
pub fn ternarize(raw: f64) -> Result<Label> {
    if !(-1.0..=1.0).contains(&raw) {
        return Err(Error::OutOfRange(raw));
    }
    Ok(if raw < -0.25 {
        Label::Negative
    } else if raw > 0.25 {
        Label::Positive
    } else {
        Label::Neutral
    })
}

/// Maps a categorical power or agency annotation onto a label.
pub fn map_triple(category: &str) -> Result<Label> {
    match category.trim() {
        "power_agent" | "agency_positive" | "agency_pos" => Ok(Label::Positive),
        "power_equal" | "agency_equal" => Ok(Label::Neutral),
        "power_theme" | "agency_negative" | "agency_neg" => Ok(Label::Negative),
        other => Err(Error::UnknownCategory(other.to_string())),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LexiconEntry {
    pub lemma: String,
    pub dimension: FrameDimension,
    pub label: Label,
    /// Crowd average before ternarization (sentiment only).
    pub raw_value: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Lexicon {
    pub dimension: FrameDimension,
    entries: BTreeMap<String, LexiconEntry>,
}

impl Lexicon {
    pub fn new(dimension: FrameDimension) -> Self {
        Lexicon {
            dimension,
            entries: BTreeMap::new(),
        }
    }

    /// Inserts an entry, returning the one it replaced.
    pub fn insert(&mut self, entry: LexiconEntry) -> Option<LexiconEntry> {
        debug_assert_eq!(entry.dimension, self.dimension);
        self.entries.insert(entry.lemma.clone(), entry)
    }

    pub fn get(&self, lemma: &str) -> Option<&LexiconEntry> {
        self.entries.get(&lemma.to_lowercase())
    }

    pub fn label(&self, lemma: &str) -> Option<Label> {
        self.get(lemma).map(|e| e.label)
    }

    /// Entries in lemma order.
    pub fn entries(&self) -> impl Iterator<Item = &LexiconEntry> {
        self.entries.values()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

/// Maps inflected verb forms to the corpus's lemma convention.
#[derive(Debug, Clone, Default)]
pub struct LemmaTable {
    forms: BTreeMap<String, String>,
}

impl LemmaTable {
    /// Each lowercased verb surface form maps to the lemma the corpus assigns
    /// it most often (ties to the alphabetically first lemma).
    pub fn from_corpus(corpus: &AnnotatedCorpus) -> Self {
        let mut counts: BTreeMap<String, BTreeMap<String, usize>> = BTreeMap::new();
        for token in corpus
            .documents
            .iter()
            .flat_map(|d| d.sentences.iter())
            .flat_map(|s| s.tokens.iter())
            .filter(|t| t.pos == Pos::Verb)
        {
            *counts
                .entry(token.surface.to_lowercase())
                .or_default()
                .entry(token.lemma.to_lowercase())
                .or_insert(0) += 1;
        }
        let forms = counts
            .into_iter()
            .filter_map(|(form, lemmas)| {
                let best = lemmas
                    .into_iter()
                    .max_by(|a, b| a.1.cmp(&b.1).then_with(|| b.0.cmp(&a.0)))?;
                Some((form, best.0))
            })
            .collect();
        LemmaTable { forms }
    }

    pub fn lemma(&self, word: &str) -> String {
        let lower = word.trim().to_lowercase();
        self.forms.get(&lower).cloned().unwrap_or(lower)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ternarize_cutoffs() {
        assert_eq!(ternarize(0.5).unwrap(), Label::Positive);
        assert_eq!(ternarize(-0.25).unwrap(), Label::Neutral);
        assert_eq!(ternarize(0.25).unwrap(), Label::Neutral);
        assert_eq!(ternarize(0.0).unwrap(), Label::Neutral);
        assert_eq!(ternarize(-0.2500001).unwrap(), Label::Negative);
        assert_eq!(ternarize(0.2500001).unwrap(), Label::Positive);
        assert_eq!(ternarize(-1.0).unwrap(), Label::Negative);
        assert_eq!(ternarize(1.0).unwrap(), Label::Positive);
    }

    #[test]
    fn ternarize_rejects_out_of_range() {
        assert!(matches!(ternarize(1.01), Err(Error::OutOfRange(_))));
        assert!(ternarize(f64::NAN).is_err());
    }

    #[test]
    fn triples_map_to_polarity() {
        assert_eq!(map_triple("power_agent").unwrap(), Label::Positive);
        assert_eq!(map_triple("power_equal").unwrap(), Label::Neutral);
        assert_eq!(map_triple("power_theme").unwrap(), Label::Negative);
        assert_eq!(map_triple("agency_positive").unwrap(), Label::Positive);
        assert_eq!(map_triple("agency_equal").unwrap(), Label::Neutral);
        assert_eq!(map_triple("agency_negative").unwrap(), Label::Negative);
        match map_triple("power_unknown") {
            Err(Error::UnknownCategory(c)) => assert_eq!(c, "power_unknown"),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn triple_mapping_is_a_bijection_per_dimension() {
        for cats in [
            ["power_agent", "power_equal", "power_theme"],
            ["agency_positive", "agency_equal", "agency_negative"],
        ] {
            let mut labels: Vec<Label> = cats.iter().map(|c| map_triple(c).unwrap()).collect();
            labels.sort();
            assert_eq!(labels, Label::ALL);
        }
    }

    proptest::proptest! {
        #[test]
        fn ternarize_is_monotone(a in -1.0f64..=1.0, b in -1.0f64..=1.0) {
            let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
            proptest::prop_assert!(ternarize(lo).unwrap() <= ternarize(hi).unwrap());
        }
    }
}
