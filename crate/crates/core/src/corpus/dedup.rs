use std::collections::{BTreeMap, HashMap};

use log::warn;

use crate::corpus::{AnnotatedCorpus, Sentence};
use crate::error::{Error, Result};

/// Lowercased surface forms with punctuation stripped; tokens that are
/// entirely punctuation are dropped.
pub fn bag_of_words(sentences: &[Sentence]) -> BTreeMap<String, u32> {
    let mut bow = BTreeMap::new();
    for token in sentences.iter().flat_map(|s| s.tokens.iter()) {
        let term: String = token
            .surface
            .chars()
            .filter(|c| !c.is_ascii_punctuation() && !c.is_whitespace())
            .flat_map(char::to_lowercase)
            .collect();
        if !term.is_empty() {
            *bow.entry(term).or_insert(0) += 1;
        }
    }
    bow
}

/// Cosine distance `1 - cos(a, b)` between two count vectors, or `None` when
/// either vector has zero norm.
pub fn cosine_distance(a: &BTreeMap<String, u32>, b: &BTreeMap<String, u32>) -> Option<f64> {
    let norm = |m: &BTreeMap<String, u32>| m.values().map(|&c| u64::from(c) * u64::from(c)).sum::<u64>();
    let (na, nb) = (norm(a), norm(b));
    if na == 0 || nb == 0 {
        return None;
    }
    let (small, large) = if a.len() <= b.len() { (a, b) } else { (b, a) };
    let dot: u64 = small
        .iter()
        .filter_map(|(k, &c)| large.get(k).map(|&d| u64::from(c) * u64::from(d)))
        .sum();
    Some(1.0 - dot as f64 / ((na as f64).sqrt() * (nb as f64).sqrt()))
}

#[derive(Debug, Clone, PartialEq)]
pub struct Discarded {
    pub id: String,
    /// The earlier retained document it duplicates.
    pub duplicate_of: String,
    pub distance: f64,
}

#[derive(Debug, Clone)]
pub struct DedupOutcome {
    pub corpus: AnnotatedCorpus,
    pub discarded: Vec<Discarded>,
    pub warnings: Vec<String>,
}

/// Sparse unit vector over interned term ids, sorted by id.
struct UnitVector(Vec<(u32, f64)>);

impl UnitVector {
    fn dot(&self, other: &UnitVector) -> f64 {
        let (mut i, mut j, mut acc) = (0, 0, 0.0);
        let (a, b) = (&self.0, &other.0);
        while i < a.len() && j < b.len() {
            match a[i].0.cmp(&b[j].0) {
                std::cmp::Ordering::Less => i += 1,
                std::cmp::Ordering::Greater => j += 1,
                std::cmp::Ordering::Equal => {
                    acc += a[i].1 * b[j].1;
                    i += 1;
                    j += 1;
                }
            }
        }
        acc
    }
}

/// Drops near-duplicate documents.
///
/// Documents are visited from oldest to newest (ties by id) and each one is
/// compared with every document retained so far; it is discarded when any of
/// those lies strictly closer than `threshold` in cosine distance. Retained
/// documents keep their input order. Documents with an empty bag of words are
/// retained without comparison.
pub fn deduplicate(corpus: AnnotatedCorpus, threshold: f64) -> Result<DedupOutcome> {
    if !(0.0..=2.0).contains(&threshold) {
        return Err(Error::Invalid(format!(
            "dedup threshold {threshold} is outside [0, 2]"
        )));
    }

    let mut vocab: HashMap<&str, u32> = HashMap::new();
    let mut vectors: Vec<Option<UnitVector>> = Vec::with_capacity(corpus.documents.len());
    for doc in &corpus.documents {
        let norm = doc
            .bag_of_words
            .values()
            .map(|&c| f64::from(c) * f64::from(c))
            .sum::<f64>()
            .sqrt();
        if norm == 0.0 {
            vectors.push(None);
            continue;
        }
        let mut v: Vec<(u32, f64)> = doc
            .bag_of_words
            .iter()
            .filter(|(_, &c)| c > 0)
            .map(|(term, &c)| {
                let next = vocab.len() as u32;
                let id = *vocab.entry(term.as_str()).or_insert(next);
                (id, f64::from(c) / norm)
            })
            .collect();
        v.sort_by_key(|&(id, _)| id);
        vectors.push(Some(UnitVector(v)));
    }

    let mut order: Vec<usize> = (0..corpus.documents.len()).collect();
    order.sort_by(|&a, &b| {
        let (da, db) = (&corpus.documents[a], &corpus.documents[b]);
        da.timestamp.cmp(&db.timestamp).then_with(|| da.id.cmp(&db.id))
    });

    let mut warnings = Vec::new();
    let mut retained: Vec<usize> = Vec::new();
    let mut keep = vec![true; corpus.documents.len()];
    let mut discarded = Vec::new();
    for &i in &order {
        let Some(vi) = &vectors[i] else {
            let msg = format!(
                "document {:?} has an empty bag of words; skipped from duplicate comparison",
                corpus.documents[i].id
            );
            warn!("{msg}");
            warnings.push(msg);
            continue;
        };
        let hit = retained.iter().find_map(|&j| {
            let vj = vectors[j].as_ref()?;
            let mut distance = 1.0 - vi.dot(vj);
            if distance < threshold + NEAR_THRESHOLD {
                distance = count_distance(&corpus, i, j).unwrap_or(distance);
            }
            (distance < threshold).then_some((j, distance))
        });
        match hit {
            Some((j, distance)) => {
                keep[i] = false;
                discarded.push(Discarded {
                    id: corpus.documents[i].id.clone(),
                    duplicate_of: corpus.documents[j].id.clone(),
                    distance,
                });
            }
            None => retained.push(i),
        }
    }

    let AnnotatedCorpus { header, documents } = corpus;
    let documents = documents
        .into_iter()
        .zip(keep)
        .filter_map(|(d, k)| k.then_some(d))
        .collect();
    Ok(DedupOutcome {
        corpus: AnnotatedCorpus { header, documents },
        discarded,
        warnings,
    })
}

/// Unit-vector dot products drift by a few ulps; candidates this close to the
/// threshold are recomputed from the integer counts.
const NEAR_THRESHOLD: f64 = 1e-9;

fn count_distance(corpus: &AnnotatedCorpus, i: usize, j: usize) -> Option<f64> {
    cosine_distance(
        &corpus.documents[i].bag_of_words,
        &corpus.documents[j].bag_of_words,
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::{AnnotatedDocument, CorpusHeader};
    use chrono::{TimeZone, Utc};

    fn doc(id: &str, day: u32, bow: &[(&str, u32)]) -> AnnotatedDocument {
        AnnotatedDocument {
            id: id.to_string(),
            outlet: "o".to_string(),
            timestamp: Utc.with_ymd_and_hms(2018, 1, day, 0, 0, 0).unwrap(),
            sentences: vec![],
            mentions: vec![],
            verbs: vec![],
            bag_of_words: bow.iter().map(|(k, v)| (k.to_string(), *v)).collect(),
        }
    }

    fn corpus(docs: Vec<AnnotatedDocument>) -> AnnotatedCorpus {
        AnnotatedCorpus {
            header: CorpusHeader::new(1),
            documents: docs,
        }
    }

    fn ids(c: &AnnotatedCorpus) -> Vec<&str> {
        c.documents.iter().map(|d| d.id.as_str()).collect()
    }

    #[test]
    fn identical_documents_keep_the_earlier() {
        let bow = [("metoo", 3), ("said", 1)];
        // the later article comes first in input order
        let out = deduplicate(corpus(vec![doc("late", 5, &bow), doc("early", 2, &bow)]), 0.011).unwrap();
        assert_eq!(ids(&out.corpus), ["early"]);
        assert_eq!(out.discarded[0].duplicate_of, "early");
        assert!(out.discarded[0].distance.abs() < 1e-12);
    }

    #[test]
    fn disjoint_vocabularies_are_kept() {
        let out = deduplicate(
            corpus(vec![doc("a", 1, &[("x", 1)]), doc("b", 2, &[("y", 1)])]),
            0.011,
        )
        .unwrap();
        assert_eq!(ids(&out.corpus), ["a", "b"]);
        assert_eq!(cosine_distance(&out.corpus.documents[0].bag_of_words, &out.corpus.documents[1].bag_of_words), Some(1.0));
    }

    /// Integer vector whose cosine with the unit vector e_x is exactly
    /// 989/1000: x = 989 and the remaining coordinates carry
    /// 1000^2 - 989^2 = 21879 as a sum of four squares.
    fn boundary_vector() -> Vec<(String, u32)> {
        let rest = 1_000_000u32 - 989 * 989;
        let mut squares = None;
        'search: for a in 0..=148u32 {
            for b in 0..=a {
                for c in 0..=b {
                    let used = a * a + b * b + c * c;
                    if used > rest {
                        continue;
                    }
                    let d = ((rest - used) as f64).sqrt() as u32;
                    if d <= c && d * d == rest - used {
                        squares = Some([a, b, c, d]);
                        break 'search;
                    }
                }
            }
        }
        let sq = squares.expect("Lagrange guarantees a decomposition");
        let mut v = vec![("x".to_string(), 989)];
        for (k, s) in sq.iter().enumerate() {
            if *s > 0 {
                v.push((format!("t{k}"), *s));
            }
        }
        v
    }

    #[test]
    fn distance_equal_to_threshold_keeps_both() {
        let b = boundary_vector();
        let sum_sq: u32 = b.iter().map(|(_, c)| c * c).sum();
        assert_eq!(sum_sq, 1_000_000);
        let bow_b: Vec<(&str, u32)> = b.iter().map(|(k, c)| (k.as_str(), *c)).collect();
        let docs = vec![doc("a", 1, &[("x", 1)]), doc("b", 2, &bow_b)];
        let d = cosine_distance(&docs[0].bag_of_words, &docs[1].bag_of_words).unwrap();
        assert_eq!(d, 1.0 - 989.0 / 1000.0);
        let out = deduplicate(corpus(docs), 0.011).unwrap();
        assert_eq!(ids(&out.corpus), ["a", "b"]);
    }

    #[test]
    fn zero_norm_documents_are_kept_with_a_warning() {
        let out = deduplicate(corpus(vec![doc("a", 1, &[]), doc("b", 2, &[])]), 0.5).unwrap();
        assert_eq!(out.corpus.len(), 2);
        assert_eq!(out.warnings.len(), 2);
    }

    #[test]
    fn timestamp_ties_break_by_id() {
        let bow = [("w", 1)];
        let out = deduplicate(corpus(vec![doc("b", 1, &bow), doc("a", 1, &bow)]), 0.011).unwrap();
        assert_eq!(ids(&out.corpus), ["a"]);
    }

    #[test]
    fn threshold_outside_range_is_rejected() {
        assert!(deduplicate(corpus(vec![]), 2.5).is_err());
        assert!(deduplicate(corpus(vec![]), -0.1).is_err());
    }

    #[test]
    fn bag_of_words_lowercases_and_strips_punctuation() {
        use crate::corpus::{Pos, Sentence, Token};
        let tok = |s: &str| Token { index: 0, surface: s.into(), lemma: s.to_lowercase(), pos: Pos::X };
        let s = Sentence { tokens: vec![tok("She"), tok("she's"), tok("."), tok("#MeToo")], edges: vec![] };
        let bow = bag_of_words(&[s]);
        assert_eq!(bow.get("she"), Some(&1));
        assert_eq!(bow.get("shes"), Some(&1));
        assert_eq!(bow.get("metoo"), Some(&1));
        assert_eq!(bow.len(), 3);
    }
}
