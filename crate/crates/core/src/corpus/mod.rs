//! Annotated corpus data model.
//!
//! A corpus is a header (schema version and embedding dimension) followed by
//! documents that already carry tokenization, part-of-speech tags, dependency
//! edges, entity mentions with coreference chains, and one contextual
//! embedding per verb occurrence. See [`io`] for the on-disk layout.

mod canonical;
mod dedup;
pub mod io;
mod pairs;

use std::collections::BTreeMap;

use chrono::{DateTime, Utc};
use serde::{Deserialize, Serialize};

pub use canonical::{canonicalize_entities, MergeMap};
pub use dedup::{bag_of_words, cosine_distance, deduplicate, DedupOutcome, Discarded};
pub use io::{load_corpus, read_corpus, write_corpus, SCHEMA_NAME, SCHEMA_VERSION};
pub use pairs::{extract_entity_verb_pairs, EntityVerbPair};

/// Coarse universal part-of-speech tags.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Pos {
    Adj,
    Adp,
    Adv,
    Aux,
    Cconj,
    Det,
    Intj,
    Noun,
    Num,
    Part,
    Pron,
    Propn,
    Punct,
    Sconj,
    Sym,
    Verb,
    X,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Token {
    /// Position within the sentence; assigned from array order on load.
    #[serde(skip)]
    pub index: usize,
    pub surface: String,
    pub lemma: String,
    pub pos: Pos,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DependencyEdge {
    pub head: usize,
    pub dependent: usize,
    pub relation: String,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct Sentence {
    pub tokens: Vec<Token>,
    #[serde(default)]
    pub edges: Vec<DependencyEdge>,
}

impl Sentence {
    /// Surface forms joined by single spaces.
    pub fn text(&self) -> String {
        self.tokens
            .iter()
            .map(|t| t.surface.as_str())
            .collect::<Vec<_>>()
            .join(" ")
    }

    fn head_of(&self, token: usize) -> Option<usize> {
        self.edges
            .iter()
            .find(|e| e.dependent == token)
            .map(|e| e.head)
    }
}

/// A mention of an entity. `start..end` is a half-open token span.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EntityMention {
    pub sentence: usize,
    pub start: usize,
    pub end: usize,
    pub surface: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub chain_id: Option<String>,
    pub canonical_name: String,
}

impl EntityMention {
    pub fn covers(&self, sentence: usize, token: usize) -> bool {
        self.sentence == sentence && self.start <= token && token < self.end
    }

    pub fn len(&self) -> usize {
        self.end - self.start
    }

    pub fn is_empty(&self) -> bool {
        self.end <= self.start
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerbInstance {
    pub sentence: usize,
    pub token: usize,
    pub lemma: String,
    /// Absent when the upstream encoder failed for this sentence.
    #[serde(default)]
    pub embedding: Option<Vec<f64>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AnnotatedDocument {
    pub id: String,
    pub outlet: String,
    pub timestamp: DateTime<Utc>,
    pub sentences: Vec<Sentence>,
    #[serde(default)]
    pub mentions: Vec<EntityMention>,
    #[serde(default)]
    pub verbs: Vec<VerbInstance>,
    #[serde(default)]
    pub bag_of_words: BTreeMap<String, u32>,
}

/// Mention tallies for one entity within one document.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct MentionCount {
    pub mentions: usize,
    /// Mentions whose head token is tagged `PROPN`.
    pub proper: usize,
}

impl AnnotatedDocument {
    pub fn token(&self, sentence: usize, token: usize) -> Option<&Token> {
        self.sentences.get(sentence)?.tokens.get(token)
    }

    /// Head token of a mention: the first token in the span whose syntactic
    /// head lies outside the span, falling back to the last token.
    pub fn mention_head(&self, mention: &EntityMention) -> Option<&Token> {
        let sentence = self.sentences.get(mention.sentence)?;
        let head = (mention.start..mention.end)
            .find(|&t| match sentence.head_of(t) {
                Some(h) => h < mention.start || h >= mention.end,
                None => true,
            })
            .unwrap_or(mention.end.saturating_sub(1));
        sentence.tokens.get(head)
    }

    /// Canonical entity a mention refers to. Pronoun mentions outside any
    /// coreference chain have no referent and yield `None`.
    pub fn resolve_mention<'a>(&self, mention: &'a EntityMention) -> Option<&'a str> {
        let is_pronoun = self
            .mention_head(mention)
            .is_some_and(|t| t.pos == Pos::Pron);
        if is_pronoun && mention.chain_id.is_none() {
            return None;
        }
        Some(mention.canonical_name.as_str())
    }

    /// Per-entity mention counts over resolvable mentions.
    pub fn mention_counts(&self) -> BTreeMap<String, MentionCount> {
        let mut counts: BTreeMap<String, MentionCount> = BTreeMap::new();
        for m in &self.mentions {
            let Some(name) = self.resolve_mention(m) else {
                continue;
            };
            let entry = counts.entry(name.to_string()).or_default();
            entry.mentions += 1;
            if self.mention_head(m).is_some_and(|t| t.pos == Pos::Propn) {
                entry.proper += 1;
            }
        }
        counts
    }

    /// Case-insensitive whole-token match against surface forms.
    pub fn contains_token(&self, term: &str) -> bool {
        let needle = term.to_lowercase();
        self.sentences
            .iter()
            .flat_map(|s| s.tokens.iter())
            .any(|t| t.surface.to_lowercase() == needle)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CorpusHeader {
    pub schema: String,
    pub version: u32,
    pub embedding_dim: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub embedding_source: Option<String>,
}

impl CorpusHeader {
    pub fn new(embedding_dim: usize) -> Self {
        CorpusHeader {
            schema: SCHEMA_NAME.to_string(),
            version: SCHEMA_VERSION,
            embedding_dim,
            embedding_source: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct AnnotatedCorpus {
    pub header: CorpusHeader,
    pub documents: Vec<AnnotatedDocument>,
}

impl AnnotatedCorpus {
    pub fn new(embedding_dim: usize) -> Self {
        AnnotatedCorpus {
            header: CorpusHeader::new(embedding_dim),
            documents: Vec::new(),
        }
    }

    pub fn embedding_dim(&self) -> usize {
        self.header.embedding_dim
    }

    pub fn len(&self) -> usize {
        self.documents.len()
    }

    pub fn is_empty(&self) -> bool {
        self.documents.is_empty()
    }

    pub fn document(&self, id: &str) -> Option<&AnnotatedDocument> {
        self.documents.iter().find(|d| d.id == id)
    }

    /// All embeddings in the corpus grouped by verb lemma, in document order.
    pub fn embeddings_by_lemma(&self) -> BTreeMap<&str, Vec<&[f64]>> {
        let mut out: BTreeMap<&str, Vec<&[f64]>> = BTreeMap::new();
        for doc in &self.documents {
            for v in &doc.verbs {
                if let Some(e) = &v.embedding {
                    out.entry(v.lemma.as_str()).or_default().push(e.as_slice());
                }
            }
        }
        out
    }

    /// Verb instances that carry no embedding.
    pub fn missing_embeddings(&self) -> usize {
        self.documents
            .iter()
            .flat_map(|d| d.verbs.iter())
            .filter(|v| v.embedding.is_none())
            .count()
    }

    /// Mention counts per (document id, entity).
    pub fn mention_table(&self) -> Vec<MentionRow> {
        let mut rows = Vec::new();
        for doc in &self.documents {
            for (entity, count) in doc.mention_counts() {
                rows.push(MentionRow {
                    document: doc.id.clone(),
                    outlet: doc.outlet.clone(),
                    timestamp: doc.timestamp,
                    entity,
                    mentions: count.mentions,
                    proper: count.proper,
                });
            }
        }
        rows
    }
}

/// One row of the per-document mention table.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MentionRow {
    pub document: String,
    pub outlet: String,
    pub timestamp: DateTime<Utc>,
    pub entity: String,
    pub mentions: usize,
    pub proper: usize,
}
