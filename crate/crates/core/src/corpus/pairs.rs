use serde::{Deserialize, Serialize};

use crate::corpus::{AnnotatedDocument, EntityMention};
use crate::label::Role;

/// An entity standing in an agent or theme relation to one verb occurrence.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct EntityVerbPair {
    pub entity: String,
    /// Index into the document's `verbs`.
    pub verb: usize,
    /// Index into the document's `mentions`.
    pub mention: usize,
    pub role: Role,
}

/// Role implied by a dependency relation. Universal Dependencies v2 spellings
/// (`obj`, `nsubj:pass`) are accepted alongside the Stanford ones.
pub(crate) fn role_for_relation(relation: &str) -> Option<Role> {
    match relation {
        "nsubj" => Some(Role::Agent),
        "dobj" | "obj" | "nsubjpass" | "nsubj:pass" => Some(Role::Theme),
        _ => None,
    }
}

/// Smallest mention covering a token; earliest wins among equal spans.
fn covering_mention(doc: &AnnotatedDocument, sentence: usize, token: usize) -> Option<(usize, &EntityMention)> {
    doc.mentions
        .iter()
        .enumerate()
        .filter(|(_, m)| m.covers(sentence, token))
        .min_by_key(|(i, m)| (m.len(), *i))
}

/// Agents are subjects (`nsubj`); themes are direct objects or passive
/// subjects. Each (verb, mention, role) is emitted once, ordered by verb.
pub fn extract_entity_verb_pairs(doc: &AnnotatedDocument) -> Vec<EntityVerbPair> {
    let mut pairs = Vec::new();
    for (vi, verb) in doc.verbs.iter().enumerate() {
        let Some(sentence) = doc.sentences.get(verb.sentence) else {
            continue;
        };
        let mut found: Vec<EntityVerbPair> = Vec::new();
        for edge in sentence.edges.iter().filter(|e| e.head == verb.token) {
            let Some(role) = role_for_relation(&edge.relation) else {
                continue;
            };
            let Some((mi, mention)) = covering_mention(doc, verb.sentence, edge.dependent) else {
                continue;
            };
            let Some(entity) = doc.resolve_mention(mention) else {
                continue;
            };
            let pair = EntityVerbPair {
                entity: entity.to_string(),
                verb: vi,
                mention: mi,
                role,
            };
            if !found.contains(&pair) {
                found.push(pair);
            }
        }
        found.sort_by_key(|p| (p.role, p.mention));
        pairs.extend(found);
    }
    pairs
}
