//! Line-delimited JSON corpus files.
//!
//! Line 1 is the header:
//!
//! ```json
//! {"schema":"affectframe-corpus","version":1,"embedding_dim":1024}
//! ```
//!
//! Every following non-blank line is one document:
//!
//! ```json
//! {"id":"d1","outlet":"example.com","timestamp":"2018-01-14T09:00:00Z",
//!  "sentences":[{"tokens":[{"surface":"She","lemma":"she","pos":"PRON"}, ...],
//!                "edges":[{"head":1,"dependent":0,"relation":"nsubj"}, ...]}],
//!  "mentions":[{"sentence":0,"start":0,"end":1,"surface":"She","chain_id":"c1","canonical_name":"Grace"}],
//!  "verbs":[{"sentence":0,"token":1,"lemma":"push","embedding":[0.1, ...]}],
//!  "bag_of_words":{"she":1,"pushed":1}}
//! ```
//!
//! Mention spans are half-open token ranges. `bag_of_words` may be omitted, in
//! which case it is derived from the token surfaces.

use std::collections::{BTreeMap, HashSet};
use std::fs::File;
use std::io::{BufRead, BufReader, Write};
use std::path::Path;

use crate::corpus::{bag_of_words, AnnotatedCorpus, AnnotatedDocument, CorpusHeader, Pos};
use crate::error::{Error, Result};

pub const SCHEMA_NAME: &str = "affectframe-corpus";
pub const SCHEMA_VERSION: u32 = 1;

pub fn load_corpus(path: impl AsRef<Path>) -> Result<AnnotatedCorpus> {
    let path = path.as_ref();
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    read_corpus(BufReader::new(file)).map_err(|e| match e {
        Error::Io { source, .. } => Error::io(path, source),
        other => other,
    })
}

pub fn read_corpus<R: BufRead>(reader: R) -> Result<AnnotatedCorpus> {
    let mut lines = reader.lines().enumerate();
    let header = loop {
        match lines.next() {
            None => return Err(Error::record(1, "header", "missing header record")),
            Some((i, line)) => {
                let line = line.map_err(|e| Error::io("<corpus>", e))?;
                if line.trim().is_empty() {
                    continue;
                }
                break parse_header(i + 1, &line)?;
            }
        }
    };

    let mut documents = Vec::new();
    let mut seen = HashSet::new();
    for (i, line) in lines {
        let line = line.map_err(|e| Error::io("<corpus>", e))?;
        if line.trim().is_empty() {
            continue;
        }
        let lineno = i + 1;
        let mut de = serde_json::Deserializer::from_str(&line);
        let mut doc: AnnotatedDocument = serde_path_to_error::deserialize(&mut de).map_err(|e| {
            let field = e.path().to_string();
            Error::record(lineno, field, e.into_inner().to_string())
        })?;
        validate_document(lineno, &mut doc, header.embedding_dim)?;
        if !seen.insert(doc.id.clone()) {
            return Err(Error::DuplicateDocument(doc.id));
        }
        documents.push(doc);
    }
    Ok(AnnotatedCorpus { header, documents })
}

fn parse_header(lineno: usize, line: &str) -> Result<CorpusHeader> {
    let mut de = serde_json::Deserializer::from_str(line);
    let header: CorpusHeader = serde_path_to_error::deserialize(&mut de).map_err(|e| {
        let field = format!("header.{}", e.path());
        Error::record(lineno, field, e.into_inner().to_string())
    })?;
    if header.schema != SCHEMA_NAME {
        return Err(Error::record(
            lineno,
            "header.schema",
            format!("expected {SCHEMA_NAME:?}, found {:?}", header.schema),
        ));
    }
    if header.version != SCHEMA_VERSION {
        return Err(Error::record(
            lineno,
            "header.version",
            format!("unsupported schema version {}", header.version),
        ));
    }
    if header.embedding_dim == 0 {
        return Err(Error::record(lineno, "header.embedding_dim", "must be positive"));
    }
    Ok(header)
}

fn validate_document(line: usize, doc: &mut AnnotatedDocument, dim: usize) -> Result<()> {
    if doc.id.is_empty() {
        return Err(Error::record(line, "id", "empty document id"));
    }
    for (s, sentence) in doc.sentences.iter_mut().enumerate() {
        let n = sentence.tokens.len();
        for (t, token) in sentence.tokens.iter_mut().enumerate() {
            token.index = t;
            if token.lemma.is_empty() {
                return Err(Error::record(
                    line,
                    format!("sentences[{s}].tokens[{t}].lemma"),
                    "empty lemma",
                ));
            }
        }
        for (k, edge) in sentence.edges.iter().enumerate() {
            let field = format!("sentences[{s}].edges[{k}]");
            if edge.head >= n || edge.dependent >= n {
                return Err(Error::record(
                    line,
                    field,
                    format!("token index out of range for sentence of {n} tokens"),
                ));
            }
            if edge.head == edge.dependent {
                return Err(Error::record(line, field, "head equals dependent"));
            }
        }
    }

    let mut chains: BTreeMap<&str, &str> = BTreeMap::new();
    for (k, m) in doc.mentions.iter().enumerate() {
        let field = format!("mentions[{k}]");
        let Some(sentence) = doc.sentences.get(m.sentence) else {
            return Err(Error::record(line, field, format!("no sentence {}", m.sentence)));
        };
        if m.is_empty() || m.end > sentence.tokens.len() {
            return Err(Error::record(
                line,
                field,
                format!("span {}..{} out of bounds", m.start, m.end),
            ));
        }
        if let Some(chain) = &m.chain_id {
            match chains.get(chain.as_str()) {
                Some(&name) if name != m.canonical_name => {
                    return Err(Error::record(
                        line,
                        format!("{field}.canonical_name"),
                        format!("chain {chain:?} already named {name:?}, found {:?}", m.canonical_name),
                    ));
                }
                Some(_) => {}
                None => {
                    chains.insert(chain.as_str(), m.canonical_name.as_str());
                }
            }
        }
    }

    for (k, v) in doc.verbs.iter().enumerate() {
        let field = format!("verbs[{k}]");
        let Some(token) = doc.token(v.sentence, v.token) else {
            return Err(Error::record(
                line,
                field,
                format!("no token {} in sentence {}", v.token, v.sentence),
            ));
        };
        if token.pos != Pos::Verb {
            return Err(Error::record(
                line,
                field,
                format!("token {:?} is tagged {:?}, not VERB", token.surface, token.pos),
            ));
        }
        if v.lemma != token.lemma {
            return Err(Error::record(
                line,
                format!("{field}.lemma"),
                format!("{:?} disagrees with token lemma {:?}", v.lemma, token.lemma),
            ));
        }
        if let Some(e) = &v.embedding {
            if e.len() != dim {
                return Err(Error::DimensionMismatch {
                    line,
                    context: format!("{field} ({:?} in document {:?})", v.lemma, doc.id),
                    expected: dim,
                    found: e.len(),
                });
            }
            if e.iter().any(|x| !x.is_finite()) {
                return Err(Error::record(line, format!("{field}.embedding"), "non-finite value"));
            }
        }
    }

    if doc.bag_of_words.is_empty() {
        doc.bag_of_words = bag_of_words(&doc.sentences);
    }
    Ok(())
}

pub fn write_corpus<W: Write>(corpus: &AnnotatedCorpus, mut writer: W) -> Result<()> {
    let io = |e: std::io::Error| Error::io("<corpus output>", e);
    serde_json::to_writer(&mut writer, &corpus.header).map_err(|e| Error::Invalid(e.to_string()))?;
    writer.write_all(b"\n").map_err(io)?;
    for doc in &corpus.documents {
        serde_json::to_writer(&mut writer, doc).map_err(|e| Error::Invalid(e.to_string()))?;
        writer.write_all(b"\n").map_err(io)?;
    }
    writer.flush().map_err(io)
}

#[cfg(test)]
mod tests {
    use super::*;

    const HEADER: &str = r#"{"schema":"affectframe-corpus","version":1,"embedding_dim":2}"#;

    fn doc_line(id: &str, embedding: &str) -> String {
        format!(
            r#"{{"id":"{id}","outlet":"o","timestamp":"2018-01-01T00:00:00Z","sentences":[{{"tokens":[{{"surface":"She","lemma":"she","pos":"PRON"}},{{"surface":"ran","lemma":"run","pos":"VERB"}}],"edges":[{{"head":1,"dependent":0,"relation":"nsubj"}}]}}],"mentions":[{{"sentence":0,"start":0,"end":1,"surface":"She","chain_id":"c","canonical_name":"Ann"}}],"verbs":[{{"sentence":0,"token":1,"lemma":"run","embedding":{embedding}}}]}}"#
        )
    }

    #[test]
    fn header_only_file_is_an_empty_corpus() {
        let c = read_corpus(HEADER.as_bytes()).unwrap();
        assert!(c.is_empty());
        assert_eq!(c.embedding_dim(), 2);
    }

    #[test]
    fn empty_file_lacks_a_header() {
        let err = read_corpus("".as_bytes()).unwrap_err();
        assert!(err.to_string().contains("header"), "{err}");
    }

    #[test]
    fn two_documents_load() {
        let text = format!("{HEADER}\n{}\n{}\n", doc_line("a", "[1,2]"), doc_line("b", "[3,4]"));
        let c = read_corpus(text.as_bytes()).unwrap();
        assert_eq!(c.len(), 2);
        assert_eq!(c.documents[1].sentences[0].tokens[1].index, 1);
        // bag of words derived when absent
        assert_eq!(c.documents[0].bag_of_words.get("ran"), Some(&1));
    }

    #[test]
    fn truncated_embedding_names_the_verb() {
        let text = format!("{HEADER}\n{}\n", doc_line("a", "[1]"));
        match read_corpus(text.as_bytes()).unwrap_err() {
            Error::DimensionMismatch { line, context, expected, found } => {
                assert_eq!((line, expected, found), (2, 2, 1));
                assert!(context.contains("run"));
            }
            other => panic!("unexpected {other}"),
        }
    }

    #[test]
    fn malformed_record_names_line_and_field() {
        let bad = doc_line("a", "[1,2]").replace(r#""outlet":"o""#, r#""outlet":5"#);
        let text = format!("{HEADER}\n{bad}\n");
        match read_corpus(text.as_bytes()).unwrap_err() {
            Error::Record { line, field, .. } => {
                assert_eq!(line, 2);
                assert_eq!(field, "outlet");
            }
            other => panic!("unexpected {other}"),
        }
    }

    #[test]
    fn duplicate_ids_are_rejected() {
        let text = format!("{HEADER}\n{}\n{}\n", doc_line("a", "[1,2]"), doc_line("a", "[3,4]"));
        assert!(matches!(
            read_corpus(text.as_bytes()),
            Err(Error::DuplicateDocument(id)) if id == "a"
        ));
    }

    #[test]
    fn verb_on_non_verb_token_is_rejected() {
        let bad = doc_line("a", "[1,2]").replace(r#""token":1"#, r#""token":0"#);
        let text = format!("{HEADER}\n{bad}\n");
        let err = read_corpus(text.as_bytes()).unwrap_err();
        assert!(err.to_string().contains("VERB"), "{err}");
    }

    #[test]
    fn write_then_read_is_identity() {
        let text = format!("{HEADER}\n{}\n", doc_line("a", "[0.1,-2.5e-3]"));
        let c = read_corpus(text.as_bytes()).unwrap();
        let mut out = Vec::new();
        write_corpus(&c, &mut out).unwrap();
        let again = read_corpus(out.as_slice()).unwrap();
        assert_eq!(c, again);
    }
}
