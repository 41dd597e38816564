use std::collections::BTreeMap;
use std::path::Path;

use log::warn;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::label::FrameDimension;
use crate::lexicon::{map_triple, ternarize, LemmaTable, Lexicon, LexiconEntry};

/// Column layout of a delimited lexicon file. The first row is a header and
/// columns are addressed by name.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LexiconFormat {
    pub delimiter: char,
    pub verb_column: String,
    pub columns: BTreeMap<FrameDimension, String>,
}

impl LexiconFormat {
    /// Tab-separated writer-perspective averages: `Perspective(ws)` (toward
    /// the subject) and `Perspective(wo)` (toward the object).
    pub fn sentiment() -> Self {
        LexiconFormat {
            delimiter: '\t',
            verb_column: "verb".into(),
            columns: BTreeMap::from([
                (FrameDimension::SentimentAgent, "Perspective(ws)".into()),
                (FrameDimension::SentimentTheme, "Perspective(wo)".into()),
            ]),
        }
    }

    /// Comma-separated categorical `power` and `agency` columns.
    pub fn power_agency() -> Self {
        LexiconFormat {
            delimiter: ',',
            verb_column: "verb".into(),
            columns: BTreeMap::from([
                (FrameDimension::Power, "power".into()),
                (FrameDimension::Agency, "agency".into()),
            ]),
        }
    }
}

#[derive(Debug, Clone, Default)]
pub struct LexiconSet {
    pub lexicons: BTreeMap<FrameDimension, Lexicon>,
    pub warnings: Vec<String>,
}

impl LexiconSet {
    pub fn get(&self, dimension: FrameDimension) -> Option<&Lexicon> {
        self.lexicons.get(&dimension)
    }

    pub fn merge(&mut self, other: LexiconSet) {
        self.lexicons.extend(other.lexicons);
        self.warnings.extend(other.warnings);
    }
}

pub fn load_lexicons(path: impl AsRef<Path>, format: &LexiconFormat, lemmas: &LemmaTable) -> Result<LexiconSet> {
    let path = path.as_ref();
    let lex_err = |message: String| Error::Lexicon {
        path: path.to_path_buf(),
        message,
    };
    let delimiter = u8::try_from(format.delimiter)
        .map_err(|_| lex_err(format!("delimiter {:?} is not a single byte", format.delimiter)))?;
    let mut reader = csv::ReaderBuilder::new()
        .delimiter(delimiter)
        .flexible(true)
        .trim(csv::Trim::All)
        .from_path(path)
        .map_err(|e| lex_err(e.to_string()))?;
    let headers = reader.headers().map_err(|e| lex_err(e.to_string()))?.clone();
    let find = |name: &str| {
        headers
            .iter()
            .position(|h| h == name)
            .ok_or_else(|| lex_err(format!("missing column {name:?}")))
    };
    let verb_col = find(&format.verb_column)?;
    let columns: Vec<(FrameDimension, usize)> = format
        .columns
        .iter()
        .map(|(d, name)| find(name).map(|i| (*d, i)))
        .collect::<Result<_>>()?;

    let mut set = LexiconSet::default();
    for (d, _) in &columns {
        set.lexicons.insert(*d, Lexicon::new(*d));
    }
    for (row, record) in reader.records().enumerate() {
        let line = row + 2;
        let record = record.map_err(|e| lex_err(format!("line {line}: {e}")))?;
        let Some(verb) = record.get(verb_col).filter(|v| !v.is_empty()) else {
            continue;
        };
        let lemma = lemmas.lemma(verb);
        for &(dimension, col) in &columns {
            let Some(cell) = record.get(col).filter(|c| !c.is_empty()) else {
                continue;
            };
            let entry = parse_cell(dimension, &lemma, cell)
                .map_err(|e| lex_err(format!("line {line}, column {:?}: {e}", format.columns[&dimension])))?;
            let lexicon = set.lexicons.get_mut(&dimension).expect("initialised above");
            if lexicon.insert(entry).is_some() {
                let msg = format!(
                    "{}: {lemma:?} appears more than once for {dimension}; keeping line {line}",
                    path.display()
                );
                warn!("{msg}");
                set.warnings.push(msg);
            }
        }
    }
    Ok(set)
}

fn parse_cell(dimension: FrameDimension, lemma: &str, cell: &str) -> Result<LexiconEntry> {
    let (label, raw_value) = match dimension {
        FrameDimension::SentimentAgent | FrameDimension::SentimentTheme => {
            let raw: f64 = cell
                .parse()
                .map_err(|_| Error::Invalid(format!("{cell:?} is not a number")))?;
            (ternarize(raw)?, Some(raw))
        }
        FrameDimension::Power | FrameDimension::Agency => (map_triple(cell)?, None),
    };
    Ok(LexiconEntry {
        lemma: lemma.to_string(),
        dimension,
        label,
        raw_value,
    })
}

/// Scores collected for one verb in one annotated sentence.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SentenceAnnotation {
    pub lemma: String,
    pub sentence: String,
    pub scores: Vec<f64>,
}

impl SentenceAnnotation {
    pub fn mean(&self) -> f64 {
        self.scores.iter().sum::<f64>() / self.scores.len() as f64
    }
}

/// Tab-separated `verb<TAB>sentence<TAB>scores` with a header row; scores are
/// comma-separated reals in `[-1, 1]`.
pub fn load_sentence_annotations(path: impl AsRef<Path>, lemmas: &LemmaTable) -> Result<Vec<SentenceAnnotation>> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let lex_err = |line: usize, message: String| Error::Lexicon {
        path: path.to_path_buf(),
        message: format!("line {line}: {message}"),
    };
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate().skip(1) {
        let line = i + 1;
        let raw = raw.trim_end_matches('\r');
        if raw.trim().is_empty() {
            continue;
        }
        let cols: Vec<&str> = raw.split('\t').collect();
        let [verb, sentence, scores] = cols[..] else {
            return Err(lex_err(line, format!("expected 3 columns, found {}", cols.len())));
        };
        let scores = scores
            .split(',')
            .map(|s| {
                let v: f64 = s
                    .trim()
                    .parse()
                    .map_err(|_| lex_err(line, format!("{s:?} is not a number")))?;
                if (-1.0..=1.0).contains(&v) {
                    Ok(v)
                } else {
                    Err(lex_err(line, format!("score {v} outside [-1, 1]")))
                }
            })
            .collect::<Result<Vec<f64>>>()?;
        if scores.is_empty() {
            return Err(lex_err(line, "no scores".into()));
        }
        out.push(SentenceAnnotation {
            lemma: lemmas.lemma(verb),
            sentence: sentence.to_string(),
            scores,
        });
    }
    Ok(out)
}
