use std::collections::BTreeSet;
use std::path::{Path, PathBuf};

use log::warn;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::lexicon::{Lexicon, LexiconEntry};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SplitPolicy {
    /// Seeded shuffle into three parts of equal size. When the lexicon size is
    /// not divisible by three the extra entries go to dev, then test, so the
    /// training part is always `floor(n / 3)`.
    EqualThirds,
    /// Lemma lists read from files, one lemma per line.
    Provided { train: PathBuf, dev: PathBuf, test: PathBuf },
}

impl SplitPolicy {
    /// `train.txt`, `dev.txt` and `test.txt` inside `dir`.
    pub fn provided_in(dir: impl AsRef<Path>) -> Self {
        let dir = dir.as_ref();
        SplitPolicy::Provided {
            train: dir.join("train.txt"),
            dev: dir.join("dev.txt"),
            test: dir.join("test.txt"),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LexiconSplit {
    pub train: Vec<LexiconEntry>,
    pub dev: Vec<LexiconEntry>,
    pub test: Vec<LexiconEntry>,
    pub seed: u64,
    pub warnings: Vec<String>,
}

impl LexiconSplit {
    pub fn sizes(&self) -> (usize, usize, usize) {
        (self.train.len(), self.dev.len(), self.test.len())
    }
}

pub fn split_lexicon(lexicon: &Lexicon, seed: u64, policy: &SplitPolicy) -> Result<LexiconSplit> {
    if lexicon.is_empty() {
        return Err(Error::InsufficientData(format!("{} lexicon is empty", lexicon.dimension)));
    }
    match policy {
        SplitPolicy::EqualThirds => Ok(equal_thirds(lexicon, seed)),
        SplitPolicy::Provided { train, dev, test } => provided(lexicon, seed, [train, dev, test]),
    }
}

fn equal_thirds(lexicon: &Lexicon, seed: u64) -> LexiconSplit {
    let mut entries: Vec<LexiconEntry> = lexicon.entries().cloned().collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    entries.shuffle(&mut rng);

    let n = entries.len();
    let base = n / 3;
    let extra = n % 3;
    let train_len = base;
    let dev_len = base + usize::from(extra >= 1);
    let test = entries.split_off(train_len + dev_len);
    let dev = entries.split_off(train_len);
    LexiconSplit {
        train: entries,
        dev,
        test,
        seed,
        warnings: Vec::new(),
    }
}

fn read_lemmas(path: &Path) -> Result<Vec<String>> {
    if !path.exists() {
        return Err(Error::MissingSplit(path.to_path_buf()));
    }
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    Ok(text
        .lines()
        .map(|l| l.trim().to_lowercase())
        .filter(|l| !l.is_empty())
        .collect())
}

fn provided(lexicon: &Lexicon, seed: u64, paths: [&PathBuf; 3]) -> Result<LexiconSplit> {
    let mut seen = BTreeSet::new();
    let mut warnings = Vec::new();
    let mut parts: Vec<Vec<LexiconEntry>> = Vec::with_capacity(3);
    for path in paths {
        let mut part = Vec::new();
        for lemma in read_lemmas(path)? {
            if !seen.insert(lemma.clone()) {
                return Err(Error::Lexicon {
                    path: path.clone(),
                    message: format!("{lemma:?} appears in more than one split"),
                });
            }
            match lexicon.get(&lemma) {
                Some(e) => part.push(e.clone()),
                None => {
                    let msg = format!("{}: {lemma:?} is not in the {} lexicon", path.display(), lexicon.dimension);
                    warn!("{msg}");
                    warnings.push(msg);
                }
            }
        }
        parts.push(part);
    }
    let test = parts.pop().unwrap_or_default();
    let dev = parts.pop().unwrap_or_default();
    let train = parts.pop().unwrap_or_default();
    Ok(LexiconSplit {
        train,
        dev,
        test,
        seed,
        warnings,
    })
}
