pub mod analyze;
pub mod eval;
pub mod ingest;
pub mod score;
pub mod synth;
pub mod train;

use std::collections::BTreeSet;
use std::fs::File;
use std::io::BufReader;
use std::path::{Path, PathBuf};

use affectframe::analysis::{document_ids, keyword_slice};
use affectframe::corpus::{load_corpus, AnnotatedCorpus, MentionRow};
use affectframe::induction::AffectModel;
use affectframe::lexicon::{load_lexicons, LemmaTable, LexiconFormat, LexiconSet};
use affectframe::scoring::{read_contributions, read_mentions, ModelSet, ScoreContribution, SliceDescriptor};
use affectframe::FrameDimension;
use anyhow::{bail, Context};

use crate::args::{LexiconArgs, SliceArgs};
use crate::config::{set, RunConfig};

pub const CONTRIBUTIONS: &str = "contributions.tsv";
pub const MENTIONS: &str = "mentions.tsv";

pub fn merge_lexicon_args(args: &LexiconArgs, config: &mut RunConfig) {
    set(&mut config.paths.power_agency, args.power_agency.clone());
    set(&mut config.paths.sentiment, args.sentiment.clone());
}

pub fn merge_slice_args(args: &SliceArgs, config: &mut RunConfig) {
    if !args.outlets.is_empty() {
        config.slice.outlets = Some(args.outlets.clone());
    }
    set(&mut config.slice.from, args.from);
    set(&mut config.slice.until, args.until);
    set(&mut config.slice.keyword, args.keyword.clone());
}

/// Configured lexicon files that exist in the config.
pub fn lexicon_paths(config: &RunConfig) -> Vec<&Path> {
    [&config.paths.power_agency, &config.paths.sentiment]
        .into_iter()
        .flatten()
        .map(PathBuf::as_path)
        .collect()
}

pub fn load_lexicon_set(config: &RunConfig, lemmas: &LemmaTable) -> anyhow::Result<LexiconSet> {
    let mut set = LexiconSet::default();
    if let Some(p) = &config.paths.power_agency {
        set.merge(load_lexicons(p, &LexiconFormat::power_agency(), lemmas)?);
    }
    if let Some(p) = &config.paths.sentiment {
        set.merge(load_lexicons(p, &LexiconFormat::sentiment(), lemmas)?);
    }
    if set.lexicons.is_empty() {
        bail!("no lexicon given (use --power-agency and/or --sentiment)");
    }
    Ok(set)
}

pub fn model_path(dir: &Path, dimension: FrameDimension) -> PathBuf {
    dir.join(format!("{dimension}.json"))
}

/// Every `<dimension>.json` present in `dir`.
pub fn load_models(dir: &Path) -> anyhow::Result<ModelSet> {
    let mut set = ModelSet::default();
    for d in FrameDimension::ALL {
        let path = model_path(dir, d);
        if path.exists() {
            let model = AffectModel::load(&path)?;
            if model.dimension != d {
                bail!("{} holds a {} model", path.display(), model.dimension);
            }
            set.insert(model);
        }
    }
    if set.is_empty() {
        bail!("no model files found in {}", dir.display());
    }
    Ok(set)
}

pub fn load_corpus_from(config: &RunConfig) -> anyhow::Result<AnnotatedCorpus> {
    let path = crate::config::require(&config.paths.corpus, "corpus", "--corpus")?;
    load_corpus(path).with_context(|| format!("loading corpus {}", path.display()))
}

/// The configured slice; a keyword restricts it to the documents of
/// `corpus` containing that token.
pub fn slice_from(config: &RunConfig, corpus: Option<&AnnotatedCorpus>) -> anyhow::Result<SliceDescriptor> {
    let s = &config.slice;
    let documents = match &s.keyword {
        None => None,
        Some(term) => {
            let Some(corpus) = corpus else {
                bail!("a keyword slice needs the corpus (use --corpus)");
            };
            Some(document_ids(&keyword_slice(corpus, term)?))
        }
    };
    Ok(SliceDescriptor {
        outlets: s.outlets.as_ref().map(|o| o.iter().cloned().collect::<BTreeSet<_>>()),
        from: s.from,
        until: s.until,
        documents,
    })
}

pub struct ScoreTables {
    pub contributions: Vec<ScoreContribution>,
    pub mentions: Vec<MentionRow>,
}

pub fn score_table_paths(dir: &Path) -> [PathBuf; 2] {
    [dir.join(CONTRIBUTIONS), dir.join(MENTIONS)]
}

pub fn load_score_tables(dir: &Path) -> anyhow::Result<ScoreTables> {
    let [c, m] = score_table_paths(dir);
    let open = |p: &Path| File::open(p).map(BufReader::new).with_context(|| format!("opening {}", p.display()));
    Ok(ScoreTables {
        contributions: read_contributions(open(&c)?).with_context(|| format!("reading {}", c.display()))?,
        mentions: read_mentions(open(&m)?).with_context(|| format!("reading {}", m.display()))?,
    })
}

/// Non-empty trimmed lines of a text file.
pub fn read_lines(path: &Path) -> anyhow::Result<Vec<String>> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    Ok(text.lines().map(str::trim).filter(|l| !l.is_empty()).map(str::to_string).collect())
}

/// Fixed-precision rendering shared by every text table.
pub fn fmt_score(x: f64) -> String {
    format!("{x:.6}")
}
