use affectframe::corpus::{canonicalize_entities, deduplicate, extract_entity_verb_pairs, write_corpus, MergeMap};

use crate::args::IngestArgs;
use crate::config::{check_inputs, require, set, RunConfig, DEFAULT_DEDUP_THRESHOLD};
use crate::run::RunDir;

pub const CORPUS: &str = "corpus.jsonl";

pub fn run(args: &IngestArgs, config: &mut RunConfig) -> anyhow::Result<RunDir> {
    set(&mut config.paths.corpus, args.corpus.clone());
    set(&mut config.paths.merge_map, args.merge_map.clone());
    if let Some(value) = args.dedup_threshold {
        config.analysis.dedup_threshold = Some(value.unwrap_or(
            config.analysis.dedup_threshold.unwrap_or(DEFAULT_DEDUP_THRESHOLD),
        ));
    }
    let corpus_path = require(&config.paths.corpus, "corpus", "--corpus")?;
    check_inputs([Some(corpus_path), config.paths.merge_map.as_deref()].into_iter().flatten())?;
    let merge = config.paths.merge_map.as_deref().map(MergeMap::load).transpose()?;

    let mut corpus = super::load_corpus_from(config)?;
    let mut out = RunDir::create(config.out_dir())?;
    let loaded = corpus.len();

    if let Some(threshold) = config.analysis.dedup_threshold {
        let outcome = deduplicate(corpus, threshold)?;
        for w in outcome.warnings {
            out.warn(w);
        }
        let mut table = String::from("document\tduplicate_of\tdistance\n");
        for d in &outcome.discarded {
            table.push_str(&format!("{}\t{}\t{:.6}\n", d.id, d.duplicate_of, d.distance));
        }
        out.write("discarded.tsv", table.as_bytes())?;
        out.say(format!("discarded: {} (threshold {threshold})", outcome.discarded.len()));
        corpus = outcome.corpus;
    }
    if let Some(map) = &merge {
        corpus = canonicalize_entities(corpus, map);
    }

    let pairs: usize = corpus.documents.iter().map(|d| extract_entity_verb_pairs(d).len()).sum();
    let missing = corpus.missing_embeddings();
    if missing > 0 {
        out.warn(format!("{missing} verb instances have no embedding and will not be scored"));
    }
    let mut bytes = Vec::new();
    write_corpus(&corpus, &mut bytes)?;
    out.write(CORPUS, &bytes)?;
    out.write_json(
        "ingest.json",
        &serde_json::json!({
            "loaded": loaded,
            "documents": corpus.len(),
            "pairs": pairs,
            "missing_embeddings": missing,
        }),
    )?;
    out.say(format!("documents: {}", corpus.len()));
    out.say(format!("pairs: {pairs}"));
    Ok(out)
}
