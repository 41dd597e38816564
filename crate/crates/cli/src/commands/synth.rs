use affectframe::corpus::write_corpus;
use affectframe::synth::{ContextConfig, SentimentContexts, SynthConfig, SynthWorld};

use crate::args::SynthArgs;
use crate::config::RunConfig;
use crate::run::RunDir;

/// A corpus with matching lexicons under `world/`, and sentence-level
/// sentiment annotations with their own corpus under `contexts/`.
pub fn run(args: &SynthArgs, config: &mut RunConfig) -> anyhow::Result<RunDir> {
    let seed = config.seed();
    let world = SynthWorld::generate(&SynthConfig {
        seed,
        embedding_dim: args.embedding_dim,
        verbs: args.verbs,
        documents: args.documents,
        entities: args.entities,
        ..SynthConfig::default()
    });
    let contexts = SentimentContexts::generate(&ContextConfig {
        seed: seed.wrapping_add(1),
        embedding_dim: args.embedding_dim,
        ..ContextConfig::default()
    });

    let mut out = RunDir::create(config.out_dir())?;
    let mut buf = Vec::new();
    write_corpus(&world.corpus, &mut buf)?;
    out.write("world/corpus.jsonl", &buf)?;
    out.write("world/power_agency.csv", world.power_agency_csv().as_bytes())?;
    out.write("world/sentiment.tsv", world.sentiment_tsv(seed).as_bytes())?;
    buf.clear();
    write_corpus(&contexts.corpus, &mut buf)?;
    out.write("contexts/corpus.jsonl", &buf)?;
    out.write("contexts/sentiment.tsv", contexts.lexicon_tsv.as_bytes())?;
    out.write("contexts/agent.tsv", SentimentContexts::annotations_tsv(&contexts.agent).as_bytes())?;
    out.write("contexts/theme.tsv", SentimentContexts::annotations_tsv(&contexts.theme).as_bytes())?;
    out.say(format!(
        "world: {} documents, {} verbs, {} entities",
        world.corpus.len(),
        world.verbs.len(),
        world.entities.len()
    ));
    out.say(format!("contexts: {} verbs, {} annotated sentences", contexts.lemmas.len(), contexts.agent.len()));
    Ok(out)
}
