use affectframe::lexicon::LemmaTable;
use affectframe::scoring::{
    build_profiles, score_corpus, write_contributions, write_mentions, write_profiles_json, write_profiles_tsv,
    VerbScorer,
};
use anyhow::bail;

use crate::args::ScoreArgs;
use crate::config::{check_inputs, require, set, RunConfig};
use crate::run::RunDir;

pub const PROFILES_TSV: &str = "profiles.tsv";
pub const PROFILES_JSON: &str = "profiles.json";

pub fn run(args: &ScoreArgs, config: &mut RunConfig) -> anyhow::Result<RunDir> {
    set(&mut config.paths.corpus, args.corpus.clone());
    set(&mut config.paths.models, args.models.clone());
    super::merge_lexicon_args(&args.lexicons, config);
    super::merge_slice_args(&args.slice, config);

    let corpus_path = require(&config.paths.corpus, "corpus", "--corpus")?;
    let mut inputs = vec![corpus_path];
    if args.lexicon_scorer {
        let lexicons = super::lexicon_paths(config);
        if lexicons.is_empty() {
            bail!("--lexicon-scorer needs --power-agency and/or --sentiment");
        }
        inputs.extend(lexicons);
    } else {
        inputs.push(require(&config.paths.models, "model directory", "--models")?);
    }
    check_inputs(inputs)?;

    let corpus = super::load_corpus_from(config)?;
    let outcome = if args.lexicon_scorer {
        let lexicons = super::load_lexicon_set(config, &LemmaTable::from_corpus(&corpus))?;
        score_corpus(&corpus, VerbScorer::Lexicons(&lexicons))?
    } else {
        let models = super::load_models(config.paths.models.as_deref().expect("checked above"))?;
        score_corpus(&corpus, VerbScorer::Models(&models))?
    };
    let slice = super::slice_from(config, Some(&corpus))?;
    let profiles = build_profiles(&outcome.contributions, &slice);
    let mentions = corpus.mention_table();

    let mut out = RunDir::create(config.out_dir())?;
    if outcome.missing_embeddings > 0 {
        out.warn(format!(
            "{} verb occurrences with entity arguments had no embedding and were skipped",
            outcome.missing_embeddings
        ));
    }
    let mut buf = Vec::new();
    write_contributions(&outcome.contributions, &mut buf)?;
    out.write(super::CONTRIBUTIONS, &buf)?;
    buf.clear();
    write_mentions(&mentions, &mut buf)?;
    out.write(super::MENTIONS, &buf)?;
    buf.clear();
    write_profiles_tsv(&profiles, &mut buf)?;
    out.write(PROFILES_TSV, &buf)?;
    buf.clear();
    write_profiles_json(&profiles, &mut buf)?;
    out.write(PROFILES_JSON, &buf)?;

    out.say(format!("documents: {}", corpus.len()));
    out.say(format!("contributions: {}", outcome.contributions.len()));
    out.say(format!("entities: {} (slice {})", profiles.profiles.len(), profiles.slice.describe()));
    Ok(out)
}
