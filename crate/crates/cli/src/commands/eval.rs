use std::collections::{BTreeMap, BTreeSet};
use std::path::Path;

use affectframe::corpus::AnnotatedCorpus;
use affectframe::eval::{
    agreed_ranks, build_judgments, compare_agreement, contextual_eval_split, evaluate_contextual, evaluate_lexicon,
    inter_annotator_spearman, load_rankings, pairwise_power_accuracy, sentence_embeddings, ClassificationReport,
    Comparator, DistanceMetric, StepScores,
};
use affectframe::induction::decontextualize_corpus;
use affectframe::lexicon::{load_sentence_annotations, split_lexicon, LemmaTable};
use affectframe::scoring::{build_profiles, ScoreContribution, SliceDescriptor};
use affectframe::{EntityDimension, FrameDimension};
use anyhow::{bail, Context};

use crate::args::{EvalCommand, EvalContextualArgs, EvalEntityArgs, EvalLexiconArgs, MetricArg};
use crate::config::{check_inputs, require, set, RunConfig};
use crate::run::RunDir;

pub fn run(command: &EvalCommand, config: &mut RunConfig) -> anyhow::Result<RunDir> {
    match command {
        EvalCommand::Lexicon(a) => lexicon(a, config),
        EvalCommand::Contextual(a) => contextual(a, config),
        EvalCommand::Entity(a) => entity(a, config),
    }
}

/// Percentages with two decimals, as lexicon results are usually quoted.
fn pct(x: f64) -> String {
    format!("{:.2}", 100.0 * x)
}

fn report_line(name: &str, what: &str, r: &ClassificationReport) -> String {
    format!("{name} {what} accuracy {} macro-F1 {} (n={})", pct(r.accuracy), pct(r.macro_f1), r.total)
}

fn lexicon(args: &EvalLexiconArgs, config: &mut RunConfig) -> anyhow::Result<RunDir> {
    super::merge_lexicon_args(&args.lexicons, config);
    set(&mut config.paths.splits, args.splits.clone());
    set(&mut config.paths.corpus, args.corpus.clone());
    set(&mut config.paths.models, args.models.clone());
    let with_models = !args.majority;
    let mut inputs = super::lexicon_paths(config);
    if inputs.is_empty() {
        bail!("no lexicon given (use --power-agency and/or --sentiment)");
    }
    inputs.extend(config.paths.splits.as_deref());
    if with_models {
        inputs.push(require(&config.paths.corpus, "corpus", "--corpus (or pass --majority)")?);
        inputs.push(require(&config.paths.models, "model directory", "--models (or pass --majority)")?);
    }
    check_inputs(inputs)?;

    let corpus = if with_models { Some(super::load_corpus_from(config)?) } else { None };
    let lemmas = corpus.as_ref().map(LemmaTable::from_corpus).unwrap_or_default();
    let lexicons = super::load_lexicon_set(config, &lemmas)?;
    let models = match &config.paths.models {
        Some(dir) if with_models => Some(super::load_models(dir)?),
        _ => None,
    };
    let instances = corpus.as_ref().map(AnnotatedCorpus::embeddings_by_lemma);
    let dimensions: Vec<FrameDimension> = if args.dimensions.is_empty() {
        lexicons.lexicons.keys().copied().collect()
    } else {
        args.dimensions.clone()
    };

    let mut out = RunDir::create(config.out_dir())?;
    let mut results = BTreeMap::new();
    for d in dimensions {
        let Some(lexicon) = lexicons.get(d) else {
            bail!("no lexicon provides the {d} dimension");
        };
        let split = split_lexicon(lexicon, config.seed(), &super::train::split_policy(config, d))?;
        for w in &split.warnings {
            out.warn(w.clone());
        }
        let scoring = match (&models, &instances) {
            (Some(m), Some(i)) => {
                let model = m.get(d).with_context(|| format!("no {d} model in the model directory"))?;
                Some((model, i))
            }
            _ => None,
        };
        let result = evaluate_lexicon(&split.train, &split.test, scoring)?;
        if !result.skipped.is_empty() {
            out.warn(format!("{d}: {} test verbs do not occur in the corpus", result.skipped.len()));
        }
        out.say(report_line(d.as_str(), "majority", &result.majority));
        if let Some(r) = &result.type_level {
            out.say(report_line(d.as_str(), "type-level", r));
        }
        if let Some(r) = &result.token_level {
            out.say(report_line(d.as_str(), "token-level", r));
        }
        results.insert(d, result);
    }
    out.write_json("eval_lexicon.json", &results)?;
    Ok(out)
}

fn contextual(args: &EvalContextualArgs, config: &mut RunConfig) -> anyhow::Result<RunDir> {
    set(&mut config.paths.corpus, args.corpus.clone());
    set(&mut config.paths.models, args.models.clone());
    let perspectives: Vec<(FrameDimension, &Path)> = [
        (FrameDimension::SentimentAgent, args.agent_annotations.as_deref()),
        (FrameDimension::SentimentTheme, args.theme_annotations.as_deref()),
    ]
    .into_iter()
    .filter_map(|(d, p)| Some((d, p?)))
    .collect();
    if perspectives.is_empty() {
        bail!("no sentence annotations given (use --agent-annotations and/or --theme-annotations)");
    }
    let corpus_path = require(&config.paths.corpus, "corpus", "--corpus")?;
    check_inputs(
        perspectives
            .iter()
            .map(|(_, p)| *p)
            .chain([corpus_path])
            .chain(config.paths.models.as_deref())
            .chain(args.lemmas.as_deref()),
    )?;

    let corpus = super::load_corpus_from(config)?;
    let lemma_table = LemmaTable::from_corpus(&corpus);
    let models = config.paths.models.as_deref().map(super::load_models).transpose()?;
    let restrict: Option<BTreeSet<String>> = args
        .lemmas
        .as_deref()
        .map(|p| Ok::<_, anyhow::Error>(super::read_lines(p)?.iter().map(|l| lemma_table.lemma(l)).collect()))
        .transpose()?;
    let metric = match args.metric {
        MetricArg::Interval => DistanceMetric::Interval,
        MetricArg::Ordinal => DistanceMetric::Ordinal,
    };
    let contexts = sentence_embeddings(&corpus);
    let types = decontextualize_corpus(&corpus)?;

    let mut out = RunDir::create(config.out_dir())?;
    let mut results = BTreeMap::new();
    for (d, path) in perspectives {
        let annotations = load_sentence_annotations(path, &lemma_table)?;
        let agreement = compare_agreement(&annotations, restrict.as_ref(), metric)?;
        out.say(format!(
            "{d} alpha verb-pooled {:.4} ({} units) per-sentence {:.4} ({} units)",
            agreement.pooled, agreement.pooled_units, agreement.per_sentence, agreement.sentence_units
        ));
        let prediction = match models.as_ref().and_then(|m| m.get(d)) {
            None => None,
            Some(model) => {
                let lemmas = restrict
                    .clone()
                    .unwrap_or_else(|| annotations.iter().map(|a| a.lemma.clone()).collect());
                let gold = contextual_eval_split(&annotations, &lemmas)?;
                let report = evaluate_contextual(model, &gold, &contexts, &types, None)?;
                if !report.skipped.is_empty() {
                    out.warn(format!("{d}: {} annotated sentences not found in the corpus", report.skipped.len()));
                }
                out.say(report_line(d.as_str(), "verb-level", &report.verb_level));
                out.say(report_line(d.as_str(), "sentence-level", &report.sentence_level));
                Some(report)
            }
        };
        results.insert(d, serde_json::json!({ "agreement": agreement, "prediction": prediction }));
    }
    out.write_json("eval_contextual.json", &results)?;
    Ok(out)
}

/// Documents read by each step: everything listed at that step or earlier.
fn read_steps(path: &Path) -> anyhow::Result<BTreeMap<u32, BTreeSet<String>>> {
    let mut listed: BTreeMap<u32, Vec<String>> = BTreeMap::new();
    for (i, line) in super::read_lines(path)?.iter().enumerate() {
        let cols: Vec<&str> = line.split('\t').collect();
        if i == 0 && cols.first() == Some(&"step") {
            continue;
        }
        let [step, doc] = cols[..] else {
            bail!("{}: line {}: expected `step<TAB>document`", path.display(), i + 1);
        };
        let step: u32 = step
            .trim()
            .parse()
            .with_context(|| format!("{}: line {}: bad step {step:?}", path.display(), i + 1))?;
        listed.entry(step).or_default().push(doc.trim().to_string());
    }
    let mut seen = BTreeSet::new();
    Ok(listed
        .into_iter()
        .map(|(step, docs)| {
            seen.extend(docs);
            (step, seen.clone())
        })
        .collect())
}

fn power_scores(contributions: &[ScoreContribution], docs: Option<&BTreeSet<String>>) -> BTreeMap<String, f64> {
    let slice = SliceDescriptor {
        documents: docs.cloned(),
        ..SliceDescriptor::all()
    };
    build_profiles(contributions, &slice)
        .profiles
        .into_iter()
        .filter_map(|p| Some((p.entity.clone(), p.mean(EntityDimension::Power)?)))
        .collect()
}

fn entity(args: &EvalEntityArgs, config: &mut RunConfig) -> anyhow::Result<RunDir> {
    let rankings = args.rankings.as_deref().context("no rankings given (use --rankings)")?;
    if args.model_scores.is_none() && args.lexicon_scores.is_none() {
        bail!("give --model-scores and/or --lexicon-scores");
    }
    let mut inputs = vec![rankings.to_path_buf()];
    inputs.extend(args.steps.clone());
    for dir in [&args.model_scores, &args.lexicon_scores].into_iter().flatten() {
        inputs.extend(super::score_table_paths(dir));
    }
    check_inputs(inputs.iter().map(|p| p.as_path()))?;

    let annotations = load_rankings(rankings, args.scale)?;
    let agreed = agreed_ranks(&annotations, Some(args.max_rank_difference));
    let judgments = build_judgments(&agreed, None);
    let steps: BTreeSet<u32> = judgments.judgments.iter().map(|j| j.step).collect();
    let reads = args.steps.as_deref().map(read_steps).transpose()?;
    let docs_at = |step: u32| -> Option<BTreeSet<String>> {
        let reads = reads.as_ref()?;
        Some(reads.range(..=step).next_back().map(|(_, d)| d.clone()).unwrap_or_default())
    };

    let model = args.model_scores.as_deref().map(super::load_score_tables).transpose()?;
    let lexicon = args.lexicon_scores.as_deref().map(super::load_score_tables).transpose()?;
    let mut comparators: BTreeMap<Comparator, StepScores> = BTreeMap::new();
    for step in &steps {
        let docs = docs_at(*step);
        if let Some(t) = &model {
            comparators.entry(Comparator::Model).or_default().insert(*step, power_scores(&t.contributions, docs.as_ref()));
        }
        if let Some(t) = &lexicon {
            comparators
                .entry(Comparator::OffTheShelf)
                .or_default()
                .insert(*step, power_scores(&t.contributions, docs.as_ref()));
        }
        if let Some(t) = model.as_ref().or(lexicon.as_ref()) {
            let mut freq: BTreeMap<String, f64> = BTreeMap::new();
            for m in t.mentions.iter().filter(|m| docs.as_ref().is_none_or(|d| d.contains(&m.document))) {
                *freq.entry(m.entity.clone()).or_default() += m.mentions as f64;
            }
            comparators.entry(Comparator::Frequency).or_default().insert(*step, freq);
        }
    }

    let mut out = RunDir::create(config.out_dir())?;
    let agreement = match inter_annotator_spearman(&agreed) {
        Ok(s) => {
            out.say(format!("annotator spearman rho {:.4} p {:.3e} (n={})", s.rho, s.p_value, s.n));
            Some(s)
        }
        Err(e) => {
            out.warn(format!("annotator agreement unavailable: {e}"));
            None
        }
    };
    out.say(format!("judgments: {} (ties dropped: {})", judgments.judgments.len(), judgments.ties));
    let mut accuracy = BTreeMap::new();
    for c in Comparator::ALL {
        let Some(scores) = comparators.get(&c) else { continue };
        let acc = pairwise_power_accuracy(scores, &judgments.judgments)?;
        out.say(format!("{} accuracy {} ({}/{})", c.as_str(), pct(acc.accuracy), acc.correct, acc.total));
        if acc.missing > 0 {
            out.warn(format!("{}: {} judgments involve unscored entities", c.as_str(), acc.missing));
        }
        accuracy.insert(c, acc);
    }
    out.write_json(
        "eval_entity.json",
        &serde_json::json!({
            "agreement": agreement,
            "judgments": judgments.judgments.len(),
            "ties": judgments.ties,
            "accuracy": accuracy,
        }),
    )?;
    Ok(out)
}
