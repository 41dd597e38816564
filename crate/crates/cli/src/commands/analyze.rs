use std::collections::{BTreeMap, BTreeSet};

use affectframe::analysis::{
    article_power_means, build_power_graph, entity_frequencies, most_frequent, pairwise_compare, top_entities,
    Direction,
};
use affectframe::scoring::{build_profiles, filter_profiles, DimensionScore, SliceDescriptor};
use affectframe::corpus::load_corpus;

use crate::args::{AnalyzeCommand, DirectionArg, GraphArgs, PairArgs, ScoresInput, TemporalArgs, TopArgs};
use crate::config::{check_inputs, require, set, RunConfig};
use crate::run::RunDir;
use super::{fmt_score, ScoreTables};

pub fn run(command: &AnalyzeCommand, config: &mut RunConfig) -> anyhow::Result<RunDir> {
    match command {
        AnalyzeCommand::Top(a) => top(a, config),
        AnalyzeCommand::Pair(a) => pair(a, config),
        AnalyzeCommand::Graph(a) => graph(a, config),
        AnalyzeCommand::Temporal(a) => temporal(a, config),
    }
}

/// Merges the shared flags, validates inputs and loads the score tables
/// together with the configured slice.
fn prepare(input: &ScoresInput, config: &mut RunConfig) -> anyhow::Result<(ScoreTables, SliceDescriptor)> {
    set(&mut config.paths.scores, input.scores.clone());
    set(&mut config.paths.corpus, input.corpus.clone());
    super::merge_slice_args(&input.slice, config);
    let dir = require(&config.paths.scores, "score directory", "--scores")?.to_path_buf();
    let mut inputs: Vec<_> = super::score_table_paths(&dir).into();
    if config.slice.keyword.is_some() {
        inputs.push(require(&config.paths.corpus, "corpus", "--corpus")?.to_path_buf());
    }
    inputs.extend(config.paths.exclusions.clone());
    check_inputs(inputs.iter().map(|p| p.as_path()))?;

    let tables = super::load_score_tables(&dir)?;
    let corpus = match (&config.slice.keyword, &config.paths.corpus) {
        (Some(_), Some(p)) => Some(load_corpus(p)?),
        _ => None,
    };
    let slice = super::slice_from(config, corpus.as_ref())?;
    Ok((tables, slice))
}

fn cell(score: Option<&DimensionScore>) -> (String, String) {
    match score {
        Some(s) => (fmt_score(s.mean), s.count.to_string()),
        None => (String::new(), "0".to_string()),
    }
}

fn top(args: &TopArgs, config: &mut RunConfig) -> anyhow::Result<RunDir> {
    set(&mut config.analysis.top_k, args.top_k);
    set(&mut config.analysis.min_count, args.min_count);
    let (tables, slice) = prepare(&args.input, config)?;
    let profiles = filter_profiles(&build_profiles(&tables.contributions, &slice), config.min_count());
    let proper = entity_frequencies(&tables.mentions, &slice, true);
    let direction = match args.direction {
        DirectionArg::Asc => Direction::Ascending,
        DirectionArg::Desc => Direction::Descending,
    };
    let ranked = top_entities(&profiles, &proper, config.top_k(), args.dimension, direction);

    let mut out = RunDir::create(config.out_dir())?;
    let mut table = String::from("rank\tentity\tmean\tcount\tfrequency\n");
    for (i, r) in ranked.iter().enumerate() {
        table.push_str(&format!("{}\t{}\t{}\t{}\t{}\n", i + 1, r.entity, fmt_score(r.mean), r.count, r.frequency));
    }
    out.write("top.tsv", table.as_bytes())?;
    out.say(table.trim_end());
    if ranked.is_empty() {
        out.warn(format!("no entity has at least {} {} contributions", config.min_count(), args.dimension));
    }
    Ok(out)
}

fn pair(args: &PairArgs, config: &mut RunConfig) -> anyhow::Result<RunDir> {
    set(&mut config.analysis.min_mentions, args.min_mentions);
    let (mut tables, slice) = prepare(&args.input, config)?;
    tables.contributions.retain(|c| slice.matches(&c.provenance));
    tables.mentions.retain(|m| slice.matches_document(&m.document, &m.outlet, m.timestamp));
    let cmp = pairwise_compare(
        &tables.contributions,
        &tables.mentions,
        &args.a,
        &args.b,
        args.dimension,
        config.min_mentions(),
    )?;

    let mut out = RunDir::create(config.out_dir())?;
    let mut table = String::from("outlet\ta_mentions\tb_mentions\ta_mean\ta_count\tb_mean\tb_count\n");
    for row in &cmp.rows {
        let (am, ac) = cell(row.a.as_ref());
        let (bm, bc) = cell(row.b.as_ref());
        table.push_str(&format!(
            "{}\t{}\t{}\t{am}\t{ac}\t{bm}\t{bc}\n",
            row.outlet.as_deref().unwrap_or("*"),
            row.a_mentions,
            row.b_mentions
        ));
    }
    out.write("pair.tsv", table.as_bytes())?;
    out.write_json("pair.json", &cmp)?;
    out.say(format!("{} vs {} on {} (outlets with >= {} mentions of both)", cmp.a, cmp.b, cmp.dimension, cmp.min_mentions));
    out.say(table.trim_end());
    Ok(out)
}

fn graph(args: &GraphArgs, config: &mut RunConfig) -> anyhow::Result<RunDir> {
    set(&mut config.analysis.top_k, args.top_k);
    set(&mut config.paths.exclusions, args.exclusions.clone());
    config.slice.exclude.extend(args.exclude.iter().cloned());
    let (tables, slice) = prepare(&args.input, config)?;
    let mut exclusions: BTreeSet<String> = config.slice.exclude.iter().cloned().collect();
    if let Some(p) = &config.paths.exclusions {
        exclusions.extend(super::read_lines(p)?);
    }
    let articles = article_power_means(&tables.contributions, &slice);
    let frequencies = entity_frequencies(&tables.mentions, &slice, false);
    let g = build_power_graph(&articles, &frequencies, config.top_k(), &exclusions);

    let mut out = RunDir::create(config.out_dir())?;
    out.write("graph.dot", g.to_dot().as_bytes())?;
    out.write_json("graph.json", &g)?;
    out.say(format!("nodes: {}", g.nodes.len()));
    out.say(format!("edges: {}", g.edges.len()));
    let mut ranked: Vec<_> = g.nodes.iter().collect();
    ranked.sort_by(|a, b| b.score.total_cmp(&a.score).then_with(|| a.entity.cmp(&b.entity)));
    for n in ranked {
        out.say(format!("{}\t{}", n.entity, fmt_score(n.score)));
    }
    Ok(out)
}

fn temporal(args: &TemporalArgs, config: &mut RunConfig) -> anyhow::Result<RunDir> {
    set(&mut config.analysis.cutoff, args.cutoff);
    set(&mut config.analysis.top_k, args.top_k);
    let (tables, slice) = prepare(&args.input, config)?;
    let cutoff = config.cutoff();
    let before = SliceDescriptor {
        until: Some(slice.until.map_or(cutoff, |u| u.min(cutoff))),
        ..slice.clone()
    };
    let after = SliceDescriptor {
        from: Some(slice.from.map_or(cutoff, |f| f.max(cutoff))),
        ..slice.clone()
    };
    let proper = entity_frequencies(&tables.mentions, &slice, true);
    let entities = most_frequent(&proper, config.top_k());
    let min_count = config.min_count();
    let side = |s: &SliceDescriptor| filter_profiles(&build_profiles(&tables.contributions, s), min_count);
    let (pb, pa) = (side(&before), side(&after));
    let documents = |s: &SliceDescriptor| -> usize {
        let ids: BTreeSet<&str> = tables
            .mentions
            .iter()
            .filter(|m| s.matches_document(&m.document, &m.outlet, m.timestamp))
            .map(|m| m.document.as_str())
            .collect();
        ids.len()
    };

    let mut out = RunDir::create(config.out_dir())?;
    let mut table = String::from("entity\tfrequency\tbefore_mean\tbefore_count\tafter_mean\tafter_count\tchange\n");
    let mut rows = BTreeMap::new();
    for e in &entities {
        let b = pb.get(e).and_then(|p| p.scores.get(&args.dimension));
        let a = pa.get(e).and_then(|p| p.scores.get(&args.dimension));
        let change = match (b, a) {
            (Some(b), Some(a)) => fmt_score(a.mean - b.mean),
            _ => String::new(),
        };
        let ((bm, bc), (am, ac)) = (cell(b), cell(a));
        table.push_str(&format!("{e}\t{}\t{bm}\t{bc}\t{am}\t{ac}\t{change}\n", proper[*e]));
        rows.insert(*e, (b.copied(), a.copied()));
    }
    out.write("temporal.tsv", table.as_bytes())?;
    out.write_json(
        "temporal.json",
        &serde_json::json!({
            "cutoff": cutoff,
            "dimension": args.dimension,
            "before_documents": documents(&before),
            "after_documents": documents(&after),
            "entities": rows,
        }),
    )?;
    out.say(format!(
        "cutoff {}: {} documents before, {} at or after",
        cutoff.to_rfc3339(),
        documents(&before),
        documents(&after)
    ));
    out.say(table.trim_end());
    Ok(out)
}
