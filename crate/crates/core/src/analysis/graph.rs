use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::analysis::most_frequent;
use crate::label::EntityDimension;
use crate::scoring::{ScoreContribution, SliceDescriptor};

/// Document id to entity to mean power within that document.
pub type ArticlePower = BTreeMap<String, BTreeMap<String, f64>>;

/// Mean power contribution of each entity in each document of the slice.
pub fn article_power_means(contributions: &[ScoreContribution], slice: &SliceDescriptor) -> ArticlePower {
    let mut acc: BTreeMap<&str, BTreeMap<&str, (i64, usize)>> = BTreeMap::new();
    for c in contributions {
        if c.dimension != EntityDimension::Power || !slice.matches(&c.provenance) {
            continue;
        }
        let cell = acc
            .entry(&c.provenance.document)
            .or_default()
            .entry(&c.entity)
            .or_insert((0, 0));
        cell.0 += i64::from(c.value);
        cell.1 += 1;
    }
    acc.into_iter()
        .map(|(doc, entities)| {
            let means = entities
                .into_iter()
                .map(|(e, (sum, n))| (e.to_string(), sum as f64 / n as f64))
                .collect();
            (doc.to_string(), means)
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PowerNode {
    pub entity: String,
    /// Outgoing minus incoming edge weight.
    pub score: f64,
}

/// `source` is on average portrayed as more powerful than `target`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PowerEdge {
    pub source: String,
    pub target: String,
    pub weight: f64,
    pub articles: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PowerGraph {
    /// Sorted by entity name.
    pub nodes: Vec<PowerNode>,
    /// Sorted by (source, target).
    pub edges: Vec<PowerEdge>,
}

/// For every pair of selected entities sharing at least one article, the
/// signed difference of their article power means is averaged over the
/// shared articles. The edge points from the higher to the lower entity with
/// the magnitude as weight; zero differences produce no edge.
///
/// Entities are the `top_k` most frequent by `frequencies` (entities absent
/// from it count as zero mentions), after which `exclusions` are removed.
pub fn build_power_graph(
    articles: &ArticlePower,
    frequencies: &BTreeMap<String, usize>,
    top_k: usize,
    exclusions: &BTreeSet<String>,
) -> PowerGraph {
    let mut all: BTreeMap<String, usize> = articles
        .values()
        .flat_map(|m| m.keys())
        .map(|e| (e.clone(), 0))
        .collect();
    for (e, &n) in frequencies {
        if let Some(slot) = all.get_mut(e) {
            *slot = n;
        }
    }
    let selected: BTreeSet<&str> = most_frequent(&all, top_k)
        .into_iter()
        .filter(|e| !exclusions.contains(*e))
        .collect();

    // (a, b) with a < b: sum of (power_a - power_b) and shared article count
    let mut diffs: BTreeMap<(&str, &str), (f64, usize)> = BTreeMap::new();
    for means in articles.values() {
        let present: Vec<(&str, f64)> = means
            .iter()
            .filter(|(e, _)| selected.contains(e.as_str()))
            .map(|(e, &p)| (e.as_str(), p))
            .collect();
        for (i, &(a, pa)) in present.iter().enumerate() {
            for &(b, pb) in &present[i + 1..] {
                let cell = diffs.entry((a, b)).or_insert((0.0, 0));
                cell.0 += pa - pb;
                cell.1 += 1;
            }
        }
    }

    let mut scores: BTreeMap<&str, f64> = selected.iter().map(|&e| (e, 0.0)).collect();
    let mut edges = Vec::new();
    for ((a, b), (sum, n)) in diffs {
        let avg = sum / n as f64;
        if avg == 0.0 {
            continue;
        }
        let (source, target) = if avg > 0.0 { (a, b) } else { (b, a) };
        let weight = avg.abs();
        *scores.get_mut(source).expect("selected") += weight;
        *scores.get_mut(target).expect("selected") -= weight;
        edges.push(PowerEdge {
            source: source.to_string(),
            target: target.to_string(),
            weight,
            articles: n,
        });
    }
    edges.sort_by(|x, y| (&x.source, &x.target).cmp(&(&y.source, &y.target)));
    PowerGraph {
        nodes: scores
            .into_iter()
            .map(|(e, score)| PowerNode {
                entity: e.to_string(),
                score,
            })
            .collect(),
        edges,
    }
}

fn quote(s: &str) -> String {
    format!("\"{}\"", s.replace('\\', "\\\\").replace('"', "\\\""))
}

impl PowerGraph {
    pub fn node(&self, entity: &str) -> Option<&PowerNode> {
        self.nodes.iter().find(|n| n.entity == entity)
    }

    /// Graphviz rendering. Labels are rounded for display; the `score` and
    /// `power` attributes carry the exact values.
    pub fn to_dot(&self) -> String {
        let mut out = String::from("digraph power {\n");
        for n in &self.nodes {
            let label = format!("{}\\n{:.3}", n.entity.replace('"', "\\\""), n.score);
            let _ = writeln!(out, "  {} [label=\"{label}\", score={}];", quote(&n.entity), n.score);
        }
        for e in &self.edges {
            let _ = writeln!(
                out,
                "  {} -> {} [label=\"{:.3}\", power={}, articles={}];",
                quote(&e.source),
                quote(&e.target),
                e.weight,
                e.weight,
                e.articles
            );
        }
        out.push_str("}\n");
        out
    }
}
