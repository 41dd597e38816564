use std::collections::BTreeMap;
use std::path::Path;

use crate::corpus::AnnotatedCorpus;
use crate::error::{Error, Result};

/// Name-to-name rewrite table applied transitively.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct MergeMap {
    map: BTreeMap<String, String>,
}

impl MergeMap {
    /// Builds a map, rejecting cycles. Self-mappings are ignored.
    pub fn new<I, K, V>(pairs: I) -> Result<Self>
    where
        I: IntoIterator<Item = (K, V)>,
        K: Into<String>,
        V: Into<String>,
    {
        let map: BTreeMap<String, String> = pairs
            .into_iter()
            .map(|(k, v)| (k.into(), v.into()))
            .filter(|(k, v)| k != v)
            .collect();
        let merge = MergeMap { map };
        merge.check_cycles()?;
        Ok(merge)
    }

    /// Reads a two-column tab-separated file: `from<TAB>to`. Blank lines and
    /// lines starting with `#` are ignored.
    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        let mut pairs = Vec::new();
        for (i, line) in text.lines().enumerate() {
            let line = line.trim_end_matches('\r');
            if line.trim().is_empty() || line.starts_with('#') {
                continue;
            }
            let Some((from, to)) = line.split_once('\t') else {
                return Err(Error::record(i + 1, "merge map", "expected two tab-separated columns"));
            };
            pairs.push((from.trim().to_string(), to.trim().to_string()));
        }
        MergeMap::new(pairs)
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }

    fn check_cycles(&self) -> Result<()> {
        for start in self.map.keys() {
            let mut path = vec![start.clone()];
            let mut current = start;
            while let Some(next) = self.map.get(current) {
                if let Some(pos) = path.iter().position(|n| n == next) {
                    let mut cycle = path[pos..].to_vec();
                    cycle.push(next.clone());
                    return Err(Error::MergeCycle(cycle));
                }
                path.push(next.clone());
                current = next;
            }
        }
        Ok(())
    }

    /// Follows the chain of rewrites to its end.
    pub fn resolve<'a>(&'a self, name: &'a str) -> &'a str {
        let mut current = name;
        while let Some(next) = self.map.get(current) {
            current = next;
        }
        current
    }
}

/// Rewrites every mention's canonical name through `merge`.
pub fn canonicalize_entities(mut corpus: AnnotatedCorpus, merge: &MergeMap) -> AnnotatedCorpus {
    if merge.is_empty() {
        return corpus;
    }
    for doc in &mut corpus.documents {
        for m in &mut doc.mentions {
            let resolved = merge.resolve(&m.canonical_name);
            if resolved != m.canonical_name {
                m.canonical_name = resolved.to_string();
            }
        }
    }
    corpus
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn chains_resolve_transitively() {
        let m = MergeMap::new([("A", "B"), ("B", "C")]).unwrap();
        assert_eq!(m.resolve("A"), "C");
        assert_eq!(m.resolve("B"), "C");
        assert_eq!(m.resolve("C"), "C");
        assert_eq!(m.resolve("D"), "D");
    }

    #[test]
    fn cycles_are_reported() {
        match MergeMap::new([("A", "B"), ("B", "C"), ("C", "A")]) {
            Err(Error::MergeCycle(cycle)) => {
                assert_eq!(cycle.first(), cycle.last());
                assert_eq!(cycle.len(), 4);
            }
            other => panic!("expected a cycle, got {other:?}"),
        }
    }

    #[test]
    fn self_mapping_is_not_a_cycle() {
        let m = MergeMap::new([("A", "A")]).unwrap();
        assert!(m.is_empty());
    }
}
