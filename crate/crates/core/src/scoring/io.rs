//! Tab-separated exports of contributions, profiles, and mention counts.

use std::io::{Read, Write};

use chrono::{DateTime, Utc};
use serde::{Deserialize, Serialize};

use crate::corpus::MentionRow;
use crate::error::{Error, Result};
use crate::label::{EntityDimension, Role};
use crate::scoring::{ProfileSet, Provenance, ScoreContribution};

#[derive(Serialize, Deserialize)]
struct ContributionRow {
    entity: String,
    dimension: EntityDimension,
    value: i8,
    document: String,
    outlet: String,
    timestamp: DateTime<Utc>,
    sentence: usize,
    token: usize,
    verb: String,
    role: Role,
}

fn writer<W: Write>(w: W) -> csv::Writer<W> {
    csv::WriterBuilder::new().delimiter(b'\t').from_writer(w)
}

fn reader<R: Read>(r: R) -> csv::Reader<R> {
    csv::ReaderBuilder::new().delimiter(b'\t').from_reader(r)
}

fn csv_err(e: csv::Error) -> Error {
    let line = e.position().map_or(0, |p| p.line() as usize);
    Error::record(line, "", e.to_string())
}

pub fn write_contributions<W: Write>(contributions: &[ScoreContribution], w: W) -> Result<()> {
    let mut out = writer(w);
    for c in contributions {
        let p = &c.provenance;
        out.serialize(ContributionRow {
            entity: c.entity.clone(),
            dimension: c.dimension,
            value: c.value,
            document: p.document.clone(),
            outlet: p.outlet.clone(),
            timestamp: p.timestamp,
            sentence: p.sentence,
            token: p.token,
            verb: p.verb.clone(),
            role: p.role,
        })
        .map_err(csv_err)?;
    }
    if contributions.is_empty() {
        out.write_record([
            "entity", "dimension", "value", "document", "outlet", "timestamp", "sentence", "token", "verb", "role",
        ])
        .map_err(csv_err)?;
    }
    out.flush().map_err(|e| Error::io("<contributions>", e))
}

pub fn read_contributions<R: Read>(r: R) -> Result<Vec<ScoreContribution>> {
    let mut out = Vec::new();
    for row in reader(r).deserialize::<ContributionRow>() {
        let row = row.map_err(csv_err)?;
        if !(-1..=1).contains(&row.value) {
            return Err(Error::OutOfRange(f64::from(row.value)));
        }
        out.push(ScoreContribution {
            entity: row.entity,
            dimension: row.dimension,
            value: row.value,
            provenance: Provenance {
                document: row.document,
                sentence: row.sentence,
                token: row.token,
                role: row.role,
                verb: row.verb,
                outlet: row.outlet,
                timestamp: row.timestamp,
            },
        });
    }
    Ok(out)
}

/// One row per (entity, dimension): `entity dimension mean count sum slice`.
pub fn write_profiles_tsv<W: Write>(set: &ProfileSet, w: W) -> Result<()> {
    let mut out = writer(w);
    out.write_record(["entity", "dimension", "mean", "count", "sum", "slice"])
        .map_err(csv_err)?;
    let slice = set.slice.describe();
    for p in &set.profiles {
        for (d, s) in &p.scores {
            out.write_record([
                p.entity.as_str(),
                d.as_str(),
                &s.mean.to_string(),
                &s.count.to_string(),
                &s.sum.to_string(),
                &slice,
            ])
            .map_err(csv_err)?;
        }
    }
    out.flush().map_err(|e| Error::io("<profiles>", e))
}

pub fn write_profiles_json<W: Write>(set: &ProfileSet, mut w: W) -> Result<()> {
    serde_json::to_writer_pretty(&mut w, set).map_err(|e| Error::Invalid(e.to_string()))?;
    w.write_all(b"\n").map_err(|e| Error::io("<profiles>", e))
}

pub fn write_mentions<W: Write>(rows: &[MentionRow], w: W) -> Result<()> {
    let mut out = writer(w);
    for r in rows {
        out.serialize(r).map_err(csv_err)?;
    }
    if rows.is_empty() {
        out.write_record(["document", "outlet", "timestamp", "entity", "mentions", "proper"])
            .map_err(csv_err)?;
    }
    out.flush().map_err(|e| Error::io("<mentions>", e))
}

pub fn read_mentions<R: Read>(r: R) -> Result<Vec<MentionRow>> {
    reader(r)
        .deserialize::<MentionRow>()
        .map(|row| row.map_err(csv_err))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scoring::{build_profiles, SliceDescriptor};

    fn sample() -> Vec<ScoreContribution> {
        vec![ScoreContribution {
            entity: "Tarana Burke".into(),
            dimension: EntityDimension::Power,
            value: -1,
            provenance: Provenance {
                document: "d1".into(),
                sentence: 2,
                token: 4,
                role: Role::Theme,
                verb: "praise".into(),
                outlet: "example.com".into(),
                timestamp: "2018-01-14T09:00:00Z".parse().unwrap(),
            },
        }]
    }

    #[test]
    fn contributions_round_trip() {
        let mut buf = Vec::new();
        write_contributions(&sample(), &mut buf).unwrap();
        let text = String::from_utf8(buf.clone()).unwrap();
        assert!(text.starts_with("entity\tdimension\tvalue\tdocument"));
        assert_eq!(read_contributions(buf.as_slice()).unwrap(), sample());
    }

    #[test]
    fn empty_log_keeps_its_header() {
        let mut buf = Vec::new();
        write_contributions(&[], &mut buf).unwrap();
        assert_eq!(String::from_utf8(buf.clone()).unwrap().lines().count(), 1);
        assert!(read_contributions(buf.as_slice()).unwrap().is_empty());
    }

    #[test]
    fn profile_rows_carry_the_slice() {
        let set = build_profiles(&sample(), &SliceDescriptor::all());
        let mut buf = Vec::new();
        write_profiles_tsv(&set, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(text.lines().nth(1), Some("Tarana Burke\tpower\t-1\t1\t-1\tall"));
    }
}
