//! `k2exd.jsonl`: one header line, then one `{kp, exdef}` record per line.

use std::path::Path;

use geomgen_core::deduction::Limits;
use geomgen_core::formal::DefinitionRepository;
use geomgen_core::generator::ExDefinitionSet;
use geomgen_core::table::{MappingTable, TableBuildConfig, TableStats};
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub const FORMAT_VERSION: u32 = 1;

#[derive(Debug, Error)]
pub enum TableIoError {
    #[error("cannot read table: {0}")]
    Io(#[from] std::io::Error),
    #[error("table is empty, expected a header line")]
    MissingHeader,
    #[error("table format version {found}, this build reads {FORMAT_VERSION}")]
    Version { found: u32 },
    #[error("line {line}: {detail}")]
    Malformed { line: usize, detail: String },
}

#[derive(Debug, Clone, Serialize, Deserialize)]
struct ConfigRecord {
    iterations: usize,
    n_max: usize,
    seed: u64,
    max_facts: usize,
    max_rounds: u32,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
struct StatsRecord {
    iterations: usize,
    degenerate: usize,
    limit_exceeded: usize,
    unproductive: usize,
    inserted: usize,
    duplicates: usize,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
struct Header {
    format_version: u32,
    build_config: ConfigRecord,
    stats: StatsRecord,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct Entry {
    kp: String,
    exdef: String,
}

fn header(t: &MappingTable) -> Header {
    let c = &t.config;
    let s = &t.stats;
    Header {
        format_version: FORMAT_VERSION,
        build_config: ConfigRecord {
            iterations: c.iterations,
            n_max: c.n_max,
            seed: c.seed,
            max_facts: c.limits.max_facts,
            max_rounds: c.limits.max_rounds,
        },
        stats: StatsRecord {
            iterations: s.iterations,
            degenerate: s.degenerate,
            limit_exceeded: s.limit_exceeded,
            unproductive: s.unproductive,
            inserted: s.inserted,
            duplicates: s.duplicates,
        },
    }
}

pub fn to_jsonl(t: &MappingTable) -> String {
    let mut out = serde_json::to_string(&header(t)).expect("header serializes");
    out.push('\n');
    for (kp, exd) in t.iter() {
        let e = Entry { kp: kp.to_string(), exdef: exd.to_string() };
        out.push_str(&serde_json::to_string(&e).expect("entry serializes"));
        out.push('\n');
    }
    out
}

pub fn from_jsonl(text: &str, repo: &DefinitionRepository) -> Result<MappingTable, TableIoError> {
    let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
    let (i, first) = lines.next().ok_or(TableIoError::MissingHeader)?;
    let malformed = |line: usize, detail: String| TableIoError::Malformed { line: line + 1, detail };
    // peek at the version before holding the rest of the header to this layout
    let raw: serde_json::Value = serde_json::from_str(first).map_err(|e| malformed(i, e.to_string()))?;
    let found = raw
        .get("format_version")
        .and_then(serde_json::Value::as_u64)
        .ok_or_else(|| malformed(i, "header has no format_version".into()))?;
    if found != FORMAT_VERSION as u64 {
        return Err(TableIoError::Version { found: found as u32 });
    }
    let h: Header = serde_json::from_value(raw).map_err(|e| malformed(i, e.to_string()))?;
    let c = h.build_config;
    let mut table = MappingTable::new(TableBuildConfig {
        iterations: c.iterations,
        n_max: c.n_max,
        seed: c.seed,
        limits: Limits { max_facts: c.max_facts, max_rounds: c.max_rounds },
    });
    let s = h.stats;
    table.stats = TableStats {
        iterations: s.iterations,
        degenerate: s.degenerate,
        limit_exceeded: s.limit_exceeded,
        unproductive: s.unproductive,
        inserted: s.inserted,
        duplicates: s.duplicates,
    };
    for (i, line) in lines {
        let e: Entry = serde_json::from_str(line).map_err(|e| malformed(i, e.to_string()))?;
        let exd = ExDefinitionSet::parse(repo, &e.exdef).map_err(|err| malformed(i, err.to_string()))?;
        table.insert(&e.kp, exd);
    }
    Ok(table)
}

pub fn save_table(t: &MappingTable, path: &Path) -> std::io::Result<()> {
    crate::fsio::write_atomic(path, to_jsonl(t).as_bytes())
}

pub fn load_table(path: &Path, repo: &DefinitionRepository) -> Result<MappingTable, TableIoError> {
    from_jsonl(&std::fs::read_to_string(path)?, repo)
}
