//! `records.jsonl`: knowledge-point combinations to generate from.

use geomgen_core::formal::KnowledgeRule;
use geomgen_core::generator::DifficultyBand;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Source {
    Jgex231,
    Geoqa,
    Custom,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DatasetRecord {
    pub id: String,
    pub knowledge_points: Vec<String>,
    pub source: Source,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub difficulty: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DatasetError {
    #[error("line {line}: {detail}")]
    Malformed { line: usize, detail: String },
    #[error("line {line}: record `{id}` lists no knowledge points")]
    NoKnowledgePoints { line: usize, id: String },
    #[error("line {line}: unknown knowledge point {kp}")]
    UnknownKP { line: usize, kp: String },
    #[error("line {line}: unknown difficulty `{band}`")]
    BadDifficulty { line: usize, band: String },
}

impl DatasetRecord {
    /// The record's band, Easy when it names none.
    pub fn band(&self) -> DifficultyBand {
        self.difficulty.as_deref().and_then(DifficultyBand::parse).unwrap_or(DifficultyBand::Easy)
    }
}

/// Parses one record per non-blank line and checks every id against `rules`.
pub fn parse_records(text: &str, rules: &[KnowledgeRule]) -> Result<Vec<DatasetRecord>, DatasetError> {
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        if raw.trim().is_empty() {
            continue;
        }
        let r: DatasetRecord =
            serde_json::from_str(raw).map_err(|e| DatasetError::Malformed { line, detail: e.to_string() })?;
        if r.knowledge_points.is_empty() {
            return Err(DatasetError::NoKnowledgePoints { line, id: r.id });
        }
        if let Some(kp) = r.knowledge_points.iter().find(|k| !rules.iter().any(|x| &x.id == *k)) {
            return Err(DatasetError::UnknownKP { line, kp: kp.clone() });
        }
        if let Some(b) = &r.difficulty {
            if DifficultyBand::parse(b).is_none() {
                return Err(DatasetError::BadDifficulty { line, band: b.clone() });
            }
        }
        out.push(r);
    }
    Ok(out)
}
