use alloc::collections::BTreeMap;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use thiserror::Error;

use crate::formal::{DefinitionRepository, PointSym, Predicate};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TemplateError {
    #[error("line {line}: expected `kind.name = template`")]
    Syntax { line: usize },
    #[error("line {line}: unknown template kind `{kind}`")]
    UnknownKind { line: usize, kind: String },
    #[error("line {line}: duplicate key `{key}`")]
    Duplicate { line: usize, key: String },
    #[error("`{key}` uses placeholder ${{{index}}} but takes {arity} arguments")]
    Dangling { key: String, index: usize, arity: usize },
    #[error("no template for: {}", .0.join(", "))]
    Uncovered(Vec<String>),
    #[error("missing template `{0}`")]
    MissingTemplate(String),
}

/// Sentence templates for one locale.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct TemplateSet {
    pub locale: String,
    pub by_predicate: BTreeMap<String, String>,
    pub questions: BTreeMap<String, String>,
    pub by_definition: BTreeMap<String, String>,
    pub answers: BTreeMap<String, String>,
}

const ANSWER_ARITY: [(&str, usize); 2] = [("rule", 3), ("ar", 2)];

impl TemplateSet {
    /// Parses `kind.name = template` lines and checks them against the
    /// predicate vocabulary and `repo`.
    pub fn parse(text: &str, repo: &DefinitionRepository) -> Result<Self, TemplateError> {
        let mut t = TemplateSet::default();
        let mut seen: BTreeMap<String, usize> = BTreeMap::new();
        for (i, raw) in text.lines().enumerate() {
            let line = i + 1;
            let s = raw.trim();
            if s.is_empty() || s.starts_with('#') {
                continue;
            }
            let (key, value) = s.split_once('=').ok_or(TemplateError::Syntax { line })?;
            let key = key.trim();
            let value = value.trim().to_string();
            let (kind, name) = key.split_once('.').ok_or(TemplateError::Syntax { line })?;
            if name.is_empty() {
                return Err(TemplateError::Syntax { line });
            }
            if seen.insert(key.to_string(), line).is_some() {
                return Err(TemplateError::Duplicate { line, key: key.to_string() });
            }
            let map = match kind {
                "meta" => {
                    if name == "locale" {
                        t.locale = value;
                    }
                    continue;
                }
                "pred" => &mut t.by_predicate,
                "question" => &mut t.questions,
                "def" => &mut t.by_definition,
                "answer" => &mut t.answers,
                _ => return Err(TemplateError::UnknownKind { line, kind: kind.to_string() }),
            };
            map.insert(name.to_string(), value);
        }
        t.validate(repo)?;
        Ok(t)
    }

    fn validate(&self, repo: &DefinitionRepository) -> Result<(), TemplateError> {
        let mut missing = Vec::new();
        let mut arities: Vec<(String, &String, usize)> = Vec::new();
        for p in Predicate::ALL {
            for (kind, map) in [("pred", &self.by_predicate), ("question", &self.questions)] {
                match map.get(p.name()) {
                    Some(v) => arities.push((alloc::format!("{kind}.{}", p.name()), v, p.arity())),
                    None => missing.push(alloc::format!("{kind}.{}", p.name())),
                }
            }
        }
        for e in repo.entries() {
            match self.by_definition.get(&e.name) {
                Some(v) => arities.push((alloc::format!("def.{}", e.name), v, e.params.len())),
                None => missing.push(alloc::format!("def.{}", e.name)),
            }
        }
        for (name, n) in ANSWER_ARITY {
            match self.answers.get(name) {
                Some(v) => arities.push((alloc::format!("answer.{name}"), v, n)),
                None => missing.push(alloc::format!("answer.{name}")),
            }
        }
        if !missing.is_empty() {
            return Err(TemplateError::Uncovered(missing));
        }
        for (key, template, arity) in arities {
            if let Some(index) = placeholders(template).into_iter().find(|&i| i >= arity) {
                return Err(TemplateError::Dangling { key, index, arity });
            }
        }
        Ok(())
    }

    /// Writes the set back in the form [`TemplateSet::parse`] reads.
    pub fn to_text(&self) -> String {
        let mut out = alloc::format!("meta.locale = {}\n", self.locale);
        for (kind, map) in [
            ("pred", &self.by_predicate),
            ("question", &self.questions),
            ("def", &self.by_definition),
            ("answer", &self.answers),
        ] {
            for (k, v) in map {
                out.push_str(&alloc::format!("{kind}.{k} = {v}\n"));
            }
        }
        out
    }
}

fn placeholders(template: &str) -> Vec<usize> {
    let mut out = Vec::new();
    let mut rest = template;
    while let Some(i) = rest.find("${") {
        rest = &rest[i + 2..];
        if let Some(j) = rest.find('}') {
            if let Ok(n) = rest[..j].parse() {
                out.push(n);
            }
            rest = &rest[j + 1..];
        }
    }
    out
}

/// Replaces `${i}` with `args[i]`.
pub fn fill(template: &str, args: &[String]) -> String {
    let mut out = String::new();
    let mut rest = template;
    while let Some(i) = rest.find("${") {
        out.push_str(&rest[..i]);
        let tail = &rest[i + 2..];
        match tail.find('}').and_then(|j| tail[..j].parse::<usize>().ok().map(|n| (j, n))) {
            Some((j, n)) => {
                out.push_str(args.get(n).map(String::as_str).unwrap_or(""));
                rest = &tail[j + 1..];
            }
            None => {
                out.push_str("${");
                rest = tail;
            }
        }
    }
    out.push_str(rest);
    out
}

pub(crate) fn upper(points: &[PointSym]) -> Vec<String> {
    points.iter().map(|p| p.upper()).collect()
}
