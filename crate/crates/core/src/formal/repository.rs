use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;

use thiserror::Error;

use super::defs::{parse_defs, DefinitionEntry, DefsError};
use super::point::PointSym;
use super::statement::Statement;
use crate::numeric::recipe::ConstructionRecipe;

/// Named lookup over a parsed definition file.
#[derive(Debug, Clone, Default)]
pub struct DefinitionRepository {
    entries: Vec<DefinitionEntry>,
    by_name: BTreeMap<String, usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum InstantiateError {
    #[error("unknown definition `{0}`")]
    Unknown(String),
    #[error("definition `{name}` takes {expected} points, got {got}")]
    Arity {
        name: String,
        expected: usize,
        got: usize,
    },
    #[error("definition `{0}` applied to repeated points")]
    RepeatedPoint(String),
    #[error("malformed clause `{0}`")]
    Malformed(String),
}

/// A definition applied to concrete scene points.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Instance {
    pub name: String,
    pub args: Vec<PointSym>,
    pub introduced: Vec<PointSym>,
    pub deps: Vec<PointSym>,
    pub emitted: Vec<Statement>,
    pub guards: Vec<Statement>,
    pub recipe: Vec<(PointSym, ConstructionRecipe)>,
}

impl DefinitionRepository {
    pub fn new(entries: Vec<DefinitionEntry>) -> Self {
        let by_name = entries
            .iter()
            .enumerate()
            .map(|(i, e)| (e.name.clone(), i))
            .collect();
        DefinitionRepository { entries, by_name }
    }

    pub fn parse(text: &str) -> Result<Self, DefsError> {
        parse_defs(text).map(Self::new)
    }

    pub fn get(&self, name: &str) -> Option<&DefinitionEntry> {
        self.by_name.get(name).map(|&i| &self.entries[i])
    }

    pub fn entries(&self) -> &[DefinitionEntry] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Binds the entry's header parameters to `args` positionally.
    pub fn instantiate(&self, name: &str, args: &[PointSym]) -> Result<Instance, InstantiateError> {
        let entry = self
            .get(name)
            .ok_or_else(|| InstantiateError::Unknown(name.into()))?;
        instantiate(entry, args)
    }
}

impl DefinitionRepository {
    /// Parses `name p1 p2 ...`.
    pub fn clause(&self, text: &str) -> Result<Instance, InstantiateError> {
        let mut it = text.split_whitespace();
        let name = it.next().ok_or_else(|| InstantiateError::Malformed(text.into()))?;
        let args = it
            .map(|t| t.parse::<PointSym>())
            .collect::<Result<Vec<_>, _>>()
            .map_err(|_| InstantiateError::Malformed(text.into()))?;
        self.instantiate(name, &args)
    }

    /// Parses `;`-separated clauses.
    pub fn construction(&self, text: &str) -> Result<Vec<Instance>, InstantiateError> {
        text.split(';')
            .map(str::trim)
            .filter(|c| !c.is_empty())
            .map(|c| self.clause(c))
            .collect()
    }
}

/// Canonical emitted statements of a construction, deduplicated in order.
pub fn premises(instances: &[Instance]) -> Vec<Statement> {
    let mut out: Vec<Statement> = Vec::new();
    for s in instances.iter().flat_map(|i| &i.emitted) {
        let c = s.canonical();
        if !c.is_degenerate() && !out.contains(&c) {
            out.push(c);
        }
    }
    out
}

pub fn instantiate(entry: &DefinitionEntry, args: &[PointSym]) -> Result<Instance, InstantiateError> {
    if args.len() != entry.params.len() {
        return Err(InstantiateError::Arity {
            name: entry.name.clone(),
            expected: entry.params.len(),
            got: args.len(),
        });
    }
    // dependencies may coincide; an introduced point must be fresh
    let repeated = entry.params.iter().enumerate().any(|(i, p)| {
        entry.introduced_points.contains(p) && args.iter().enumerate().any(|(j, q)| j != i && *q == args[i])
    });
    if repeated {
        return Err(InstantiateError::RepeatedPoint(entry.name.clone()));
    }
    let map = |p: PointSym| {
        let i = entry.params.iter().position(|q| *q == p).expect("validated");
        args[i]
    };
    Ok(Instance {
        name: entry.name.clone(),
        args: args.to_vec(),
        introduced: entry.introduced_points.iter().map(|&p| map(p)).collect(),
        deps: entry.dependency_points.iter().map(|&p| map(p)).collect(),
        emitted: entry.emitted_statements.iter().map(|s| s.map_points(map)).collect(),
        guards: entry.guards.iter().map(|s| s.map_points(map)).collect(),
        recipe: entry
            .recipe
            .iter()
            .map(|(p, r)| (map(*p), r.map_points(map)))
            .collect(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::string::ToString;

    #[test]
    fn instantiate_midpoint() {
        let repo = DefinitionRepository::parse(
            "midpoint x a b\ndeps: a b\nemit: midp x a b\nrecipe: x = midpoint(a, b)",
        )
        .unwrap();
        let p = |s: &str| s.parse::<PointSym>().unwrap();
        let inst = repo.instantiate("midpoint", &[p("c"), p("b"), p("a")]).unwrap();
        assert_eq!(inst.introduced, [p("c")]);
        assert_eq!(inst.emitted[0].to_string(), "midp c b a");
        assert_eq!(inst.recipe[0].1.to_string(), "midpoint(b, a)");
        assert!(matches!(
            repo.instantiate("midpoint", &[p("a"), p("a"), p("b")]),
            Err(InstantiateError::RepeatedPoint(_))
        ));
        assert!(repo.instantiate("nope", &[]).is_err());
    }
}
