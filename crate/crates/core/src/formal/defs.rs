use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;

use thiserror::Error;

use super::point::PointSym;
use super::statement::{Statement, StatementError};
use crate::numeric::recipe::{ConstructionRecipe, RecipeError};

/// A constructive definition: introduces points from dependencies and
/// guarantees a set of symbolic facts about them.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DefinitionEntry {
    pub name: String,
    /// Header argument order; instantiation binds these positionally.
    pub params: Vec<PointSym>,
    pub introduced_points: Vec<PointSym>,
    pub dependency_points: Vec<PointSym>,
    pub emitted_statements: Vec<Statement>,
    /// One recipe per introduced point, in construction order.
    pub recipe: Vec<(PointSym, ConstructionRecipe)>,
    pub guards: Vec<Statement>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DefsError {
    #[error("line {line}: expected `name args...` header")]
    BadHeader { line: usize },
    #[error("definition `{name}`: unknown field `{field}`")]
    UnknownField { name: String, field: String },
    #[error("definition `{name}`: {source}")]
    Statement {
        name: String,
        #[source]
        source: StatementError,
    },
    #[error("definition `{name}`: {source}")]
    Recipe {
        name: String,
        #[source]
        source: RecipeError,
    },
    #[error("definition `{name}`: point `{point}` used before it is declared")]
    Undeclared { name: String, point: PointSym },
    #[error("definition `{name}`: introduced point `{point}` has no recipe")]
    MissingRecipe { name: String, point: PointSym },
    #[error("definition `{name}`: recipe assigns `{point}`, which is not introduced here")]
    StrayRecipe { name: String, point: PointSym },
    #[error("duplicate definition `{0}`")]
    Duplicate(String),
    #[error("definition `{name}`: bad point list: {detail}")]
    BadPoints { name: String, detail: String },
}

impl DefinitionEntry {
    fn validate(&self) -> Result<(), DefsError> {
        let name = || self.name.clone();
        for p in self
            .emitted_statements
            .iter()
            .chain(&self.guards)
            .flat_map(|s| s.points())
        {
            if !self.params.contains(&p) {
                return Err(DefsError::Undeclared { name: name(), point: p });
            }
        }
        let mut known: Vec<PointSym> = self.dependency_points.clone();
        for (target, recipe) in &self.recipe {
            if !self.introduced_points.contains(target) {
                return Err(DefsError::StrayRecipe { name: name(), point: *target });
            }
            if let Some(p) = recipe.points().into_iter().find(|p| !known.contains(p)) {
                return Err(DefsError::Undeclared { name: name(), point: p });
            }
            known.push(*target);
        }
        for p in &self.introduced_points {
            if !self.recipe.iter().any(|(t, _)| t == p) {
                return Err(DefsError::MissingRecipe { name: name(), point: *p });
            }
        }
        Ok(())
    }

    /// Writes the block form accepted by [`parse_defs`].
    pub fn to_block(&self) -> String {
        use core::fmt::Write;
        let mut s = String::new();
        let _ = write!(s, "{}", self.name);
        for p in &self.params {
            let _ = write!(s, " {p}");
        }
        s.push('\n');
        if !self.dependency_points.is_empty() {
            s.push_str("deps:");
            for p in &self.dependency_points {
                let _ = write!(s, " {p}");
            }
            s.push('\n');
        }
        let join = |v: &[Statement]| {
            v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join("; ")
        };
        if !self.emitted_statements.is_empty() {
            let _ = writeln!(s, "emit: {}", join(&self.emitted_statements));
        }
        let recipes: Vec<String> = self
            .recipe
            .iter()
            .map(|(p, r)| alloc::format!("{p} = {r}"))
            .collect();
        let _ = writeln!(s, "recipe: {}", recipes.join("; "));
        if !self.guards.is_empty() {
            let _ = writeln!(s, "guard: {}", join(&self.guards));
        }
        s
    }
}

impl fmt::Display for DefinitionEntry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_block())
    }
}

fn split_semis(s: &str) -> impl Iterator<Item = &str> {
    s.split(';').map(str::trim).filter(|x| !x.is_empty())
}

fn parse_block(header_line: usize, lines: &[&str]) -> Result<DefinitionEntry, DefsError> {
    let mut head = lines[0].split_whitespace();
    let name = head
        .next()
        .ok_or(DefsError::BadHeader { line: header_line })?
        .to_string();
    let params = head
        .map(|t| t.parse::<PointSym>())
        .collect::<Result<Vec<_>, _>>()
        .map_err(|e| DefsError::BadPoints { name: name.clone(), detail: e.to_string() })?;
    for (i, p) in params.iter().enumerate() {
        if params[..i].contains(p) {
            return Err(DefsError::BadPoints {
                name,
                detail: alloc::format!("`{p}` repeated in header"),
            });
        }
    }

    let mut deps = Vec::new();
    let mut emitted = Vec::new();
    let mut guards = Vec::new();
    let mut recipe_text: Option<&str> = None;
    for line in &lines[1..] {
        let (field, value) = line
            .split_once(':')
            .ok_or_else(|| DefsError::UnknownField { name: name.clone(), field: line.to_string() })?;
        let stmt = |s: &str| {
            Statement::parse(s).map_err(|source| DefsError::Statement { name: name.clone(), source })
        };
        match field.trim() {
            "deps" => {
                for t in value.split_whitespace() {
                    let p: PointSym = t
                        .parse()
                        .map_err(|e: super::point::BadPointName| DefsError::BadPoints {
                            name: name.clone(),
                            detail: e.to_string(),
                        })?;
                    if !params.contains(&p) {
                        return Err(DefsError::Undeclared { name, point: p });
                    }
                    deps.push(p);
                }
            }
            "emit" => {
                for s in split_semis(value) {
                    emitted.push(stmt(s)?);
                }
            }
            "guard" => {
                for s in split_semis(value) {
                    guards.push(stmt(s)?);
                }
            }
            "recipe" => recipe_text = Some(value.trim()),
            other => {
                return Err(DefsError::UnknownField { name, field: other.to_string() });
            }
        }
    }

    let introduced: Vec<PointSym> = params.iter().copied().filter(|p| !deps.contains(p)).collect();
    let mut recipe = Vec::new();
    if let Some(text) = recipe_text {
        for part in split_semis(text) {
            let (target, body) = match part.split_once('=') {
                Some((t, b)) => {
                    let t = t.trim().parse::<PointSym>().map_err(|e| DefsError::BadPoints {
                        name: name.clone(),
                        detail: e.to_string(),
                    })?;
                    (t, b)
                }
                None if introduced.len() == 1 => (introduced[0], part),
                None => {
                    return Err(DefsError::Recipe {
                        name,
                        source: RecipeError::Malformed(part.to_string()),
                    })
                }
            };
            let r = ConstructionRecipe::parse(body.trim())
                .map_err(|source| DefsError::Recipe { name: name.clone(), source })?;
            recipe.push((target, r));
        }
    }

    let entry = DefinitionEntry {
        name,
        params,
        introduced_points: introduced,
        dependency_points: deps,
        emitted_statements: emitted,
        recipe,
        guards,
    };
    entry.validate()?;
    Ok(entry)
}

/// Parses blank-line separated definition blocks:
///
/// ```text
/// midpoint x a b
/// deps: a b
/// emit: midp x a b; coll x a b; cong x a x b
/// recipe: x = midpoint(a, b)
/// ```
pub fn parse_defs(text: &str) -> Result<Vec<DefinitionEntry>, DefsError> {
    let mut out: Vec<DefinitionEntry> = Vec::new();
    let mut block: Vec<&str> = Vec::new();
    let mut block_start = 0;
    let flush = |block: &mut Vec<&str>, start: usize, out: &mut Vec<DefinitionEntry>| {
        if block.is_empty() {
            return Ok(());
        }
        let entry = parse_block(start, block)?;
        block.clear();
        if out.iter().any(|e| e.name == entry.name) {
            return Err(DefsError::Duplicate(entry.name));
        }
        out.push(entry);
        Ok(())
    };
    for (idx, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.starts_with('#') {
            continue;
        }
        if line.is_empty() {
            flush(&mut block, block_start, &mut out)?;
            continue;
        }
        if block.is_empty() {
            block_start = idx + 1;
        }
        block.push(line);
    }
    flush(&mut block, block_start, &mut out)?;
    Ok(out)
}
