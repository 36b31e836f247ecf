use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use thiserror::Error;

use super::point::PointSym;
use super::statement::{Statement, StatementError};

/// A knowledge point: premises over variables implying a conclusion.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KnowledgeRule {
    /// Stable id, `K_1` .. `K_43` for the shipped catalog.
    pub id: String,
    /// Short rule code naming the premise/conclusion shape.
    pub code: String,
    pub premises: Vec<Statement>,
    pub conclusion: Statement,
    pub description: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RuleError {
    #[error("line {line}: {source}")]
    Statement {
        line: usize,
        #[source]
        source: StatementError,
    },
    #[error("line {line}: missing `=>`")]
    MissingArrow { line: usize },
    #[error("line {line}: rule has no premises")]
    NoPremises { line: usize },
    #[error("line {line}: conclusion point `{point}` does not occur in any premise")]
    UnboundConclusion { line: usize, point: PointSym },
    #[error("line {line}: guard point `{point}` is not bound by a relational premise")]
    UnboundGuard { line: usize, point: PointSym },
    #[error("line {line}: duplicate rule id `{id}`")]
    DuplicateId { line: usize, id: String },
}

impl KnowledgeRule {
    /// Distinct variables in first-occurrence order across the premises.
    pub fn variables(&self) -> Vec<PointSym> {
        let mut vars = Vec::new();
        for p in &self.premises {
            for a in p.points() {
                if !vars.contains(&a) {
                    vars.push(a);
                }
            }
        }
        vars
    }

    /// One-line surface form, `id code: p1, p2 => c`.
    pub fn to_line(&self) -> String {
        let premises: Vec<String> = self.premises.iter().map(|p| p.to_string()).collect();
        let tag = if self.code.is_empty() {
            format!("{}:", self.id)
        } else {
            format!("{} {}:", self.id, self.code)
        };
        format!("{tag} {} => {}", premises.join(", "), self.conclusion)
    }
}

fn normalize_id(tag: &str) -> Option<String> {
    let t = tag.trim();
    let digits = t
        .strip_prefix("K_")
        .or_else(|| t.strip_prefix('K'))
        .or_else(|| t.strip_prefix("k_"))
        .or_else(|| t.strip_prefix('k'))?;
    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    let n: u32 = digits.parse().ok()?;
    Some(format!("K_{n}"))
}

/// Parses the rule file format:
///
/// ```text
/// #: optional description for the next rule
/// K_37 perp_perp_ncoll_para: perp a b c d, perp c d e f, ncoll a b e => para a b e f
/// ```
///
/// The `Kid [code]:` tag is optional; untagged rules get `K_<position>`.
pub fn parse_rules(text: &str) -> Result<Vec<KnowledgeRule>, RuleError> {
    let mut rules: Vec<KnowledgeRule> = Vec::new();
    let mut pending_desc = String::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let trimmed = raw.trim();
        if trimmed.is_empty() {
            continue;
        }
        if let Some(desc) = trimmed.strip_prefix("#:") {
            pending_desc = desc.trim().to_string();
            continue;
        }
        if trimmed.starts_with('#') {
            continue;
        }
        let (lhs, rhs) = trimmed
            .split_once("=>")
            .ok_or(RuleError::MissingArrow { line })?;

        let mut body = lhs;
        let mut id = None;
        let mut code = String::new();
        if let Some((tag, rest)) = lhs.split_once(':') {
            let mut parts = tag.split_whitespace();
            if let Some(first) = parts.next().and_then(normalize_id) {
                id = Some(first);
                code = parts.next().unwrap_or("").to_string();
                body = rest;
            }
        }
        let id = id.unwrap_or_else(|| format!("K_{}", rules.len() + 1));
        if rules.iter().any(|r| r.id == id) {
            return Err(RuleError::DuplicateId { line, id });
        }

        let stmt = |s: &str| Statement::parse(s).map_err(|source| RuleError::Statement { line, source });
        let premises = body
            .split(',')
            .map(str::trim)
            .filter(|s| !s.is_empty())
            .map(stmt)
            .collect::<Result<Vec<_>, _>>()?;
        if premises.is_empty() {
            return Err(RuleError::NoPremises { line });
        }
        let conclusion = stmt(rhs.trim())?;

        let bound: Vec<PointSym> = premises
            .iter()
            .filter(|p| !p.predicate.is_numeric_guard())
            .flat_map(|p| p.points())
            .collect();
        let all: Vec<PointSym> = premises.iter().flat_map(|p| p.points()).collect();
        if let Some(point) = conclusion.points().find(|p| !all.contains(p)) {
            return Err(RuleError::UnboundConclusion { line, point });
        }
        if let Some(point) = all.iter().copied().find(|p| !bound.contains(p)) {
            return Err(RuleError::UnboundGuard { line, point });
        }

        rules.push(KnowledgeRule {
            id,
            code,
            premises,
            conclusion,
            description: core::mem::take(&mut pending_desc),
        });
    }
    Ok(rules)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parallel_from_two_perpendiculars() {
        let rules = parse_rules("perp a b c d, perp c d e f, ncoll a b e => para a b e f").unwrap();
        assert_eq!(rules.len(), 1);
        assert_eq!(rules[0].premises.len(), 3);
        assert_eq!(rules[0].conclusion.to_string(), "para a b e f");
        assert_eq!(rules[0].id, "K_1");
    }

    #[test]
    fn empty_input() {
        assert!(parse_rules("").unwrap().is_empty());
        assert!(parse_rules("# only a comment\n\n").unwrap().is_empty());
    }

    #[test]
    fn midline_rule_with_tag() {
        let rules =
            parse_rules("#: midline\nK25 midp_midp_para_1: midp m a b, midp n a c => para m n b c")
                .unwrap();
        assert_eq!(rules[0].id, "K_25");
        assert_eq!(rules[0].code, "midp_midp_para_1");
        assert_eq!(rules[0].description, "midline");
        assert_eq!(rules[0].premises.len(), 2);
    }

    #[test]
    fn errors_carry_line_numbers() {
        let err = parse_rules("\n\nfoo a b => para a b a b").unwrap_err();
        assert!(matches!(err, RuleError::Statement { line: 3, .. }));
        let err = parse_rules("perp a b c => para a b c d").unwrap_err();
        assert!(matches!(err, RuleError::Statement { line: 1, .. }));
        let err = parse_rules("perp a b c d => para a b e f").unwrap_err();
        assert!(matches!(err, RuleError::UnboundConclusion { line: 1, .. }));
        let err = parse_rules("perp a b c d, ncoll a b z => para a b c d").unwrap_err();
        assert!(matches!(err, RuleError::UnboundGuard { line: 1, .. }));
        let err = parse_rules("perp a b c d para a b c d").unwrap_err();
        assert!(matches!(err, RuleError::MissingArrow { line: 1 }));
    }

    #[test]
    fn to_line_round_trips() {
        let text = "K_7 eqangle6_ncoll_cong: eqangle6 o a b a b o, ncoll o a b => cong o a o b";
        let rules = parse_rules(text).unwrap();
        assert_eq!(rules[0].to_line(), text);
        assert_eq!(parse_rules(&rules[0].to_line()).unwrap(), rules);
    }
}
