use alloc::string::{String, ToString};
use alloc::vec::Vec;

use super::templates::{fill, upper, TemplateError, TemplateSet};
use crate::deduction::ProofPath;
use crate::formal::{Instance, Statement};
use crate::generator::{ExDefinitionSet, QualifiedProblem};

/// A problem in prose: construction clauses, the question, and one answer
/// sentence per proof step.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TextualProblem {
    pub clauses: Vec<String>,
    pub question: String,
    pub answer: Vec<String>,
}

impl TextualProblem {
    /// Clauses and question as one paragraph, then the numbered answer.
    pub fn to_plain(&self) -> String {
        let mut s = self.clauses.join(" ");
        s.push(' ');
        s.push_str(&self.question);
        s.push_str("\n\nProof:\n");
        for (i, a) in self.answer.iter().enumerate() {
            s.push_str(&alloc::format!("({}) {a}\n", i + 1));
        }
        s
    }
}

/// A proof step reduced to what the prose needs.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AnswerStep {
    /// Rule id, or `AR` for algebraic steps.
    pub rule_id: String,
    pub antecedents: Vec<Statement>,
    pub derived: Statement,
}

pub fn answer_steps(proof: &ProofPath) -> Vec<AnswerStep> {
    proof
        .steps
        .iter()
        .map(|s| AnswerStep {
            rule_id: s.kind.label().to_string(),
            antecedents: s.antecedents.clone(),
            derived: s.derived.clone(),
        })
        .collect()
}

pub fn render_statement(s: &Statement, t: &TemplateSet) -> Result<String, TemplateError> {
    let name = s.predicate.name();
    let tpl = t
        .by_predicate
        .get(name)
        .ok_or_else(|| TemplateError::MissingTemplate(alloc::format!("pred.{name}")))?;
    Ok(fill(tpl, &upper(&s.args)))
}

pub fn render_question(s: &Statement, t: &TemplateSet) -> Result<String, TemplateError> {
    let name = s.predicate.name();
    let tpl = t
        .questions
        .get(name)
        .ok_or_else(|| TemplateError::MissingTemplate(alloc::format!("question.{name}")))?;
    Ok(fill(tpl, &upper(&s.args)))
}

pub fn render_clause(e: &Instance, t: &TemplateSet) -> Result<String, TemplateError> {
    let tpl = t
        .by_definition
        .get(&e.name)
        .ok_or_else(|| TemplateError::MissingTemplate(alloc::format!("def.{}", e.name)))?;
    Ok(fill(tpl, &upper(&e.args)))
}

fn and_list(items: &[String]) -> String {
    match items {
        [] => String::new(),
        [one] => one.clone(),
        [init @ .., last] => alloc::format!("{} and {last}", init.join(", ")),
    }
}

pub fn render_step(step: &AnswerStep, t: &TemplateSet) -> Result<String, TemplateError> {
    let ante = step
        .antecedents
        .iter()
        .map(|a| render_statement(a, t))
        .collect::<Result<Vec<_>, _>>()?;
    let derived = render_statement(&step.derived, t)?;
    let (key, args) = if step.rule_id == "AR" {
        ("ar", alloc::vec![and_list(&ante), derived])
    } else {
        ("rule", alloc::vec![and_list(&ante), derived, step.rule_id.clone()])
    };
    let tpl = t
        .answers
        .get(key)
        .ok_or_else(|| TemplateError::MissingTemplate(alloc::format!("answer.{key}")))?;
    Ok(fill(tpl, &args))
}

pub fn render_text(
    exd: &ExDefinitionSet,
    conclusion: &Statement,
    steps: &[AnswerStep],
    t: &TemplateSet,
) -> Result<TextualProblem, TemplateError> {
    Ok(TextualProblem {
        clauses: exd.entries().iter().map(|e| render_clause(e, t)).collect::<Result<_, _>>()?,
        question: render_question(conclusion, t)?,
        answer: steps.iter().map(|s| render_step(s, t)).collect::<Result<_, _>>()?,
    })
}

pub fn render_problem(p: &QualifiedProblem, t: &TemplateSet) -> Result<TextualProblem, TemplateError> {
    render_text(&p.exd, &p.conclusion, &answer_steps(&p.proof), t)
}
