//! `problem.json` and the text and SVG rendered from it.

use anyhow::{Context, Result};
use geomgen_core::formal::{DefinitionRepository, Statement};
use geomgen_core::generator::{set_seed, ExDefinitionSet, GenerationRequest, QualifiedProblem};
use geomgen_core::numeric::{mix_seed, NumericScene, SceneOptions};
use geomgen_core::render::{render_diagram, render_text, AnswerStep, TemplateSet};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RequestRecord {
    pub knowledge_points: Vec<String>,
    pub difficulty: String,
    pub seed: u64,
    pub max_candidates: usize,
    pub retry_budget: usize,
}

impl From<&GenerationRequest> for RequestRecord {
    fn from(r: &GenerationRequest) -> Self {
        RequestRecord {
            knowledge_points: r.knowledge_points.clone(),
            difficulty: r.difficulty.name().into(),
            seed: r.seed,
            max_candidates: r.max_candidates,
            retry_budget: r.retry_budget,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StepRecord {
    pub rule_id: String,
    pub antecedents: Vec<String>,
    pub derived: String,
}

/// Field order here is the key order on disk.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProblemRecord {
    pub request: RequestRecord,
    /// One construction clause per entry, e.g. `midpoint d c b`.
    pub exdefs: Vec<String>,
    /// Statements the clauses guarantee.
    pub clauses_formal: Vec<String>,
    pub question_formal: String,
    pub proof_steps: Vec<StepRecord>,
    pub used_rules: Vec<String>,
    pub step_count: usize,
    pub difficulty: String,
    pub seed: u64,
}

impl ProblemRecord {
    pub fn new(req: &GenerationRequest, p: &QualifiedProblem) -> Self {
        let dump = p.proof.dump();
        ProblemRecord {
            request: req.into(),
            exdefs: p.exd.clauses(),
            clauses_formal: p.exd.premises().iter().map(|s| s.to_string()).collect(),
            question_formal: dump.conclusion,
            proof_steps: dump
                .steps
                .into_iter()
                .map(|s| StepRecord { rule_id: s.rule_id, antecedents: s.antecedents, derived: s.derived })
                .collect(),
            used_rules: p.used_rules.clone(),
            step_count: p.proof.step_count(),
            difficulty: p.difficulty.name().into(),
            seed: p.seed,
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("record serializes");
        s.push('\n');
        s
    }

    pub fn exd(&self, repo: &DefinitionRepository) -> Result<ExDefinitionSet> {
        Ok(ExDefinitionSet::parse(repo, &self.exdefs.join("; "))?)
    }
}

fn statement(s: &str) -> Result<Statement> {
    Statement::parse(s).with_context(|| format!("bad statement `{s}`"))
}

/// Rendered artifacts of one problem.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Rendered {
    pub text: String,
    pub svg: String,
}

/// Rebuilds the scene from the clauses and renders text and diagram. Uses
/// only what `problem.json` holds, so re-rendering a saved problem gives
/// the same bytes as the run that produced it.
pub fn render_record(r: &ProblemRecord, repo: &DefinitionRepository, t: &TemplateSet) -> Result<Rendered> {
    let exd = r.exd(repo)?;
    let steps = r
        .proof_steps
        .iter()
        .map(|s| {
            Ok(AnswerStep {
                rule_id: s.rule_id.clone(),
                antecedents: s.antecedents.iter().map(|a| statement(a)).collect::<Result<_>>()?,
                derived: statement(&s.derived)?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let text = render_text(&exd, &statement(&r.question_formal)?, &steps, t)?.to_plain();
    let scene = scene_of(&exd)?;
    Ok(Rendered { text, svg: render_diagram(&exd, &scene) })
}

/// The scene generation saturates a set on.
pub fn scene_of(exd: &ExDefinitionSet) -> Result<NumericScene> {
    Ok(NumericScene::build(exd.entries(), mix_seed(set_seed(exd), 0), SceneOptions::default())?)
}
