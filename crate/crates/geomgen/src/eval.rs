//! Batch generation over a dataset and the automatic metric report.

use std::time::Instant;

use anyhow::{anyhow, Result};
use geomgen_core::deduction::{prune, replay, traceback, Engine};
use geomgen_core::formal::{DefinitionRepository, Statement};
use geomgen_core::generator::{check, generate, saturate_set, DifficultyBand, Diagnostics, GenerationRequest};
use geomgen_core::numeric::mix_seed;
use geomgen_core::table::MappingTable;
use serde::Serialize;

use crate::dataset::{DatasetRecord, Source};
use crate::problem::{ProblemRecord, StepRecord};

pub const HUMAN_ONLY: &str = "requires human evaluation";

/// Outcome of checking a saved problem from scratch.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Recheck {
    /// The stored proof is what a fresh traceback yields, and it replays.
    pub sound: bool,
    pub shortest: bool,
    pub clauses: bool,
    pub knowledge_points: bool,
    pub difficulty: bool,
}

/// Re-saturates the problem's clauses, traces the question back again and
/// runs the qualification check on the fresh state. Reads nothing but the
/// record, so it shares no state with the run that produced it.
pub fn recheck(r: &ProblemRecord, repo: &DefinitionRepository, engine: &Engine) -> Result<Recheck> {
    let exd = r.exd(repo)?;
    let state = saturate_set(&exd, engine, 0).map_err(|e| anyhow!("clauses no longer saturate: {e:?}"))?;
    let goal = Statement::parse(&r.question_formal)?;
    let proof = prune(&traceback(&state, &goal)?, &state.rules, &state.scene)?;
    let band = DifficultyBand::parse(&r.request.difficulty).ok_or_else(|| anyhow!("bad band"))?;
    let v = check(&exd, &proof, &r.request.knowledge_points, band, &state);
    let dump = proof.dump();
    let same: Vec<StepRecord> = dump
        .steps
        .into_iter()
        .map(|s| StepRecord { rule_id: s.rule_id, antecedents: s.antecedents, derived: s.derived })
        .collect();
    let sound = same == r.proof_steps
        && proof.step_count() == r.step_count
        && replay(&proof, &state.rules, &state.scene).is_ok();
    Ok(Recheck {
        sound,
        shortest: v.shortest,
        clauses: v.clauses,
        knowledge_points: v.knowledge_points,
        difficulty: v.difficulty && band.name() == r.difficulty,
    })
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct DiagnosticsRecord {
    pub rounds: usize,
    pub merge_conflicts: usize,
    pub degenerate: usize,
    pub limit_exceeded: usize,
    pub candidates: usize,
    pub uncovered_sets: usize,
    pub failed_shortest: usize,
    pub failed_knowledge_points: usize,
    pub failed_clauses: usize,
    pub failed_difficulty: usize,
}

impl From<&Diagnostics> for DiagnosticsRecord {
    fn from(d: &Diagnostics) -> Self {
        DiagnosticsRecord {
            rounds: d.rounds,
            merge_conflicts: d.merge_conflicts,
            degenerate: d.degenerate,
            limit_exceeded: d.limit_exceeded,
            candidates: d.candidates,
            uncovered_sets: d.uncovered_sets,
            failed_shortest: d.failed_shortest,
            failed_knowledge_points: d.failed_knowledge_points,
            failed_clauses: d.failed_clauses,
            failed_difficulty: d.failed_difficulty,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct RecordOutcome {
    pub id: String,
    pub source: Source,
    pub knowledge_points: Vec<String>,
    pub difficulty: String,
    pub qualified_count: usize,
    /// Set when the request could not run at all, e.g. a point the table lacks.
    pub error: Option<String>,
    pub diagnostics: DiagnosticsRecord,
    pub rechecks: Vec<Recheck>,
    pub seconds: f64,
}

/// Rates over all accepted problems; `None` when nothing was accepted.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Metrics {
    #[serde(rename = "NS")]
    pub ns: Option<f64>,
    #[serde(rename = "CC")]
    pub cc: Option<f64>,
    #[serde(rename = "CKP")]
    pub ckp: Option<f64>,
    #[serde(rename = "CD")]
    pub cd: Option<f64>,
}

#[derive(Debug, Clone, Serialize)]
pub struct HumanMetrics {
    #[serde(rename = "GF")]
    pub gf: &'static str,
    #[serde(rename = "LC")]
    pub lc: &'static str,
    #[serde(rename = "DC")]
    pub dc: &'static str,
    #[serde(rename = "CS")]
    pub cs: &'static str,
}

#[derive(Debug, Clone, Serialize)]
pub struct EvalReport {
    pub records: Vec<RecordOutcome>,
    pub attempted: usize,
    /// Records with at least one accepted problem.
    pub qualified_records: usize,
    pub accepted_problems: usize,
    pub metrics: Metrics,
    pub human_metrics: HumanMetrics,
    pub total_seconds: f64,
}

impl EvalReport {
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }
}

#[derive(Debug, Clone, Copy)]
pub struct EvalConfig {
    pub seed: u64,
    pub max_candidates: usize,
    pub retry_budget: usize,
}

fn rate(checks: &[Recheck], f: impl Fn(&Recheck) -> bool) -> Option<f64> {
    if checks.is_empty() {
        return None;
    }
    Some(checks.iter().filter(|c| f(c)).count() as f64 / checks.len() as f64)
}

/// Record `i` generates with seed `mix_seed(cfg.seed, i)`.
pub fn evaluate(
    records: &[DatasetRecord],
    table: &MappingTable,
    repo: &DefinitionRepository,
    engine: &Engine,
    cfg: EvalConfig,
) -> EvalReport {
    let start = Instant::now();
    let mut outcomes = Vec::new();
    for (i, rec) in records.iter().enumerate() {
        let t = Instant::now();
        let mut req = GenerationRequest::new(rec.knowledge_points.clone(), rec.band(), mix_seed(cfg.seed, i as u64));
        req.max_candidates = cfg.max_candidates;
        req.retry_budget = cfg.retry_budget;
        let mut out = RecordOutcome {
            id: rec.id.clone(),
            source: rec.source,
            knowledge_points: rec.knowledge_points.clone(),
            difficulty: rec.band().name().into(),
            qualified_count: 0,
            error: None,
            diagnostics: DiagnosticsRecord::default(),
            rechecks: Vec::new(),
            seconds: 0.0,
        };
        match generate(&req, table, engine) {
            Ok(g) => {
                out.qualified_count = g.problems.len();
                out.diagnostics = (&g.diagnostics).into();
                for p in &g.problems {
                    let r = ProblemRecord::new(&req, p);
                    // a recheck that cannot even run counts as failing everything
                    out.rechecks.push(recheck(&r, repo, engine).unwrap_or(Recheck {
                        sound: false,
                        shortest: false,
                        clauses: false,
                        knowledge_points: false,
                        difficulty: false,
                    }));
                }
            }
            Err(e) => out.error = Some(e.to_string()),
        }
        out.seconds = t.elapsed().as_secs_f64();
        outcomes.push(out);
    }
    let all: Vec<Recheck> = outcomes.iter().flat_map(|o| o.rechecks.iter().copied()).collect();
    EvalReport {
        attempted: outcomes.len(),
        qualified_records: outcomes.iter().filter(|o| o.qualified_count > 0).count(),
        accepted_problems: all.len(),
        metrics: Metrics {
            ns: rate(&all, |c| c.sound && c.shortest),
            cc: rate(&all, |c| c.clauses),
            ckp: rate(&all, |c| c.knowledge_points),
            cd: rate(&all, |c| c.difficulty),
        },
        human_metrics: HumanMetrics { gf: HUMAN_ONLY, lc: HUMAN_ONLY, dc: HUMAN_ONLY, cs: HUMAN_ONLY },
        records: outcomes,
        total_seconds: start.elapsed().as_secs_f64(),
    }
}
