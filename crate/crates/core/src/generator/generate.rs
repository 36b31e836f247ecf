use alloc::collections::BTreeSet;
use alloc::string::String;
use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use super::{check, cheapest_ancestry, clauses_reached, classify_difficulty, minimal_set, saturate_set, DifficultyBand, ExDefinitionSet, SetFailure};
use crate::deduction::{costs, enumerate_conclusions, prune, traceback, Engine, Origin, ProofPath};
use crate::formal::Statement;
use crate::numeric::{mix_seed, NumericScene};
use crate::table::MappingTable;

/// Resampling rounds before giving up.
pub const RETRY_BUDGET: usize = 32;
/// Full tracebacks attempted per saturated set.
const TRACEBACKS_PER_SET: usize = 24;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GenerationRequest {
    pub knowledge_points: Vec<String>,
    pub difficulty: DifficultyBand,
    pub seed: u64,
    pub max_candidates: usize,
    pub retry_budget: usize,
}

impl GenerationRequest {
    pub fn new(knowledge_points: Vec<String>, difficulty: DifficultyBand, seed: u64) -> Self {
        GenerationRequest {
            knowledge_points,
            difficulty,
            seed,
            max_candidates: 4,
            retry_budget: RETRY_BUDGET,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GenerateError {
    #[error("unknown knowledge point `{0}`")]
    UnknownKP(String),
    #[error("request names no knowledge points")]
    Empty,
}

#[derive(Debug, Clone)]
pub struct QualifiedProblem {
    pub exd: ExDefinitionSet,
    pub conclusion: Statement,
    pub proof: ProofPath,
    pub used_rules: Vec<String>,
    pub scene: NumericScene,
    pub difficulty: DifficultyBand,
    /// Seed of the resampling round that produced the problem.
    pub seed: u64,
}

/// Failure counts of one request.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Diagnostics {
    pub rounds: usize,
    pub merge_conflicts: usize,
    pub degenerate: usize,
    pub limit_exceeded: usize,
    pub candidates: usize,
    /// Saturated sets where no conclusion's cheapest derivation uses every
    /// requested knowledge point, so nothing reached the check.
    pub uncovered_sets: usize,
    pub failed_shortest: usize,
    pub failed_knowledge_points: usize,
    pub failed_clauses: usize,
    pub failed_difficulty: usize,
}

#[derive(Debug, Clone)]
pub struct Generation {
    pub problems: Vec<QualifiedProblem>,
    pub diagnostics: Diagnostics,
}

/// Samples one set per requested knowledge point, merges them, saturates
/// the union and keeps the conclusions whose proofs pass [`check`].
/// Rounds are reseeded from `req.seed` until `max_candidates` problems
/// are found or the retry budget runs out.
pub fn generate(req: &GenerationRequest, table: &MappingTable, engine: &Engine) -> Result<Generation, GenerateError> {
    if req.knowledge_points.is_empty() {
        return Err(GenerateError::Empty);
    }
    let mut wanted: BTreeSet<usize> = BTreeSet::new();
    for kp in &req.knowledge_points {
        if table.get(kp).is_none_or(|s| s.is_empty()) {
            return Err(GenerateError::UnknownKP(kp.clone()));
        }
        if let Some(i) = engine.rules().iter().position(|r| &r.id == kp) {
            wanted.insert(i);
        }
    }
    let mut diag = Diagnostics::default();
    let mut problems: Vec<QualifiedProblem> = Vec::new();
    let mut tried: BTreeSet<String> = BTreeSet::new();
    for round in 0..req.retry_budget {
        if problems.len() >= req.max_candidates {
            break;
        }
        diag.rounds += 1;
        let seed = mix_seed(req.seed, round as u64);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let drawn: Vec<ExDefinitionSet> = req
            .knowledge_points
            .iter()
            .map(|kp| table.sample(kp, rng.gen()).expect("checked above").clone())
            .collect();
        let exd = match minimal_set(&drawn) {
            Ok(x) => x,
            Err(_) => {
                diag.merge_conflicts += 1;
                continue;
            }
        };
        if !tried.insert(exd.key()) {
            continue;
        }
        let state = match saturate_set(&exd, engine, 0) {
            Ok(s) => s,
            Err(SetFailure::Scene(_)) => {
                diag.degenerate += 1;
                continue;
            }
            Err(SetFailure::Limit) => {
                diag.limit_exceeded += 1;
                continue;
            }
        };
        let (_, best) = costs(&state);
        // cheap estimates from the cheapest-derivation DAG decide which
        // conclusions get a full traceback first
        let mut ranked: Vec<((bool, bool), Statement)> = Vec::new();
        for c in enumerate_conclusions(&state) {
            let id = state.lookup(&c).expect("enumerated");
            let (facts, rules) = cheapest_ancestry(&state, &best, id);
            if !wanted.is_subset(&rules) {
                continue;
            }
            let mut points = BTreeSet::new();
            let mut leaves = BTreeSet::new();
            let mut steps = 0;
            for &f in &facts {
                let fact = state.fact(f);
                points.extend(fact.statement.points());
                if fact.origin == Origin::Derived {
                    steps += 1;
                } else {
                    leaves.insert(fact.statement.clone());
                }
            }
            let covers = clauses_reached(&exd, &points, &leaves);
            ranked.push(((!covers, classify_difficulty(steps) != req.difficulty), c));
        }
        if ranked.is_empty() {
            diag.uncovered_sets += 1;
        }
        ranked.sort_by_key(|(k, _)| *k);
        for (_, c) in ranked.into_iter().take(TRACEBACKS_PER_SET) {
            if problems.len() >= req.max_candidates {
                break;
            }
            let Ok(proof) = traceback(&state, &c).and_then(|dag| prune(&dag, &state.rules, &state.scene)) else {
                continue;
            };
            diag.candidates += 1;
            let v = check(&exd, &proof, &req.knowledge_points, req.difficulty, &state);
            diag.failed_shortest += !v.shortest as usize;
            diag.failed_knowledge_points += !v.knowledge_points as usize;
            diag.failed_clauses += !v.clauses as usize;
            diag.failed_difficulty += !v.difficulty as usize;
            if v.passed() {
                problems.push(QualifiedProblem {
                    used_rules: proof.used_rules(),
                    difficulty: classify_difficulty(proof.step_count()),
                    exd: exd.clone(),
                    conclusion: c,
                    proof,
                    scene: state.scene.clone(),
                    seed,
                });
            }
        }
    }
    Ok(Generation { problems, diagnostics: diag })
}
