//! Problem generation: sampled definition sets, their union, and the
//! qualification check applied to every candidate proof.

pub mod exdef;
mod generate;

use alloc::collections::BTreeSet;
use alloc::string::String;
use alloc::vec::Vec;

use crate::deduction::{costs, enumerate_conclusions, prune, traceback, DerivationKind, Engine, FactId, Origin, ProofPath, ProofState};
use crate::formal::{PointSym, Statement};
use crate::numeric::{mix_seed, NumericScene, SceneError, SceneOptions};

pub use exdef::{clause_text, minimal_set, sample_set, ExDefError, ExDefinitionSet};
pub use generate::{generate, Diagnostics, GenerateError, Generation, GenerationRequest, QualifiedProblem, RETRY_BUDGET};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum DifficultyBand {
    Easy,
    Moderate,
    Difficult,
}

impl DifficultyBand {
    pub fn name(self) -> &'static str {
        match self {
            DifficultyBand::Easy => "easy",
            DifficultyBand::Moderate => "moderate",
            DifficultyBand::Difficult => "difficult",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s.to_ascii_lowercase().as_str() {
            "easy" => Some(DifficultyBand::Easy),
            "moderate" => Some(DifficultyBand::Moderate),
            "difficult" => Some(DifficultyBand::Difficult),
            _ => None,
        }
    }
}

/// Under 10 steps is easy, 10 to 20 inclusive moderate, above 20 difficult.
pub fn classify_difficulty(step_count: usize) -> DifficultyBand {
    match step_count {
        0..=9 => DifficultyBand::Easy,
        10..=20 => DifficultyBand::Moderate,
        _ => DifficultyBand::Difficult,
    }
}

/// Stable seed for a definition set, so its scene can be rebuilt from the
/// set alone.
pub fn set_seed(exd: &ExDefinitionSet) -> u64 {
    // FNV-1a over the canonical text
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for b in exd.key().bytes() {
        h ^= b as u64;
        h = h.wrapping_mul(0x0000_0100_0000_01b3);
    }
    h
}

#[derive(Debug)]
pub enum SetFailure {
    Scene(SceneError),
    Limit,
}

/// Places the set and saturates it. The scene seed is mixed from the set
/// itself and `salt`.
pub fn saturate_set(exd: &ExDefinitionSet, engine: &Engine, salt: u64) -> Result<ProofState, SetFailure> {
    let scene = NumericScene::build(exd.entries(), mix_seed(set_seed(exd), salt), SceneOptions::default())
        .map_err(SetFailure::Scene)?;
    engine.saturate(&exd.premises(), &scene).map_err(|_| SetFailure::Limit)
}

/// Facts and rules reachable from `id` through cheapest derivations.
pub(crate) fn cheapest_ancestry(
    state: &ProofState,
    best: &[Option<usize>],
    id: FactId,
) -> (BTreeSet<FactId>, BTreeSet<usize>) {
    let mut seen: BTreeSet<FactId> = BTreeSet::new();
    let mut rules = BTreeSet::new();
    let mut stack = alloc::vec![id];
    while let Some(f) = stack.pop() {
        if !seen.insert(f) {
            continue;
        }
        let fact = state.fact(f);
        if fact.origin != Origin::Derived {
            continue;
        }
        let Some(k) = best[f as usize] else { continue };
        let d = &fact.derivations[k];
        if let DerivationKind::Rule { rule, .. } = d.kind {
            rules.insert(rule);
        }
        stack.extend(d.antecedents.iter().copied());
    }
    (seen, rules)
}

/// Indices of every rule on the cheapest derivation DAG of some
/// enumerated conclusion.
pub fn rules_on_tracebacks(state: &ProofState) -> BTreeSet<usize> {
    let (_, best) = costs(state);
    let mut seen: BTreeSet<FactId> = BTreeSet::new();
    let mut rules = BTreeSet::new();
    let mut stack: Vec<FactId> = enumerate_conclusions(state)
        .iter()
        .filter_map(|c| state.lookup(c))
        .collect();
    while let Some(f) = stack.pop() {
        if !seen.insert(f) {
            continue;
        }
        let fact = state.fact(f);
        if fact.origin != Origin::Derived {
            continue;
        }
        let Some(k) = best[f as usize] else { continue };
        let d = &fact.derivations[k];
        if let DerivationKind::Rule { rule, .. } = d.kind {
            rules.insert(rule);
        }
        stack.extend(d.antecedents.iter().copied());
    }
    rules
}

/// Outcome of the four qualification constraints.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Verdict {
    pub shortest: bool,
    pub knowledge_points: bool,
    pub clauses: bool,
    pub difficulty: bool,
}

impl Verdict {
    pub fn passed(&self) -> bool {
        self.shortest && self.knowledge_points && self.clauses && self.difficulty
    }
}

/// Checks a proof of `conclusion` drawn from `state` against the
/// requested knowledge points and band.
///
/// Shortness is judged against the saturated DAG: the step count must not
/// exceed the cheapest tree cost and must equal that of an independent
/// re-trace.
pub fn check(
    exd: &ExDefinitionSet,
    proof: &ProofPath,
    knowledge_points: &[String],
    band: DifficultyBand,
    state: &ProofState,
) -> Verdict {
    let steps = proof.step_count();
    let shortest = match state.lookup(&proof.conclusion) {
        Some(id) => {
            let (cost, _) = costs(state);
            let again = traceback(state, &proof.conclusion)
                .and_then(|dag| prune(&dag, &state.rules, &state.scene))
                .map(|p| p.step_count());
            steps as u64 <= cost[id as usize] && again == Ok(steps)
        }
        None => false,
    };
    let used = proof.used_rules();
    let knowledge_points = knowledge_points.iter().all(|k| used.contains(k));
    Verdict {
        shortest,
        knowledge_points,
        clauses: clauses_used(exd, proof),
        difficulty: steps >= 1 && classify_difficulty(steps) == band,
    }
}

/// Every entry must reach the proof: one of its points is mentioned by a
/// step, or one of its emissions is a leaf, or it places a point that a
/// reaching entry is built from.
pub fn clauses_used(exd: &ExDefinitionSet, proof: &ProofPath) -> bool {
    let mut points: BTreeSet<PointSym> = proof.conclusion.points().collect();
    for s in &proof.steps {
        points.extend(s.derived.points());
        for a in &s.antecedents {
            points.extend(a.points());
        }
    }
    let leaves: BTreeSet<Statement> = proof.leaves.iter().map(|(s, _)| s.canonical()).collect();
    clauses_reached(exd, &points, &leaves)
}

pub(crate) fn clauses_reached(exd: &ExDefinitionSet, points: &BTreeSet<PointSym>, leaves: &BTreeSet<Statement>) -> bool {
    let entries = exd.entries();
    let mut reached: Vec<bool> = entries
        .iter()
        .map(|e| {
            e.introduced.iter().any(|p| points.contains(p))
                || e.emitted.iter().any(|s| leaves.contains(&s.canonical()))
        })
        .collect();
    // later entries only read earlier ones, so one backward sweep closes
    for i in (0..entries.len()).rev() {
        if reached[i] {
            for j in 0..i {
                if entries[j].introduced.iter().any(|p| entries[i].deps.contains(p)) {
                    reached[j] = true;
                }
            }
        }
    }
    reached.into_iter().all(|r| r)
}
