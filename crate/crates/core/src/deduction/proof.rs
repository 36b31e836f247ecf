use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use thiserror::Error;

use super::ar::{ArState, FactId, Subsystem};
use super::engine::{expand_triangle_relation, is_trivial};
use super::state::{DerivationKind, Origin, ProofState};
use crate::formal::{KnowledgeRule, Predicate, Statement};
use crate::numeric::NumericScene;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ProofError {
    #[error("`{0}` is a premise or was not derived")]
    NotDerived(String),
    #[error("replay failed at step {step}: {detail}")]
    BrokenProof { step: usize, detail: String },
}

/// How a single step was justified.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum StepKind {
    Rule { rule: usize, rule_id: String, binding: Vec<crate::formal::PointSym> },
    Algebraic(Subsystem),
}

impl StepKind {
    /// Rule id, or `AR` for algebraic steps.
    pub fn label(&self) -> &str {
        match self {
            StepKind::Rule { rule_id, .. } => rule_id,
            StepKind::Algebraic(_) => "AR",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProofStep {
    pub derived: Statement,
    pub kind: StepKind,
    pub antecedents: Vec<Statement>,
}

/// Ancestor derivation DAG of a conclusion, steps in post-order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProofDag {
    pub conclusion: Statement,
    /// Premises and numeric guards the steps rest on.
    pub leaves: Vec<(Statement, Origin)>,
    pub steps: Vec<ProofStep>,
}

/// A pruned, replay-checked proof.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProofPath {
    pub conclusion: Statement,
    pub leaves: Vec<(Statement, Origin)>,
    pub steps: Vec<ProofStep>,
}

impl ProofPath {
    pub fn step_count(&self) -> usize {
        self.steps.len()
    }

    /// Distinct rule ids used, in first-use order.
    pub fn used_rules(&self) -> Vec<String> {
        let mut out: Vec<String> = Vec::new();
        for s in &self.steps {
            let l = s.kind.label().to_string();
            if !out.contains(&l) {
                out.push(l);
            }
        }
        out
    }

    pub fn dump(&self) -> ProofDump {
        ProofDump {
            conclusion: self.conclusion.to_string(),
            steps: self
                .steps
                .iter()
                .map(|s| DumpStep {
                    rule_id: s.kind.label().to_string(),
                    antecedents: s.antecedents.iter().map(|a| a.to_string()).collect(),
                    derived: s.derived.to_string(),
                })
                .collect(),
        }
    }
}

/// Flat debug form of a proof.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProofDump {
    pub conclusion: String,
    pub steps: Vec<DumpStep>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DumpStep {
    pub rule_id: String,
    pub antecedents: Vec<String>,
    pub derived: String,
}

const INF: u64 = u64::MAX / 4;

/// Cheapest cumulative step count per fact, and the index of the
/// derivation achieving it. Ties go to the earliest derivation.
pub fn costs(state: &ProofState) -> (Vec<u64>, Vec<Option<usize>>) {
    let facts = state.facts();
    let mut cost: Vec<u64> = facts
        .iter()
        .map(|f| if f.origin == Origin::Derived { INF } else { 0 })
        .collect();
    let mut best: Vec<Option<usize>> = alloc::vec![None; facts.len()];
    loop {
        let mut changed = false;
        for (i, f) in facts.iter().enumerate() {
            if f.origin != Origin::Derived {
                continue;
            }
            for (k, d) in f.derivations.iter().enumerate() {
                let c = d
                    .antecedents
                    .iter()
                    .fold(1u64, |acc, &a| acc.saturating_add(cost[a as usize]))
                    .min(INF);
                if c < cost[i] {
                    cost[i] = c;
                    best[i] = Some(k);
                    changed = true;
                }
            }
        }
        if !changed {
            break;
        }
    }
    (cost, best)
}

fn step_kind(state: &ProofState, kind: &DerivationKind) -> StepKind {
    match kind {
        DerivationKind::Rule { rule, binding } => StepKind::Rule {
            rule: *rule,
            rule_id: state.rules[*rule].id.clone(),
            binding: binding.clone(),
        },
        DerivationKind::Algebraic(s) => StepKind::Algebraic(*s),
    }
}

// The justification picked for one fact of the DAG.
#[derive(Debug, Clone)]
struct Choice {
    kind: DerivationKind,
    antecedents: Vec<FactId>,
}

// Distinct derived facts under each fact, following `best`.
struct StepSets<'a> {
    state: &'a ProofState,
    best: &'a [Option<usize>],
    memo: BTreeMap<FactId, BTreeSet<FactId>>,
}

impl StepSets<'_> {
    fn get(&mut self, id: FactId) -> &BTreeSet<FactId> {
        if !self.memo.contains_key(&id) {
            // post-order without recursion
            let mut stack = alloc::vec![(id, false)];
            while let Some((f, expanded)) = stack.pop() {
                if self.memo.contains_key(&f) {
                    continue;
                }
                let fact = self.state.fact(f);
                let ants: &[FactId] = match (fact.origin, self.best[f as usize]) {
                    (Origin::Derived, Some(k)) => &fact.derivations[k].antecedents,
                    _ => &[],
                };
                if fact.origin != Origin::Derived {
                    self.memo.insert(f, BTreeSet::new());
                    continue;
                }
                if expanded {
                    let mut set: BTreeSet<FactId> = BTreeSet::new();
                    set.insert(f);
                    for a in ants {
                        if let Some(s) = self.memo.get(a) {
                            set.extend(s.iter().copied());
                        }
                    }
                    self.memo.insert(f, set);
                } else {
                    stack.push((f, true));
                    for &a in ants {
                        if !self.memo.contains_key(&a) {
                            stack.push((a, false));
                        }
                    }
                }
            }
        }
        &self.memo[&id]
    }

    fn score(&mut self, ants: &[FactId]) -> usize {
        let mut all: BTreeSet<FactId> = BTreeSet::new();
        for &a in ants {
            all.extend(self.get(a).iter().copied());
        }
        all.len() + 1
    }
}

// One tiered search: facts are fed in cost tiers until the target is
// implied, then the certificate is minimized greedily, dropping the facts
// that carry the most steps first.
fn tiered_search(
    state: &ProofState,
    goal: &Statement,
    order: &[FactId],
    cost: &[u64],
    sets: &mut StepSets<'_>,
) -> Option<(Subsystem, Vec<FactId>, usize)> {
    let scene = &state.scene;
    let mut ar = ArState::new(scene);
    let mut found = None;
    let mut k = 0;
    while k < order.len() {
        let tier = cost[order[k] as usize];
        while k < order.len() && cost[order[k] as usize] == tier {
            ar.insert(order[k], &state.fact(order[k]).statement);
            k += 1;
        }
        if let Some(c) = ar.query(goal) {
            found = Some(c);
            break;
        }
    }
    let cert = found?;
    if cert.facts.is_empty() {
        return None;
    }
    let mut facts = cert.facts;
    facts.sort_by_key(|&i| core::cmp::Reverse((sets.get(i).len(), cost[i as usize], i)));
    let mut i = 0;
    while i < facts.len() {
        let trial: Vec<FactId> = facts.iter().enumerate().filter(|(j, _)| *j != i).map(|(_, &f)| f).collect();
        let ar = ArState::from_facts(scene, trial.iter().map(|&f| &state.fact(f).statement));
        if !trial.is_empty() && ar.query(goal).is_some() {
            facts = trial;
        } else {
            i += 1;
        }
    }
    facts.sort_unstable();
    let score = sets.score(&facts);
    Some((cert.subsystem, facts, score))
}

const MAX_SEARCHES: usize = 12;

/// Algebraic certificate for `target` spanning fewer distinct steps than
/// `bound`. After a first search, each certificate fact in turn is banned
/// and the search repeated, keeping any improvement.
fn cheap_certificate(
    state: &ProofState,
    target: FactId,
    cost: &[u64],
    sets: &mut StepSets<'_>,
    bound: usize,
) -> Option<(Subsystem, Vec<FactId>, usize)> {
    let goal = state.fact(target).statement.clone();
    let mut candidates: Vec<FactId> = (0..state.len() as FactId)
        .filter(|&i| i != target && cost[i as usize] < INF && sets.get(i).len() + 1 < bound)
        .collect();
    candidates.sort_by_key(|&i| (cost[i as usize], i));
    let mut best = tiered_search(state, &goal, &candidates, cost, sets)?;
    let mut searches = 1;
    let mut banned: Vec<FactId> = Vec::new();
    'outer: loop {
        let mut ban_order = best.1.clone();
        ban_order.sort_by_key(|&i| core::cmp::Reverse((sets.get(i).len(), i)));
        for f in ban_order {
            if sets.get(f).is_empty() || banned.contains(&f) {
                continue;
            }
            if searches >= MAX_SEARCHES {
                break 'outer;
            }
            searches += 1;
            banned.push(f);
            let order: Vec<FactId> = candidates.iter().copied().filter(|i| *i != f).collect();
            if let Some(alt) = tiered_search(state, &goal, &order, cost, sets) {
                if alt.2 < best.2 {
                    best = alt;
                    continue 'outer;
                }
            }
        }
        break;
    }
    (best.2 < bound).then_some(best)
}

fn collect(state: &ProofState, goal: FactId, choice: &BTreeMap<FactId, Choice>) -> (Vec<FactId>, BTreeSet<FactId>) {
    let mut order: Vec<FactId> = Vec::new();
    let mut leaves: BTreeSet<FactId> = BTreeSet::new();
    let mut seen: BTreeSet<FactId> = BTreeSet::new();
    // iterative post-order
    let mut stack: Vec<(FactId, bool)> = alloc::vec![(goal, false)];
    while let Some((id, expanded)) = stack.pop() {
        if state.fact(id).origin != Origin::Derived {
            leaves.insert(id);
            continue;
        }
        if expanded {
            order.push(id);
            continue;
        }
        if !seen.insert(id) {
            continue;
        }
        stack.push((id, true));
        for &a in choice[&id].antecedents.iter().rev() {
            if !seen.contains(&a) {
                stack.push((a, false));
            }
        }
    }
    (order, leaves)
}

/// Extracts the cheapest ancestor DAG of `conclusion`. Each derived fact
/// keeps its cheapest recorded derivation unless a cheaper algebraic
/// certificate exists among lower-cost facts.
pub fn traceback(state: &ProofState, conclusion: &Statement) -> Result<ProofDag, ProofError> {
    let c = conclusion.canonical();
    let not_derived = || ProofError::NotDerived(c.to_string());
    let goal = state.lookup(&c).ok_or_else(not_derived)?;
    if state.fact(goal).origin != Origin::Derived {
        return Err(not_derived());
    }
    let (cost, best) = costs(state);
    if cost[goal as usize] >= INF {
        return Err(not_derived());
    }
    let mut sets = StepSets {
        state,
        best: &best,
        memo: BTreeMap::new(),
    };
    let mut choice: BTreeMap<FactId, Choice> = BTreeMap::new();
    let mut pending: Vec<FactId> = alloc::vec![goal];
    // settle choices top-down; a fact's antecedents are settled afterwards
    while let Some(id) = pending.pop() {
        if choice.contains_key(&id) || state.fact(id).origin != Origin::Derived {
            continue;
        }
        let f = state.fact(id);
        let d = &f.derivations[best[id as usize].expect("finite cost")];
        let mut pick = Choice {
            kind: d.kind.clone(),
            antecedents: d.antecedents.clone(),
        };
        let bound = sets.score(&pick.antecedents);
        if let Some((sub, facts, _)) = cheap_certificate(state, id, &cost, &mut sets, bound) {
            pick = Choice {
                kind: DerivationKind::Algebraic(sub),
                antecedents: facts,
            };
        }
        pending.extend(pick.antecedents.iter().rev().copied());
        choice.insert(id, pick);
    }
    let (order, leaves) = collect(state, goal, &choice);
    let steps = order
        .iter()
        .map(|&id| {
            let ch = &choice[&id];
            ProofStep {
                derived: state.fact(id).statement.clone(),
                kind: step_kind(state, &ch.kind),
                antecedents: ch.antecedents.iter().map(|&a| state.fact(a).statement.clone()).collect(),
            }
        })
        .collect();
    Ok(ProofDag {
        conclusion: c,
        leaves: leaves
            .into_iter()
            .map(|id| (state.fact(id).statement.clone(), state.fact(id).origin))
            .collect(),
        steps,
    })
}

/// Drops steps nothing downstream uses, then replays what is left.
pub fn prune(dag: &ProofDag, rules: &[KnowledgeRule], scene: &NumericScene) -> Result<ProofPath, ProofError> {
    let mut steps = dag.steps.clone();
    loop {
        let n = steps.len();
        let mut keep = alloc::vec![true; n];
        for i in 0..n {
            let s = &steps[i];
            let used = s.derived == dag.conclusion
                || steps[i + 1..].iter().any(|t| t.antecedents.contains(&s.derived));
            keep[i] = used;
        }
        if keep.iter().all(|&k| k) {
            break;
        }
        let mut it = keep.into_iter();
        steps.retain(|_| it.next().unwrap());
    }
    let used: BTreeSet<&Statement> = steps.iter().flat_map(|s| s.antecedents.iter()).collect();
    let leaves: Vec<(Statement, Origin)> = dag.leaves.iter().filter(|(s, _)| used.contains(s)).cloned().collect();
    let path = ProofPath {
        conclusion: dag.conclusion.clone(),
        leaves,
        steps,
    };
    replay(&path, rules, scene)?;
    Ok(path)
}

/// Re-derives every step from the leaves alone.
pub fn replay(path: &ProofPath, rules: &[KnowledgeRule], scene: &NumericScene) -> Result<(), ProofError> {
    let broken = |step: usize, detail: String| ProofError::BrokenProof { step, detail };
    let mut known: BTreeSet<Statement> = BTreeSet::new();
    for (s, origin) in &path.leaves {
        if *origin == Origin::Numeric && !scene.check(s) {
            return Err(broken(0, alloc::format!("guard `{s}` fails on the scene")));
        }
        known.insert(s.canonical());
    }
    for (i, step) in path.steps.iter().enumerate() {
        for a in &step.antecedents {
            if !known.contains(&a.canonical()) {
                return Err(broken(i, alloc::format!("antecedent `{a}` not yet established")));
            }
        }
        let derived = step.derived.canonical();
        match &step.kind {
            StepKind::Rule { rule, binding, .. } => {
                let r = rules.get(*rule).ok_or_else(|| broken(i, "unknown rule".to_string()))?;
                let vars = r.variables();
                if vars.len() != binding.len() {
                    return Err(broken(i, "binding arity".to_string()));
                }
                let map = |p| binding[vars.iter().position(|v| *v == p).unwrap()];
                for p in &r.premises {
                    let inst = p.map_points(map).canonical();
                    let ok = known.contains(&inst)
                        || (inst.predicate.is_numeric_guard() && scene.check(&inst))
                        || ArState::from_facts(scene, step.antecedents.iter()).query(&inst).is_some();
                    if !ok {
                        return Err(broken(i, alloc::format!("premise `{inst}` of {} unmet", r.id)));
                    }
                }
                let concl = r.conclusion.map_points(map);
                let mut produced = alloc::vec![concl.canonical()];
                produced.extend(expand_triangle_relation(&concl).iter().map(Statement::canonical));
                if !produced.contains(&derived) {
                    return Err(broken(i, alloc::format!("{} does not produce `{derived}`", r.id)));
                }
            }
            StepKind::Algebraic(_) => {
                let ar = ArState::from_facts(scene, step.antecedents.iter());
                if ar.query(&derived).is_none() {
                    return Err(broken(i, alloc::format!("`{derived}` not implied by its certificate")));
                }
            }
        }
        known.insert(derived);
    }
    if !known.contains(&path.conclusion.canonical()) {
        return Err(broken(path.steps.len(), "conclusion never derived".to_string()));
    }
    Ok(())
}

/// Derived facts worth posing as questions, deepest first.
pub fn enumerate_conclusions(state: &ProofState) -> Vec<Statement> {
    let (cost, _) = costs(state);
    let facts = state.facts();
    let mut out: Vec<(u64, String, Statement)> = Vec::new();
    for (i, f) in facts.iter().enumerate() {
        if f.origin != Origin::Derived || cost[i] >= INF || is_trivial(&f.statement) {
            continue;
        }
        let restatement = f.derivations.iter().any(|d| {
            matches!(d.kind, DerivationKind::Algebraic(_))
                && d.antecedents.len() == 1
                && facts[d.antecedents[0] as usize].origin == Origin::Premise
        });
        if restatement || f.statement.predicate == Predicate::Ncoll {
            continue;
        }
        out.push((cost[i], f.statement.to_string(), f.statement.clone()));
    }
    out.sort_by(|a, b| b.0.cmp(&a.0).then_with(|| a.1.cmp(&b.1)));
    out.into_iter().map(|(_, _, s)| s).collect()
}

/// Depth of every derived fact by its cheapest derivation.
pub fn depths(state: &ProofState) -> BTreeMap<Statement, u64> {
    let (cost, _) = costs(state);
    state
        .facts()
        .iter()
        .enumerate()
        .filter(|(i, _)| cost[*i] < INF)
        .map(|(i, f)| (f.statement.clone(), cost[i]))
        .collect()
}
