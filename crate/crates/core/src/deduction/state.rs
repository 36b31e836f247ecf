use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use super::ar::{ArState, FactId, Subsystem};
use crate::formal::{KnowledgeRule, PointSym, Statement};
use crate::numeric::NumericScene;

/// At most this many alternative derivations are kept per fact.
pub const MAX_DERIVATIONS: usize = 8;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Limits {
    pub max_facts: usize,
    pub max_rounds: u32,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            max_facts: 5000,
            max_rounds: 20,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Origin {
    /// Emitted by a construction; an axiom of the problem.
    Premise,
    /// A non-degeneracy condition read off the scene.
    Numeric,
    Derived,
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum DerivationKind {
    /// A catalog rule; `binding` maps rule variables to scene points in
    /// the rule's first-occurrence variable order.
    Rule { rule: usize, binding: Vec<PointSym> },
    Algebraic(Subsystem),
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Derivation {
    pub kind: DerivationKind,
    pub antecedents: Vec<FactId>,
}

#[derive(Debug, Clone)]
pub struct Fact {
    pub statement: Statement,
    pub origin: Origin,
    /// Saturation round in which the fact first appeared.
    pub round: u32,
    pub derivations: Vec<Derivation>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LimitKind {
    MaxFacts,
    MaxRounds,
}

/// The fact database of one saturation run.
#[derive(Debug, Clone)]
pub struct ProofState {
    pub(crate) facts: Vec<Fact>,
    pub(crate) index: BTreeMap<Statement, FactId>,
    pub scene: NumericScene,
    pub rules: Vec<KnowledgeRule>,
    pub limits: Limits,
    pub(crate) ar: ArState,
    pub(crate) round: u32,
    pub(crate) limit_hit: Option<LimitKind>,
    pub(crate) fired: alloc::collections::BTreeSet<(usize, Vec<PointSym>)>,
    /// Candidate facts dropped because the scene contradicted them.
    pub(crate) numeric_rejections: usize,
}

impl ProofState {
    pub fn new(scene: NumericScene, rules: Vec<KnowledgeRule>, limits: Limits) -> Self {
        let ar = ArState::new(&scene);
        ProofState {
            facts: Vec::new(),
            index: BTreeMap::new(),
            scene,
            rules,
            limits,
            ar,
            round: 0,
            limit_hit: None,
            fired: alloc::collections::BTreeSet::new(),
            numeric_rejections: 0,
        }
    }

    pub fn facts(&self) -> &[Fact] {
        &self.facts
    }

    pub fn fact(&self, id: FactId) -> &Fact {
        &self.facts[id as usize]
    }

    pub fn len(&self) -> usize {
        self.facts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.facts.is_empty()
    }

    pub fn rounds(&self) -> u32 {
        self.round
    }

    /// `None` if saturation reached a fixpoint, otherwise the limit that
    /// stopped it.
    pub fn limit_hit(&self) -> Option<LimitKind> {
        self.limit_hit
    }

    pub fn fired_len(&self) -> usize {
        self.fired.len()
    }

    pub fn numeric_rejections(&self) -> usize {
        self.numeric_rejections
    }

    pub fn is_complete(&self) -> bool {
        self.limit_hit.is_none()
    }

    pub fn lookup(&self, s: &Statement) -> Option<FactId> {
        self.index.get(&s.canonical()).copied()
    }

    pub fn contains(&self, s: &Statement) -> bool {
        self.lookup(s).is_some()
    }

    pub fn statements(&self) -> impl Iterator<Item = &Statement> {
        self.facts.iter().map(|f| &f.statement)
    }

    pub fn premise_ids(&self) -> impl Iterator<Item = FactId> + '_ {
        self.facts
            .iter()
            .enumerate()
            .filter(|(_, f)| f.origin == Origin::Premise)
            .map(|(i, _)| i as FactId)
    }

    pub fn ar(&self) -> &ArState {
        &self.ar
    }

    fn full(&mut self) -> bool {
        if self.facts.len() >= self.limits.max_facts {
            self.limit_hit = Some(LimitKind::MaxFacts);
            true
        } else {
            false
        }
    }

    fn push(&mut self, statement: Statement, origin: Origin, derivation: Option<Derivation>) -> FactId {
        let id = self.facts.len() as FactId;
        self.index.insert(statement.clone(), id);
        self.facts.push(Fact {
            statement,
            origin,
            round: self.round,
            derivations: derivation.into_iter().collect(),
        });
        id
    }

    /// Adds an axiom. Premises that are already derived facts are promoted.
    pub fn add_premise(&mut self, s: &Statement) -> FactId {
        let c = s.canonical();
        if let Some(&id) = self.index.get(&c) {
            let f = &mut self.facts[id as usize];
            f.origin = Origin::Premise;
            f.derivations.clear();
            return id;
        }
        self.push(c, Origin::Premise, None)
    }

    /// Records a derived fact, or an extra derivation of a known one.
    /// Returns the id and whether the fact is new.
    pub fn add_derived(&mut self, s: &Statement, d: Derivation) -> Option<(FactId, bool)> {
        let c = s.canonical();
        if let Some(&id) = self.index.get(&c) {
            let f = &mut self.facts[id as usize];
            // one derivation per rule or subsystem
            let same_source = |e: &Derivation| match (&e.kind, &d.kind) {
                (DerivationKind::Rule { rule: x, .. }, DerivationKind::Rule { rule: y, .. }) => x == y,
                (x, y) => x == y,
            };
            if f.origin == Origin::Derived
                && f.derivations.len() < MAX_DERIVATIONS
                && !d.antecedents.contains(&id)
                && !f.derivations.iter().any(same_source)
            {
                f.derivations.push(d);
            }
            return Some((id, false));
        }
        if self.full() {
            return None;
        }
        Some((self.push(c, Origin::Derived, Some(d)), true))
    }

    /// Makes a statement that currently holds available as a fact:
    /// guards are read off the scene, everything else needs an algebraic
    /// certificate. Returns `None` if it does not hold or is a tautology.
    pub fn ensure_fact(&mut self, s: &Statement) -> Option<FactId> {
        let c = s.canonical();
        if let Some(&id) = self.index.get(&c) {
            return Some(id);
        }
        if c.is_degenerate() || !self.scene.check(&c) {
            return None;
        }
        if c.predicate.is_numeric_guard() {
            if self.full() {
                return None;
            }
            return Some(self.push(c, Origin::Numeric, None));
        }
        let cert = self.ar.query(&c)?;
        if cert.facts.is_empty() {
            return None;
        }
        let d = Derivation {
            kind: DerivationKind::Algebraic(cert.subsystem),
            antecedents: cert.facts,
        };
        let (id, _) = self.add_derived(&c, d)?;
        Some(id)
    }

    /// Brings in a statement that is not yet a fact but follows
    /// algebraically from the current ones.
    pub fn admit(&mut self, s: &Statement) -> Option<FactId> {
        self.sync_ar();
        self.ensure_fact(s)
    }

    /// Feeds every fact not yet seen by the algebraic closures.
    pub(crate) fn sync_ar(&mut self) {
        for (i, f) in self.facts.iter().enumerate() {
            let id = i as FactId;
            if !self.ar.is_inserted(id) {
                self.ar.insert(id, &f.statement);
            }
        }
    }
}
