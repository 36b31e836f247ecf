use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use rand::seq::SliceRandom;
use rand::Rng;
use thiserror::Error;

use crate::formal::{premises, DefinitionEntry, DefinitionRepository, Instance, InstantiateError, PointSym, Statement};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ExDefError {
    #[error(transparent)]
    Instantiate(#[from] InstantiateError),
    #[error("`{clause}` reads `{point}` before it is introduced")]
    NotTopological { clause: String, point: PointSym },
    #[error("point `{0}` introduced twice")]
    DuplicatePoint(PointSym),
    #[error("merging forces `{0}` to degenerate")]
    MergeConflict(String),
}

/// An ordered construction: every entry reads only points introduced by
/// earlier entries.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExDefinitionSet {
    entries: Vec<Instance>,
}

impl ExDefinitionSet {
    pub fn new(entries: Vec<Instance>) -> Result<Self, ExDefError> {
        let mut known: BTreeSet<PointSym> = BTreeSet::new();
        for e in &entries {
            if let Some(&p) = e.deps.iter().find(|p| !known.contains(p)) {
                return Err(ExDefError::NotTopological { clause: clause_text(e), point: p });
            }
            for &p in &e.introduced {
                if !known.insert(p) {
                    return Err(ExDefError::DuplicatePoint(p));
                }
            }
        }
        Ok(ExDefinitionSet { entries })
    }

    /// Parses the `name args; name args` form written by `Display`.
    pub fn parse(repo: &DefinitionRepository, text: &str) -> Result<Self, ExDefError> {
        Self::new(repo.construction(text)?)
    }

    pub fn entries(&self) -> &[Instance] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Points in introduction order.
    pub fn points(&self) -> Vec<PointSym> {
        self.entries.iter().flat_map(|e| e.introduced.iter().copied()).collect()
    }

    pub fn premises(&self) -> Vec<Statement> {
        premises(&self.entries)
    }

    pub fn clauses(&self) -> Vec<String> {
        self.entries.iter().map(clause_text).collect()
    }

    /// Renames points to `a, b, c, ...` in introduction order.
    pub fn canonical(&self) -> Self {
        let map: BTreeMap<PointSym, PointSym> = self
            .points()
            .into_iter()
            .enumerate()
            .map(|(i, p)| (p, PointSym::nth(i)))
            .collect();
        ExDefinitionSet {
            entries: self.entries.iter().map(|e| rename(e, &map)).collect(),
        }
    }

    /// Serialization of the canonical form; equal keys mean equal sets
    /// up to point names.
    pub fn key(&self) -> String {
        alloc::string::ToString::to_string(&self.canonical())
    }
}

impl fmt::Display for ExDefinitionSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.clauses().join("; "))
    }
}

pub fn clause_text(e: &Instance) -> String {
    let mut s = e.name.clone();
    for p in &e.args {
        s.push(' ');
        s.push_str(&alloc::string::ToString::to_string(p));
    }
    s
}

fn rename(e: &Instance, map: &BTreeMap<PointSym, PointSym>) -> Instance {
    let f = |p: PointSym| *map.get(&p).unwrap_or(&p);
    Instance {
        name: e.name.clone(),
        args: e.args.iter().map(|&p| f(p)).collect(),
        introduced: e.introduced.iter().map(|&p| f(p)).collect(),
        deps: e.deps.iter().map(|&p| f(p)).collect(),
        emitted: e.emitted.iter().map(|s| s.map_points(f)).collect(),
        guards: e.guards.iter().map(|s| s.map_points(f)).collect(),
        recipe: e.recipe.iter().map(|(p, r)| (f(*p), r.map_points(f))).collect(),
    }
}

/// Draws `n` definitions uniformly and instantiates each on fresh points.
/// Dependencies come from points already placed; while too few exist,
/// base figures without dependencies are sampled first.
pub fn sample_set<R: Rng>(repo: &DefinitionRepository, n: usize, rng: &mut R) -> ExDefinitionSet {
    let mut b = Builder::default();
    let all = repo.entries();
    for _ in 0..n {
        let def = &all[rng.gen_range(0..all.len())];
        b.add(repo, def, rng);
    }
    ExDefinitionSet { entries: b.entries }
}

#[derive(Default)]
struct Builder {
    entries: Vec<Instance>,
    points: Vec<PointSym>,
}

impl Builder {
    fn fresh(&mut self) -> PointSym {
        PointSym::nth(self.points.len())
    }

    fn add<R: Rng>(&mut self, repo: &DefinitionRepository, def: &DefinitionEntry, rng: &mut R) {
        let need = def.dependency_points.len();
        while self.points.len() < need {
            let bases: Vec<&DefinitionEntry> = repo
                .entries()
                .iter()
                .filter(|e| e.dependency_points.is_empty())
                .collect();
            match bases.choose(rng) {
                Some(base) => self.place(base, &[]),
                None => return,
            }
        }
        let mut pool = self.points.clone();
        pool.shuffle(rng);
        pool.truncate(need);
        self.place(def, &pool);
    }

    fn place(&mut self, def: &DefinitionEntry, deps: &[PointSym]) {
        let mut args = Vec::with_capacity(def.params.len());
        let mut next = self.points.len();
        for p in &def.params {
            match def.dependency_points.iter().position(|d| d == p) {
                Some(i) => args.push(deps[i]),
                None => {
                    args.push(PointSym::nth(next));
                    next += 1;
                }
            }
        }
        let inst = crate::formal::repository::instantiate(def, &args).expect("fresh points");
        for &p in &inst.introduced {
            debug_assert_eq!(p, self.fresh());
            self.points.push(p);
        }
        self.entries.push(inst);
    }
}

/// Union of several sets. Entries with the same definition over the same
/// (already merged) dependencies collapse onto one copy, so sets that
/// start from the same base figure share its points. Entries that emit
/// nothing and feed no other entry are then dropped, and the result is
/// renamed canonically.
pub fn minimal_set(sets: &[ExDefinitionSet]) -> Result<ExDefinitionSet, ExDefError> {
    let mut merged: Vec<Instance> = Vec::new();
    for set in sets {
        let mut map: BTreeMap<PointSym, PointSym> = BTreeMap::new();
        let mut claimed: BTreeSet<usize> = BTreeSet::new();
        let mut next = merged.iter().flat_map(|e| e.introduced.iter()).count();
        for e in &set.entries {
            let deps: Vec<PointSym> = e.deps.iter().map(|p| map[p]).collect();
            let twin = merged
                .iter()
                .enumerate()
                .position(|(i, m)| !claimed.contains(&i) && m.name == e.name && m.deps == deps);
            if let Some(i) = twin {
                claimed.insert(i);
                for (a, b) in e.introduced.iter().zip(&merged[i].introduced) {
                    map.insert(*a, *b);
                }
                continue;
            }
            for &p in &e.introduced {
                map.insert(p, PointSym::nth(next));
                next += 1;
            }
            let r = rename(e, &map);
            let degenerate = r.emitted.iter().filter(|s| s.is_degenerate()).count();
            if degenerate > e.emitted.iter().filter(|s| s.is_degenerate()).count() {
                return Err(ExDefError::MergeConflict(clause_text(&r)));
            }
            claimed.insert(merged.len());
            merged.push(r);
        }
    }
    Ok(ExDefinitionSet::new(prune_orphans(merged))?.canonical())
}

fn prune_orphans(mut entries: Vec<Instance>) -> Vec<Instance> {
    loop {
        let read: BTreeSet<PointSym> = entries.iter().flat_map(|e| e.deps.iter().copied()).collect();
        let before = entries.len();
        entries.retain(|e| !e.emitted.is_empty() || e.introduced.iter().any(|p| read.contains(p)));
        if entries.len() == before {
            return entries;
        }
    }
}
