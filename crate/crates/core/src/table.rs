//! The knowledge point to definition-set mapping table: offline build and
//! seeded lookup.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::String;
use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::deduction::{Engine, Limits};
use crate::formal::{DefinitionRepository, KnowledgeRule};
use crate::generator::{minimal_set, rules_on_tracebacks, sample_set, saturate_set, ExDefinitionSet, SetFailure};
use crate::numeric::mix_seed;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TableBuildConfig {
    pub iterations: usize,
    pub n_max: usize,
    pub seed: u64,
    pub limits: Limits,
}

impl Default for TableBuildConfig {
    fn default() -> Self {
        TableBuildConfig {
            iterations: 1000,
            n_max: 2,
            seed: 0,
            limits: Limits::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TableError {
    #[error("iteration count must be at least 1")]
    ZeroIterations,
    #[error("n_max must lie in 1..={repo}, got {got}")]
    BadNMax { got: usize, repo: usize },
    #[error("unknown knowledge point `{0}`")]
    UnknownKP(String),
    #[error("knowledge point `{0}` has no definition sets")]
    EmptyEntry(String),
}

/// Per-iteration bookkeeping of a build.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct TableStats {
    pub iterations: usize,
    /// Sets whose scene could not be placed.
    pub degenerate: usize,
    pub limit_exceeded: usize,
    /// Sets that pruned to nothing or produced no rule use.
    pub unproductive: usize,
    pub inserted: usize,
    pub duplicates: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MappingTable {
    entries: BTreeMap<String, Vec<ExDefinitionSet>>,
    keys: BTreeMap<String, BTreeSet<String>>,
    pub config: TableBuildConfig,
    pub stats: TableStats,
}

impl MappingTable {
    pub fn new(config: TableBuildConfig) -> Self {
        MappingTable {
            entries: BTreeMap::new(),
            keys: BTreeMap::new(),
            config,
            stats: TableStats::default(),
        }
    }

    /// Adds `exd` under `kp` unless an equal set is already there.
    pub fn insert(&mut self, kp: &str, exd: ExDefinitionSet) -> bool {
        let key = exd.key();
        if !self.keys.entry(kp.into()).or_default().insert(key) {
            return false;
        }
        self.entries.entry(kp.into()).or_default().push(exd);
        true
    }

    pub fn get(&self, kp: &str) -> Option<&[ExDefinitionSet]> {
        self.entries.get(kp).map(Vec::as_slice)
    }

    pub fn knowledge_points(&self) -> impl Iterator<Item = &str> {
        self.entries.keys().map(String::as_str)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, &ExDefinitionSet)> {
        self.entries
            .iter()
            .flat_map(|(k, v)| v.iter().map(move |s| (k.as_str(), s)))
    }

    /// Number of sets per knowledge point.
    pub fn counts(&self) -> BTreeMap<String, usize> {
        self.entries.iter().map(|(k, v)| (k.clone(), v.len())).collect()
    }

    pub fn len(&self) -> usize {
        self.entries.values().map(Vec::len).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Uniform draw from the sets of `kp`.
    pub fn sample(&self, kp: &str, seed: u64) -> Result<&ExDefinitionSet, TableError> {
        let sets = self.entries.get(kp).ok_or_else(|| TableError::UnknownKP(kp.into()))?;
        if sets.is_empty() {
            return Err(TableError::EmptyEntry(kp.into()));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        Ok(&sets[rng.gen_range(0..sets.len())])
    }
}

impl TableBuildConfig {
    pub fn validate(&self, repo: &DefinitionRepository) -> Result<(), TableError> {
        if self.iterations == 0 {
            return Err(TableError::ZeroIterations);
        }
        if self.n_max == 0 || self.n_max > repo.len() {
            return Err(TableError::BadNMax { got: self.n_max, repo: repo.len() });
        }
        Ok(())
    }
}

/// Samples `iterations` definition sets and files each minimal set under
/// every rule its conclusions' tracebacks use. Iteration `i` draws from
/// its own seed, so a longer build extends a shorter one.
pub fn build_table(
    repo: &DefinitionRepository,
    rules: &[KnowledgeRule],
    config: TableBuildConfig,
) -> Result<MappingTable, TableError> {
    config.validate(repo)?;
    let engine = Engine::new(rules.to_vec(), config.limits);
    let mut table = MappingTable::new(config);
    for i in 0..config.iterations {
        table.stats.iterations += 1;
        let (exd, used) = match iteration(repo, &engine, &config, i) {
            Ok(x) => x,
            Err(Skip::Degenerate) => {
                table.stats.degenerate += 1;
                continue;
            }
            Err(Skip::Limit) => {
                table.stats.limit_exceeded += 1;
                continue;
            }
            Err(Skip::Unproductive) => {
                table.stats.unproductive += 1;
                continue;
            }
        };
        for r in used {
            if table.insert(&rules[r].id, exd.clone()) {
                table.stats.inserted += 1;
            } else {
                table.stats.duplicates += 1;
            }
        }
    }
    Ok(table)
}

enum Skip {
    Degenerate,
    Limit,
    Unproductive,
}

fn iteration(
    repo: &DefinitionRepository,
    engine: &Engine,
    config: &TableBuildConfig,
    i: usize,
) -> Result<(ExDefinitionSet, BTreeSet<usize>), Skip> {
    let mut rng = ChaCha8Rng::seed_from_u64(mix_seed(config.seed, i as u64));
    let n = rng.gen_range(1..=config.n_max);
    let drawn = sample_set(repo, n, &mut rng);
    let exd = minimal_set(&[drawn]).map_err(|_| Skip::Unproductive)?;
    if exd.is_empty() {
        return Err(Skip::Unproductive);
    }
    let state = saturate_set(&exd, engine, 0).map_err(|e| match e {
        SetFailure::Scene(_) => Skip::Degenerate,
        SetFailure::Limit => Skip::Limit,
    })?;
    let used = rules_on_tracebacks(&state);
    if used.is_empty() {
        return Err(Skip::Unproductive);
    }
    Ok((exd, used))
}

/// Whether saturating `exd` still uses rule `kp` on some traceback.
pub fn reverify(exd: &ExDefinitionSet, kp: &str, rules: &[KnowledgeRule], limits: Limits) -> bool {
    let engine = Engine::new(rules.to_vec(), limits);
    match saturate_set(exd, &engine, 0) {
        Ok(state) => rules_on_tracebacks(&state).iter().any(|&r| rules[r].id == kp),
        Err(_) => false,
    }
}
