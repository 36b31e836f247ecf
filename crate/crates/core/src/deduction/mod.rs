//! Forward chaining over the rule catalog interleaved with algebraic
//! closure, plus proof extraction.

pub mod ar;
pub mod engine;
pub mod linear;
pub mod matcher;
pub mod proof;
pub mod state;
pub mod view;

pub use ar::{ArState, Certificate, FactId, Seg, Subsystem};
pub use engine::{expand_triangle_relation, is_trivial, Engine, LimitExceeded};
pub use proof::{
    costs, enumerate_conclusions, prune, replay, traceback, DumpStep, ProofDag, ProofDump, ProofError, ProofPath,
    ProofStep, StepKind,
};
pub use state::{Derivation, DerivationKind, Fact, LimitKind, Limits, Origin, ProofState};
