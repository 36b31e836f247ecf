//! The formal statement language: points, predicates, statements, rules
//! and constructive definitions.

pub mod defs;
pub mod point;
pub mod predicate;
pub mod repository;
pub mod rules;
pub mod statement;

pub use defs::{parse_defs, DefinitionEntry, DefsError};
pub use point::{BadPointName, PointSym};
pub use predicate::{Perm, Predicate};
pub use repository::{premises, DefinitionRepository, Instance, InstantiateError};
pub use rules::{parse_rules, KnowledgeRule, RuleError};
pub use statement::{canonicalize, format_statement, Statement, StatementError};
