//! Bundled catalogs.

use alloc::vec::Vec;

use crate::formal::{parse_rules, DefinitionRepository, KnowledgeRule};

pub const RULES: &str = include_str!("../data/rules.sdeg");
pub const DEFINITIONS: &str = include_str!("../data/defs.sdeg");
pub const TEMPLATES_EN: &str = include_str!("../data/templates.en.txt");

/// The 43-rule catalog.
pub fn rules() -> Vec<KnowledgeRule> {
    parse_rules(RULES).expect("bundled rules parse")
}

pub fn repository() -> DefinitionRepository {
    DefinitionRepository::parse(DEFINITIONS).expect("bundled definitions parse")
}

pub fn templates() -> crate::render::TemplateSet {
    crate::render::TemplateSet::parse(TEMPLATES_EN, &repository()).expect("bundled templates parse")
}
