use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use geomgen_core::data;
use geomgen_core::formal::{parse_rules, DefinitionRepository, KnowledgeRule};
use geomgen_core::render::TemplateSet;

pub const DATA_DIR_VAR: &str = "GEOMGEN_DATA_DIR";
pub const DEFS_FILE: &str = "defs.sdeg";
pub const RULES_FILE: &str = "rules.sdeg";
pub const TEMPLATES_FILE: &str = "templates.en.txt";

/// Definitions, rules and templates a command runs against.
#[derive(Debug, Clone)]
pub struct Resources {
    pub repo: DefinitionRepository,
    pub rules: Vec<KnowledgeRule>,
    pub templates: TemplateSet,
}

/// Where each catalog comes from. An explicit path wins, then a file of the
/// usual name under `data_dir`, then the copy compiled into the binary.
#[derive(Debug, Clone, Default)]
pub struct Sources {
    pub defs: Option<PathBuf>,
    pub rules: Option<PathBuf>,
    pub templates: Option<PathBuf>,
    pub data_dir: Option<PathBuf>,
}

impl Sources {
    fn pick(&self, explicit: &Option<PathBuf>, name: &str) -> Option<PathBuf> {
        explicit.clone().or_else(|| {
            let p = self.data_dir.as_ref()?.join(name);
            p.exists().then_some(p)
        })
    }
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))
}

impl Resources {
    pub fn bundled() -> Self {
        Resources { repo: data::repository(), rules: data::rules(), templates: data::templates() }
    }

    pub fn load(src: &Sources) -> Result<Self> {
        let repo = match src.pick(&src.defs, DEFS_FILE) {
            Some(p) => DefinitionRepository::parse(&read(&p)?).with_context(|| format!("in {}", p.display()))?,
            None => data::repository(),
        };
        let rules = match src.pick(&src.rules, RULES_FILE) {
            Some(p) => parse_rules(&read(&p)?).with_context(|| format!("in {}", p.display()))?,
            None => data::rules(),
        };
        let templates = match src.pick(&src.templates, TEMPLATES_FILE) {
            Some(p) => TemplateSet::parse(&read(&p)?, &repo).with_context(|| format!("in {}", p.display()))?,
            None => TemplateSet::parse(data::TEMPLATES_EN, &repo)?,
        };
        Ok(Resources { repo, rules, templates })
    }
}
