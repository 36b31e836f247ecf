//! `geomgen build-table | generate | eval | render`.

use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use geomgen_core::deduction::{Engine, Limits};
use geomgen_core::generator::{generate, DifficultyBand, GenerationRequest, RETRY_BUDGET};
use geomgen_core::table::{build_table, TableBuildConfig};

use crate::dataset::parse_records;
use crate::eval::{evaluate, EvalConfig};
use crate::fsio::write_atomic;
use crate::problem::{render_record, ProblemRecord};
use crate::resources::{Resources, Sources, DATA_DIR_VAR};
use crate::table_io::{load_table, save_table};

#[derive(Debug, Parser)]
#[command(name = "geomgen", version, about = "Generate plane geometry proof problems from knowledge points")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Sample definition sets and map each rule to the sets whose proofs use it.
    BuildTable(BuildTableArgs),
    /// Generate problems that exercise the given knowledge points.
    Generate(GenerateArgs),
    /// Generate for every dataset record and report automatic metrics.
    Eval(EvalArgs),
    /// Re-render problem.txt and problem.svg from a problem.json.
    Render(RenderArgs),
}

#[derive(Debug, Clone, Args)]
pub struct ResourceArgs {
    /// Definitions file; defaults to defs.sdeg under the data dir, else the bundled copy.
    #[arg(long)]
    pub defs: Option<PathBuf>,
    /// Rules file; defaults to rules.sdeg under the data dir, else the bundled copy.
    #[arg(long)]
    pub rules: Option<PathBuf>,
    /// Templates file; defaults to templates.en.txt under the data dir, else the bundled copy.
    #[arg(long)]
    pub templates: Option<PathBuf>,
    #[arg(long, env = DATA_DIR_VAR)]
    pub data_dir: Option<PathBuf>,
}

impl ResourceArgs {
    fn load(&self) -> Result<Resources> {
        Resources::load(&Sources {
            defs: self.defs.clone(),
            rules: self.rules.clone(),
            templates: self.templates.clone(),
            data_dir: self.data_dir.clone(),
        })
    }
}

#[derive(Debug, Clone, Args)]
pub struct BuildTableArgs {
    #[command(flatten)]
    pub res: ResourceArgs,
    #[arg(long, default_value = "k2exd.jsonl")]
    pub out: PathBuf,
    #[arg(long, default_value_t = 1000, value_parser = clap::value_parser!(u64).range(1..))]
    pub iterations: u64,
    #[arg(long, default_value_t = 2)]
    pub nmax: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Debug, Clone, Args)]
pub struct GenerateArgs {
    #[command(flatten)]
    pub res: ResourceArgs,
    #[arg(long)]
    pub table: PathBuf,
    /// Comma separated, e.g. K_8,K_25
    #[arg(long, value_delimiter = ',', required = true)]
    pub kps: Vec<String>,
    #[arg(long, default_value = "easy", value_parser = parse_band)]
    pub difficulty: DifficultyBand,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value = "out")]
    pub out_dir: PathBuf,
    #[arg(long, default_value_t = 4)]
    pub max_candidates: usize,
    #[arg(long, default_value_t = RETRY_BUDGET)]
    pub retry_budget: usize,
}

#[derive(Debug, Clone, Args)]
pub struct EvalArgs {
    #[command(flatten)]
    pub res: ResourceArgs,
    #[arg(long)]
    pub dataset: PathBuf,
    #[arg(long)]
    pub table: PathBuf,
    #[arg(long, default_value = "report.json")]
    pub report: PathBuf,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 4)]
    pub max_candidates: usize,
    #[arg(long, default_value_t = RETRY_BUDGET)]
    pub retry_budget: usize,
}

#[derive(Debug, Clone, Args)]
pub struct RenderArgs {
    #[command(flatten)]
    pub res: ResourceArgs,
    /// A problem.json written by `generate`.
    #[arg(long)]
    pub problem: PathBuf,
    /// Defaults to the directory holding the problem.
    #[arg(long)]
    pub out_dir: Option<PathBuf>,
}

fn parse_band(s: &str) -> Result<DifficultyBand, String> {
    DifficultyBand::parse(s).ok_or_else(|| format!("`{s}` is not one of easy, moderate, difficult"))
}

pub fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::BuildTable(a) => cmd_build_table(&a),
        Command::Generate(a) => cmd_generate(&a),
        Command::Eval(a) => cmd_eval(&a),
        Command::Render(a) => cmd_render(&a),
    }
}

fn engine(res: &Resources) -> Engine {
    Engine::new(res.rules.clone(), Limits::default())
}

pub fn cmd_build_table(a: &BuildTableArgs) -> Result<()> {
    let res = a.res.load()?;
    let config = TableBuildConfig {
        iterations: a.iterations as usize,
        n_max: a.nmax,
        seed: a.seed,
        limits: Limits::default(),
    };
    let table = build_table(&res.repo, &res.rules, config)?;
    save_table(&table, &a.out).with_context(|| format!("cannot write {}", a.out.display()))?;
    let s = &table.stats;
    println!(
        "iterations {} degenerate {} limit_exceeded {} unproductive {} inserted {} duplicates {}",
        s.iterations, s.degenerate, s.limit_exceeded, s.unproductive, s.inserted, s.duplicates
    );
    let mut counts: Vec<(String, usize)> = table.counts().into_iter().collect();
    counts.sort_by_key(|(k, _)| kp_number(k));
    for (kp, n) in &counts {
        println!("{kp}\t{n}");
    }
    println!("{} sets over {} knowledge points -> {}", table.len(), counts.len(), a.out.display());
    Ok(())
}

fn kp_number(kp: &str) -> (usize, String) {
    (kp.strip_prefix("K_").and_then(|n| n.parse().ok()).unwrap_or(usize::MAX), kp.to_string())
}

/// Writes `problem.json`, `problem.txt` and `problem.svg` into `dir`.
pub fn write_problem(dir: &Path, r: &ProblemRecord, res: &Resources) -> Result<()> {
    let out = render_record(r, &res.repo, &res.templates)?;
    write_atomic(&dir.join("problem.json"), r.to_json().as_bytes())?;
    write_atomic(&dir.join("problem.txt"), out.text.as_bytes())?;
    write_atomic(&dir.join("problem.svg"), out.svg.as_bytes())?;
    Ok(())
}

pub fn cmd_generate(a: &GenerateArgs) -> Result<()> {
    let res = a.res.load()?;
    if let Some(bad) = a.kps.iter().find(|k| !res.rules.iter().any(|r| &r.id == *k)) {
        bail!("unknown knowledge point {bad}");
    }
    let table = load_table(&a.table, &res.repo).with_context(|| format!("in {}", a.table.display()))?;
    if let Some(missing) = a.kps.iter().find(|k| table.get(k).is_none_or(|s| s.is_empty())) {
        bail!("the table has no definition sets for {missing}");
    }
    let mut req = GenerationRequest::new(a.kps.clone(), a.difficulty, a.seed);
    req.max_candidates = a.max_candidates;
    req.retry_budget = a.retry_budget;
    let g = generate(&req, &table, &engine(&res))?;
    for (i, p) in g.problems.iter().enumerate() {
        let dir = a.out_dir.join(format!("problem_{:03}", i + 1));
        write_problem(&dir, &ProblemRecord::new(&req, p), &res)?;
    }
    println!("qualified {}", g.problems.len());
    println!("{}", serde_json::to_string(&crate::eval::DiagnosticsRecord::from(&g.diagnostics))?);
    Ok(())
}

pub fn cmd_eval(a: &EvalArgs) -> Result<()> {
    let res = a.res.load()?;
    let text = std::fs::read_to_string(&a.dataset).with_context(|| format!("cannot read {}", a.dataset.display()))?;
    let records = parse_records(&text, &res.rules).with_context(|| format!("in {}", a.dataset.display()))?;
    let table = load_table(&a.table, &res.repo).with_context(|| format!("in {}", a.table.display()))?;
    let cfg = EvalConfig { seed: a.seed, max_candidates: a.max_candidates, retry_budget: a.retry_budget };
    let report = evaluate(&records, &table, &res.repo, &engine(&res), cfg);
    write_atomic(&a.report, report.to_json().as_bytes())?;
    let show = |x: Option<f64>| x.map_or("null".to_string(), |v| format!("{v:.2}"));
    let m = &report.metrics;
    println!(
        "records {} qualified {} problems {} NS {} CC {} CKP {} CD {}",
        report.attempted,
        report.qualified_records,
        report.accepted_problems,
        show(m.ns),
        show(m.cc),
        show(m.ckp),
        show(m.cd)
    );
    Ok(())
}

pub fn cmd_render(a: &RenderArgs) -> Result<()> {
    let res = a.res.load()?;
    let text = std::fs::read_to_string(&a.problem).with_context(|| format!("cannot read {}", a.problem.display()))?;
    let r: ProblemRecord = serde_json::from_str(&text).with_context(|| format!("in {}", a.problem.display()))?;
    let dir = match &a.out_dir {
        Some(d) => d.clone(),
        None => a.problem.parent().map(Path::to_path_buf).unwrap_or_default(),
    };
    let out = render_record(&r, &res.repo, &res.templates)?;
    write_atomic(&dir.join("problem.txt"), out.text.as_bytes())?;
    write_atomic(&dir.join("problem.svg"), out.svg.as_bytes())?;
    println!("{}", out.text);
    Ok(())
}
