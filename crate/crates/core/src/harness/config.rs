//! Flat `key = value` configuration files.
//!
//! Grammar: one `key = value` pair per line; `#` starts a comment that runs
//! to the end of the line; blank lines are ignored; keys may appear at most
//! once. Lists are comma separated.
//!
//! A file that sets any of `function`, `crossover`, `shx`, `archive_update`
//! or `seed` describes a single run. Otherwise it describes an experiment plan
//! (an empty file is the full default plan). Mixing the two is an error.
//!
//! | key | kind | default |
//! |-----|------|---------|
//! | `functions` | plan | `sphere, rosenbrock, rastrigin, ackley1` |
//! | `variants` | plan | all six |
//! | `runs` | plan | `10` |
//! | `base_seed` | plan | `0` |
//! | `out` | plan | none |
//! | `function` | run | `sphere` |
//! | `crossover` | run | `blx` |
//! | `shx` | run | `true` |
//! | `archive_update` | run | `sequential` |
//! | `seed` | run | `0` |
//! | `dim` | both | `10` |
//! | `lower`, `upper` | both | per function |
//! | `population` | both | `100` |
//! | `generations` | both | `100` |
//! | `candidates` | both | `180` |
//! | `offspring` | both | `60` |
//! | `alpha` | both | `0.5` |
//! | `epsilon` | both | `sqrt(dim + 2)` |
//! | `parent_policy` | both | `per_candidate` |
//! | `archive_generations` | both | `30` |
//! | `clusters` | both | `auto` (half the archive capacity) |
//! | `kmeans_tol` | both | `1e-6` |
//! | `kmeans_max_iters` | both | `100` |
//! | `survivor_rule` | both | `truncation` |

use std::collections::HashMap;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use crate::benchmarks::FunctionName;
use crate::engine::{ClusterCount, RunConfig};
use crate::error::{Error, Result};
use crate::harness::plan::{ExperimentPlan, Variant};

const PLAN_KEYS: &[&str] = &["functions", "variants", "runs", "base_seed", "out"];
const RUN_KEYS: &[&str] = &["function", "crossover", "shx", "archive_update", "seed"];
const SHARED_KEYS: &[&str] = &[
    "dim",
    "lower",
    "upper",
    "population",
    "generations",
    "candidates",
    "offspring",
    "alpha",
    "epsilon",
    "parent_policy",
    "archive_generations",
    "clusters",
    "kmeans_tol",
    "kmeans_max_iters",
    "survivor_rule",
];

#[derive(Clone, Debug, PartialEq)]
pub enum ConfigFile {
    Run(RunConfig),
    Plan(ExperimentPlan),
}

impl ConfigFile {
    pub fn into_plan(self) -> ExperimentPlan {
        match self {
            ConfigFile::Run(cfg) => ExperimentPlan::single(cfg),
            ConfigFile::Plan(plan) => plan,
        }
    }
}

pub fn parse_config(path: impl AsRef<Path>) -> Result<ConfigFile> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_config_str(&text, path)
}

struct Entries<'a> {
    path: PathBuf,
    map: HashMap<&'a str, (usize, &'a str)>,
}

impl<'a> Entries<'a> {
    fn err(&self, line: usize, message: impl Into<String>) -> Error {
        Error::Parse {
            path: self.path.clone(),
            line,
            message: message.into(),
        }
    }

    fn line(&self, key: &str) -> usize {
        self.map.get(key).map_or(0, |(l, _)| *l)
    }

    fn has(&self, key: &str) -> bool {
        self.map.contains_key(key)
    }

    fn get<T: FromStr>(&self, key: &str, what: &str) -> Result<Option<T>> {
        match self.map.get(key) {
            None => Ok(None),
            Some((line, raw)) => raw
                .parse::<T>()
                .map(Some)
                .map_err(|_| self.err(*line, format!("`{key}`: expected {what}, got `{raw}`"))),
        }
    }

    fn get_with<T>(&self, key: &str, parse: impl Fn(&str) -> Result<T>) -> Result<Option<T>> {
        match self.map.get(key) {
            None => Ok(None),
            Some((line, raw)) => parse(raw)
                .map(Some)
                .map_err(|e| self.err(*line, format!("`{key}`: {e}"))),
        }
    }

    fn list<T>(&self, key: &str, parse: impl Fn(&str) -> Result<T>) -> Result<Option<Vec<T>>> {
        self.get_with(key, |raw| {
            let items: Vec<T> = raw
                .split(',')
                .map(str::trim)
                .filter(|s| !s.is_empty())
                .map(&parse)
                .collect::<Result<_>>()?;
            if items.is_empty() {
                Err(Error::config("list must not be empty"))
            } else {
                Ok(items)
            }
        })
    }
}

fn parse_bool(raw: &str) -> Result<bool> {
    match raw.to_ascii_lowercase().as_str() {
        "true" | "yes" | "on" | "1" => Ok(true),
        "false" | "no" | "off" | "0" => Ok(false),
        _ => Err(Error::config(format!("expected true or false, got `{raw}`"))),
    }
}

fn parse_clusters(raw: &str) -> Result<ClusterCount> {
    if raw.eq_ignore_ascii_case("auto") {
        return Ok(ClusterCount::Auto);
    }
    raw.parse::<usize>()
        .map(ClusterCount::Fixed)
        .map_err(|_| Error::config(format!("expected `auto` or a positive integer, got `{raw}`")))
}

pub fn parse_config_str(text: &str, path: impl AsRef<Path>) -> Result<ConfigFile> {
    let mut entries = Entries {
        path: path.as_ref().to_path_buf(),
        map: HashMap::new(),
    };
    for (idx, raw_line) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw_line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let Some((key, value)) = line.split_once('=') else {
            return Err(entries.err(line_no, format!("expected `key = value`, got `{line}`")));
        };
        let (key, value) = (key.trim(), value.trim());
        if !(PLAN_KEYS.contains(&key) || RUN_KEYS.contains(&key) || SHARED_KEYS.contains(&key)) {
            return Err(entries.err(line_no, format!("unknown key `{key}`")));
        }
        if value.is_empty() {
            return Err(entries.err(line_no, format!("`{key}`: missing value")));
        }
        if let Some((first, _)) = entries.map.insert(key, (line_no, value)) {
            return Err(entries.err(line_no, format!("`{key}` already set on line {first}")));
        }
    }

    let plan_key = PLAN_KEYS.iter().find(|k| entries.has(k));
    let run_key = RUN_KEYS.iter().find(|k| entries.has(k));
    if let (Some(p), Some(r)) = (plan_key, run_key) {
        return Err(entries.err(
            entries.line(r).max(entries.line(p)),
            format!("`{r}` (single-run key) cannot be combined with `{p}` (plan key)"),
        ));
    }

    let base = parse_run_config(&entries)?;
    if run_key.is_some() {
        return Ok(ConfigFile::Run(base));
    }

    let mut plan = ExperimentPlan {
        base,
        ..ExperimentPlan::default()
    };
    if let Some(f) = entries.list("functions", |s| s.parse::<FunctionName>())? {
        plan.functions = f;
    }
    if let Some(v) = entries.list("variants", |s| s.parse::<Variant>())? {
        plan.variants = v;
    }
    if let Some(r) = entries.get("runs", "a positive integer")? {
        plan.runs = r;
    }
    if let Some(s) = entries.get("base_seed", "an unsigned integer")? {
        plan.base_seed = s;
    }
    if let Some(o) = entries.get::<String>("out", "a path")? {
        plan.out = Some(PathBuf::from(o));
    }
    if plan.runs == 0 {
        return Err(entries.err(entries.line("runs"), "`runs` must be at least 1"));
    }
    for cell in plan.cells() {
        plan.config_for(cell, 0)
            .validate()
            .map_err(|e| entries.err(0, format!("{} / {}: {e}", cell.function, cell.variant)))?;
    }
    Ok(ConfigFile::Plan(plan))
}

fn parse_run_config(e: &Entries<'_>) -> Result<RunConfig> {
    let mut cfg = RunConfig::default();
    if let Some(v) = e.get_with("function", |s| s.parse())? {
        cfg.function = v;
    }
    if let Some(v) = e.get_with("crossover", |s| s.parse())? {
        cfg.crossover.kind = v;
    }
    if let Some(v) = e.get_with("shx", parse_bool)? {
        cfg.shx = v;
    }
    if let Some(v) = e.get_with("archive_update", |s| s.parse())? {
        cfg.archive_update = v;
    }
    if let Some(v) = e.get("seed", "an unsigned integer")? {
        cfg.seed = v;
    }
    if let Some(v) = e.get("dim", "a positive integer")? {
        cfg.dim = v;
    }
    match (e.get::<f64>("lower", "a number")?, e.get::<f64>("upper", "a number")?) {
        (Some(lo), Some(hi)) => {
            if lo.partial_cmp(&hi) != Some(std::cmp::Ordering::Less) {
                return Err(e.err(e.line("upper"), "`upper` must be greater than `lower`"));
            }
            cfg.bounds = Some((lo, hi));
        }
        (None, None) => {}
        _ => {
            let line = e.line("lower").max(e.line("upper"));
            return Err(e.err(line, "`lower` and `upper` must be given together"));
        }
    }
    if let Some(v) = e.get("population", "a positive integer")? {
        cfg.population = v;
    }
    if let Some(v) = e.get("generations", "a non-negative integer")? {
        cfg.generations = v;
    }
    if let Some(v) = e.get("candidates", "a positive integer")? {
        cfg.candidates = v;
    }
    if let Some(v) = e.get("offspring", "a positive integer")? {
        cfg.offspring = v;
    }
    if let Some(v) = e.get("alpha", "a number")? {
        cfg.crossover.alpha = v;
    }
    if let Some(v) = e.get("epsilon", "a number")? {
        cfg.crossover.epsilon = Some(v);
    }
    if let Some(v) = e.get_with("parent_policy", |s| s.parse())? {
        cfg.crossover.parents = v;
    }
    if let Some(v) = e.get("archive_generations", "a positive integer")? {
        cfg.archive_generations = v;
    }
    if let Some(v) = e.get_with("clusters", parse_clusters)? {
        cfg.clusters = v;
    }
    if let Some(v) = e.get("kmeans_tol", "a number")? {
        cfg.kmeans.tol = v;
    }
    if let Some(v) = e.get("kmeans_max_iters", "a positive integer")? {
        cfg.kmeans.max_iters = v;
    }
    if let Some(v) = e.get_with("survivor_rule", |s| s.parse())? {
        cfg.survivor_rule = v;
    }

    if cfg.candidates < cfg.offspring {
        let line = e.line("candidates").max(e.line("offspring"));
        return Err(e.err(
            line,
            format!(
                "`candidates` ({}) must be >= `offspring` ({})",
                cfg.candidates, cfg.offspring
            ),
        ));
    }
    if cfg.offspring > cfg.population {
        let line = e.line("offspring").max(e.line("population"));
        return Err(e.err(
            line,
            format!(
                "`offspring` ({}) must be <= `population` ({})",
                cfg.offspring, cfg.population
            ),
        ));
    }
    if let Err(err) = cfg.crossover.validate() {
        let line = e.line("alpha").max(e.line("epsilon"));
        return Err(e.err(line, err.to_string()));
    }
    Ok(cfg)
}
