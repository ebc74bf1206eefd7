use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use crate::benchmarks::FunctionName;
use crate::engine::RunConfig;
use crate::error::{Error, Result};
use crate::history::UpdatePolicy;
use crate::operators::{CrossoverKind, CrossoverSpec};

/// A crossover operator with or without SHX, as compared in the result table.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Variant {
    pub crossover: CrossoverKind,
    /// `None` is the plain operator.
    pub shx: Option<UpdatePolicy>,
}

impl Variant {
    pub const ALL: [Variant; 6] = [
        Variant::new(CrossoverKind::Blx, None),
        Variant::new(CrossoverKind::Blx, Some(UpdatePolicy::Random)),
        Variant::new(CrossoverKind::Blx, Some(UpdatePolicy::Sequential)),
        Variant::new(CrossoverKind::Spx, None),
        Variant::new(CrossoverKind::Spx, Some(UpdatePolicy::Random)),
        Variant::new(CrossoverKind::Spx, Some(UpdatePolicy::Sequential)),
    ];

    pub const fn new(crossover: CrossoverKind, shx: Option<UpdatePolicy>) -> Self {
        Self { crossover, shx }
    }

    pub fn baseline(crossover: CrossoverKind) -> Self {
        Self::new(crossover, None)
    }

    /// Position in [`Variant::ALL`]; used to order summaries.
    pub fn ordinal(self) -> usize {
        Variant::ALL.iter().position(|v| *v == self).unwrap_or(usize::MAX)
    }

    pub fn name(self) -> String {
        let op = match self.crossover {
            CrossoverKind::Blx => "BLX",
            CrossoverKind::Spx => "SPX",
        };
        match self.shx {
            None => op.to_string(),
            Some(p) => format!("SH-{op}_{p}"),
        }
    }

    /// Overrides the operator, SHX flag and update policy of `base`.
    /// Operator parameters (alpha, epsilon, parent policy) carry over.
    pub fn apply(self, base: &RunConfig) -> RunConfig {
        let mut cfg = base.clone();
        cfg.crossover = CrossoverSpec {
            kind: self.crossover,
            ..base.crossover
        };
        cfg.shx = self.shx.is_some();
        if let Some(p) = self.shx {
            cfg.archive_update = p;
        }
        cfg
    }

    pub fn of_config(cfg: &RunConfig) -> Self {
        Self::new(cfg.crossover.kind, cfg.shx.then_some(cfg.archive_update))
    }
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name())
    }
}

impl FromStr for Variant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let want = s.trim();
        Variant::ALL
            .into_iter()
            .find(|v| v.name().eq_ignore_ascii_case(want))
            .ok_or_else(|| {
                let names: Vec<String> = Variant::ALL.iter().map(|v| v.name()).collect();
                Error::config(format!("unknown variant `{want}` (valid: {})", names.join(", ")))
            })
    }
}

/// Function × variant grid, each cell run `runs` times.
///
/// Run `r` of every cell uses seed `base_seed + r`.
#[derive(Clone, Debug, PartialEq)]
pub struct ExperimentPlan {
    pub base: RunConfig,
    pub functions: Vec<FunctionName>,
    pub variants: Vec<Variant>,
    pub runs: usize,
    pub base_seed: u64,
    pub out: Option<PathBuf>,
}

impl Default for ExperimentPlan {
    fn default() -> Self {
        Self {
            base: RunConfig::default(),
            functions: FunctionName::ALL.to_vec(),
            variants: Variant::ALL.to_vec(),
            runs: 10,
            base_seed: 0,
            out: None,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Cell {
    pub function: FunctionName,
    pub variant: Variant,
}

impl ExperimentPlan {
    /// A one-cell plan running `config` once with its own seed.
    pub fn single(config: RunConfig) -> Self {
        Self {
            functions: vec![config.function],
            variants: vec![Variant::of_config(&config)],
            runs: 1,
            base_seed: config.seed,
            base: config,
            out: None,
        }
    }

    pub fn cells(&self) -> Vec<Cell> {
        self.functions
            .iter()
            .flat_map(|&function| self.variants.iter().map(move |&variant| Cell { function, variant }))
            .collect()
    }

    pub fn seed(&self, run: usize) -> u64 {
        self.base_seed.wrapping_add(run as u64)
    }

    pub fn config_for(&self, cell: Cell, run: usize) -> RunConfig {
        let mut cfg = cell.variant.apply(&self.base);
        cfg.function = cell.function;
        cfg.seed = self.seed(run);
        cfg
    }

    pub fn validate(&self) -> Result<()> {
        if self.runs == 0 {
            return Err(Error::config("runs must be at least 1"));
        }
        if self.functions.is_empty() || self.variants.is_empty() {
            return Err(Error::config("plan needs at least one function and one variant"));
        }
        for cell in self.cells() {
            self.config_for(cell, 0).validate()?;
        }
        Ok(())
    }
}
