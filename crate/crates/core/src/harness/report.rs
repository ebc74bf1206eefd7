//! Baseline vs SHX comparison over a summary table.

use std::fmt;

use crate::benchmarks::FunctionName;
use crate::harness::experiment::SummaryRow;
use crate::harness::plan::Variant;
use crate::history::UpdatePolicy;
use crate::operators::CrossoverKind;

#[derive(Clone, Debug, PartialEq)]
pub struct VariantResult {
    pub variant: Variant,
    pub mean: f64,
    /// Baseline mean divided by this variant's mean; above 1 means SHX helped.
    pub improvement: Option<f64>,
}

/// One operator family (plain operator plus its SHX variants) on one function.
#[derive(Clone, Debug, PartialEq)]
pub struct FamilyComparison {
    pub function: FunctionName,
    pub crossover: CrossoverKind,
    pub baseline: Option<f64>,
    pub variants: Vec<VariantResult>,
    /// Variants sharing the lowest mean.
    pub best: Vec<Variant>,
}

impl FamilyComparison {
    pub fn is_tie(&self) -> bool {
        self.best.len() > 1
    }

    fn mean_of(&self, shx: Option<UpdatePolicy>) -> Option<f64> {
        match shx {
            None => self.baseline,
            Some(p) => self
                .variants
                .iter()
                .find(|v| v.variant.shx == Some(p))
                .map(|v| v.mean),
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct HeadToHead {
    pub sequential_wins: usize,
    pub random_wins: usize,
    pub ties: usize,
}

impl HeadToHead {
    pub fn cells(&self) -> usize {
        self.sequential_wins + self.random_wins + self.ties
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ComparisonReport {
    pub families: Vec<FamilyComparison>,
    pub sequential_vs_random: HeadToHead,
    /// Expected (function, variant) cells absent from the summary.
    pub missing: Vec<(FunctionName, Variant)>,
}

pub fn improvement_ratio(baseline: f64, shx: f64) -> f64 {
    if baseline == shx {
        1.0
    } else {
        baseline / shx
    }
}

pub fn compare_report(summary: &[SummaryRow]) -> ComparisonReport {
    let mut functions: Vec<FunctionName> = summary.iter().map(|r| r.function).collect();
    functions.sort();
    functions.dedup();
    let lookup = |f: FunctionName, v: Variant| {
        summary
            .iter()
            .find(|r| r.function == f && r.variant == v)
            .map(|r| r.mean)
    };

    let mut families = Vec::new();
    let mut missing = Vec::new();
    let mut h2h = HeadToHead::default();
    for &function in &functions {
        for crossover in [CrossoverKind::Blx, CrossoverKind::Spx] {
            let family: Vec<Variant> = Variant::ALL
                .into_iter()
                .filter(|v| v.crossover == crossover)
                .collect();
            let present: Vec<(Variant, f64)> = family
                .iter()
                .filter_map(|&v| lookup(function, v).map(|m| (v, m)))
                .collect();
            if present.is_empty() {
                continue;
            }
            for &v in &family {
                if lookup(function, v).is_none() {
                    missing.push((function, v));
                }
            }
            let baseline = lookup(function, Variant::baseline(crossover));
            let variants = present
                .iter()
                .filter(|(v, _)| v.shx.is_some())
                .map(|&(variant, mean)| VariantResult {
                    variant,
                    mean,
                    improvement: baseline.map(|b| improvement_ratio(b, mean)),
                })
                .collect();
            let lowest = present.iter().map(|(_, m)| *m).fold(f64::INFINITY, f64::min);
            let best = present
                .iter()
                .filter(|(_, m)| *m == lowest)
                .map(|(v, _)| *v)
                .collect();
            let cmp = FamilyComparison {
                function,
                crossover,
                baseline,
                variants,
                best,
            };
            if let (Some(seq), Some(rnd)) = (
                cmp.mean_of(Some(UpdatePolicy::Sequential)),
                cmp.mean_of(Some(UpdatePolicy::Random)),
            ) {
                if seq < rnd {
                    h2h.sequential_wins += 1;
                } else if rnd < seq {
                    h2h.random_wins += 1;
                } else {
                    h2h.ties += 1;
                }
            }
            families.push(cmp);
        }
    }
    ComparisonReport {
        families,
        sequential_vs_random: h2h,
        missing,
    }
}

impl ComparisonReport {
    pub fn family(&self, function: FunctionName, crossover: CrossoverKind) -> Option<&FamilyComparison> {
        self.families
            .iter()
            .find(|f| f.function == function && f.crossover == crossover)
    }
}

impl fmt::Display for ComparisonReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "{:<11} {:<18} {:>12} {:>12} {:>8}  best",
            "function", "variant", "baseline", "mean", "ratio"
        )?;
        for fam in &self.families {
            let base = fam.baseline.map_or("-".into(), |b| format!("{b:.3e}"));
            for v in &fam.variants {
                let ratio = v.improvement.map_or("-".into(), |r| format!("{r:.2}x"));
                let mark = if fam.best.contains(&v.variant) {
                    if fam.is_tie() {
                        "tie"
                    } else {
                        "*"
                    }
                } else {
                    ""
                };
                writeln!(
                    f,
                    "{:<11} {:<18} {:>12} {:>12.3e} {:>8}  {}",
                    fam.function.as_str(),
                    v.variant.name(),
                    base,
                    v.mean,
                    ratio,
                    mark
                )?;
            }
            if fam.best.iter().any(|v| v.shx.is_none()) {
                writeln!(f, "{:<11} {:<18} baseline is best", fam.function.as_str(), fam.crossover.as_str())?;
            }
        }
        let h = &self.sequential_vs_random;
        writeln!(
            f,
            "sequential vs random: sequential better in {} of {} cells (random {}, ties {})",
            h.sequential_wins,
            h.cells(),
            h.random_wins,
            h.ties
        )?;
        for (func, v) in &self.missing {
            writeln!(f, "missing: {func} / {v}")?;
        }
        Ok(())
    }
}
