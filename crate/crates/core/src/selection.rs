//! Offspring selection driven by cluster scores, and survivor selection.

use std::fmt;
use std::str::FromStr;

use rand::Rng;

use crate::error::{Error, Result};
use crate::history::{nearest_cluster, ClusterModel, ScoreHistogram};
use crate::individual::Individual;

/// Picks index `i` with probability `weights[i] / Σ weights` by inverting the
/// cumulative sum at a single uniform draw.
pub fn roulette<R: Rng + ?Sized>(weights: &[f64], rng: &mut R) -> Result<usize> {
    let total = checked_total(weights)?;
    let u: f64 = rng.gen();
    Ok(spin(weights, total, u))
}

/// Deterministic core of [`roulette`] for a given draw `u` in [0, 1).
pub fn roulette_at(weights: &[f64], u: f64) -> Result<usize> {
    let total = checked_total(weights)?;
    Ok(spin(weights, total, u))
}

fn checked_total(weights: &[f64]) -> Result<f64> {
    if weights.iter().any(|w| !(w.is_finite() && *w >= 0.0)) {
        return Err(Error::DegenerateWeights);
    }
    let total: f64 = weights.iter().sum();
    if total > 0.0 {
        Ok(total)
    } else {
        Err(Error::DegenerateWeights)
    }
}

fn spin(weights: &[f64], total: f64, u: f64) -> usize {
    let target = u * total;
    let mut acc = 0.0;
    let mut last_positive = 0;
    for (i, &w) in weights.iter().enumerate() {
        if w > 0.0 {
            acc += w;
            last_positive = i;
            if target < acc {
                return i;
            }
        }
    }
    // Rounding can leave `target` at or above the final cumulative sum.
    last_positive
}

/// Scores restricted to clusters flagged in `available`, renormalized to sum
/// to one.
///
/// When every available cluster has zero score (candidates fell only into
/// clusters with no archive members) the available clusters are weighted
/// uniformly. Returns `None` when nothing is available.
pub fn restrict_scores(scores: &[f64], available: &[bool]) -> Option<Vec<f64>> {
    debug_assert_eq!(scores.len(), available.len());
    if !available.iter().any(|&a| a) {
        return None;
    }
    let mut w: Vec<f64> = scores
        .iter()
        .zip(available)
        .map(|(&s, &a)| if a { s } else { 0.0 })
        .collect();
    let mut total: f64 = w.iter().sum();
    if total <= 0.0 {
        for (wi, &a) in w.iter_mut().zip(available) {
            *wi = if a { 1.0 } else { 0.0 };
        }
        total = w.iter().sum();
    }
    w.iter_mut().for_each(|wi| *wi /= total);
    Some(w)
}

/// Narrows `candidates` down to `n_off` distinct members.
///
/// Every candidate is labelled with its nearest archive cluster. Each of the
/// `n_off` picks spins the roulette over the scores of clusters that still
/// hold unpicked candidates, then takes one of that cluster's remaining
/// candidates uniformly at random. No candidate is evaluated.
pub fn shx_select<R: Rng + ?Sized>(
    candidates: Vec<Individual>,
    model: &ClusterModel,
    scores: &ScoreHistogram,
    n_off: usize,
    rng: &mut R,
) -> Result<Vec<Individual>> {
    if n_off > candidates.len() {
        return Err(Error::NotEnoughItems {
            requested: n_off,
            available: candidates.len(),
        });
    }
    if scores.len() != model.k() {
        return Err(Error::DimensionMismatch {
            expected: model.k(),
            actual: scores.len(),
        });
    }
    let mut buckets: Vec<Vec<usize>> = vec![Vec::new(); model.k()];
    for (i, c) in candidates.iter().enumerate() {
        buckets[nearest_cluster(model, c.genes())?].push(i);
    }

    let mut available: Vec<bool> = buckets.iter().map(|b| !b.is_empty()).collect();
    let mut picked = Vec::with_capacity(n_off);
    for _ in 0..n_off {
        let weights = restrict_scores(scores.scores(), &available).ok_or(Error::DegenerateWeights)?;
        let cluster = roulette(&weights, rng)?;
        let bucket = &mut buckets[cluster];
        let slot = rng.gen_range(0..bucket.len());
        picked.push(bucket.swap_remove(slot));
        if bucket.is_empty() {
            available[cluster] = false;
        }
    }

    let mut slots: Vec<Option<Individual>> = candidates.into_iter().map(Some).collect();
    Ok(picked
        .into_iter()
        .map(|i| slots[i].take().expect("candidate picked twice"))
        .collect())
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum SurvivorRule {
    /// Keep the best μ of population ∪ offspring.
    #[default]
    Truncation,
    /// Every offspring enters; the worst incumbents make room.
    ReplaceWorst,
}

impl SurvivorRule {
    pub fn as_str(self) -> &'static str {
        match self {
            SurvivorRule::Truncation => "truncation",
            SurvivorRule::ReplaceWorst => "replace_worst",
        }
    }
}

impl fmt::Display for SurvivorRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for SurvivorRule {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "truncation" => Ok(SurvivorRule::Truncation),
            "replace_worst" => Ok(SurvivorRule::ReplaceWorst),
            other => Err(Error::config(format!(
                "unknown survivor rule `{other}` (valid: truncation, replace_worst)"
            ))),
        }
    }
}

fn fitness_of(ind: &Individual) -> Result<f64> {
    ind.fitness().ok_or(Error::Unevaluated)
}

/// Returns the next population (size `population.len()`) and the offspring
/// that made it in (`P_sur`), both in ascending fitness order.
///
/// Ties prefer incumbents, then earlier positions.
pub fn survivor_select(
    population: Vec<Individual>,
    offspring: Vec<Individual>,
    rule: SurvivorRule,
) -> Result<(Vec<Individual>, Vec<Individual>)> {
    let mu = population.len();
    let pop_fit = population.iter().map(fitness_of).collect::<Result<Vec<_>>>()?;
    let off_fit = offspring.iter().map(fitness_of).collect::<Result<Vec<_>>>()?;

    // (fitness, is_offspring, position)
    let mut pool: Vec<(f64, bool, usize)> = match rule {
        SurvivorRule::Truncation => pop_fit
            .iter()
            .enumerate()
            .map(|(i, &f)| (f, false, i))
            .chain(off_fit.iter().enumerate().map(|(i, &f)| (f, true, i)))
            .collect(),
        SurvivorRule::ReplaceWorst => {
            let mut inc: Vec<(f64, bool, usize)> =
                pop_fit.iter().enumerate().map(|(i, &f)| (f, false, i)).collect();
            inc.sort_by(|a, b| a.0.total_cmp(&b.0));
            inc.truncate(mu.saturating_sub(offspring.len()));
            inc.extend(
                off_fit
                    .iter()
                    .enumerate()
                    .map(|(i, &f)| (f, true, i))
                    .take(mu),
            );
            inc
        }
    };
    // Stable sort: incumbents precede offspring at equal fitness.
    pool.sort_by(|a, b| a.0.total_cmp(&b.0));
    pool.truncate(mu);

    let mut pop_slots: Vec<Option<Individual>> = population.into_iter().map(Some).collect();
    let mut off_slots: Vec<Option<Individual>> = offspring.into_iter().map(Some).collect();
    let mut next = Vec::with_capacity(mu);
    let mut survivors = Vec::new();
    for (_, from_offspring, i) in pool {
        if from_offspring {
            let ind = off_slots[i].take().expect("offspring used twice");
            survivors.push(ind.clone());
            next.push(ind);
        } else {
            next.push(pop_slots[i].take().expect("incumbent used twice"));
        }
    }
    Ok((next, survivors))
}
