//! Parent sampling and the two offspring generators, BLX-α and SPX.
//!
//! Each generator comes in two layers: a `*_sample` function that returns the
//! raw child exactly as the operator defines it, and a wrapper that clips the
//! child to the search box and wraps it in an unevaluated [`Individual`].

use std::fmt;
use std::str::FromStr;

use rand::seq::index;
use rand::Rng;

use crate::benchmarks::Bounds;
use crate::error::{Error, Result};
use crate::individual::Individual;

pub const DEFAULT_ALPHA: f64 = 0.5;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum CrossoverKind {
    Blx,
    Spx,
}

impl CrossoverKind {
    pub fn as_str(self) -> &'static str {
        match self {
            CrossoverKind::Blx => "blx",
            CrossoverKind::Spx => "spx",
        }
    }
}

impl fmt::Display for CrossoverKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for CrossoverKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "blx" | "blx-alpha" => Ok(CrossoverKind::Blx),
            "spx" => Ok(CrossoverKind::Spx),
            other => Err(Error::config(format!(
                "unknown crossover `{other}` (valid: blx, spx)"
            ))),
        }
    }
}

/// How parents are drawn when building a candidate pool.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum ParentPolicy {
    /// A fresh parent set for every candidate.
    #[default]
    PerCandidate,
    /// One parent set shared by the whole pool.
    PerBatch,
}

impl FromStr for ParentPolicy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "per_candidate" => Ok(ParentPolicy::PerCandidate),
            "per_batch" => Ok(ParentPolicy::PerBatch),
            other => Err(Error::config(format!(
                "unknown parent policy `{other}` (valid: per_candidate, per_batch)"
            ))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CrossoverSpec {
    pub kind: CrossoverKind,
    /// BLX interval expansion on each side.
    pub alpha: f64,
    /// SPX expansion rate; `None` means √(dim + 2).
    pub epsilon: Option<f64>,
    pub parents: ParentPolicy,
}

impl CrossoverSpec {
    pub fn blx() -> Self {
        Self {
            kind: CrossoverKind::Blx,
            alpha: DEFAULT_ALPHA,
            epsilon: None,
            parents: ParentPolicy::PerCandidate,
        }
    }

    pub fn spx() -> Self {
        Self {
            kind: CrossoverKind::Spx,
            ..Self::blx()
        }
    }

    pub fn new(kind: CrossoverKind) -> Self {
        match kind {
            CrossoverKind::Blx => Self::blx(),
            CrossoverKind::Spx => Self::spx(),
        }
    }

    pub fn parents_required(&self, dim: usize) -> usize {
        match self.kind {
            CrossoverKind::Blx => 2,
            CrossoverKind::Spx => dim + 1,
        }
    }

    pub fn epsilon(&self, dim: usize) -> f64 {
        self.epsilon.unwrap_or_else(|| ((dim + 2) as f64).sqrt())
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.alpha >= 0.0 && self.alpha.is_finite()) {
            return Err(Error::config("alpha must be a finite value >= 0"));
        }
        if let Some(e) = self.epsilon {
            if !(e > 0.0 && e.is_finite()) {
                return Err(Error::config("epsilon must be a finite value > 0"));
            }
        }
        Ok(())
    }
}

/// Draws `m` distinct members of `pop` uniformly without replacement.
pub fn sample_parents<'a, R: Rng + ?Sized>(
    pop: &'a [Individual],
    m: usize,
    rng: &mut R,
) -> Result<Vec<&'a Individual>> {
    if m > pop.len() {
        return Err(Error::NotEnoughItems {
            requested: m,
            available: pop.len(),
        });
    }
    Ok(index::sample(rng, pop.len(), m)
        .into_iter()
        .map(|i| &pop[i])
        .collect())
}

fn check_same_dim(parents: &[&[f64]]) -> Result<usize> {
    let dim = parents.first().map_or(0, |p| p.len());
    for p in parents {
        if p.len() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                actual: p.len(),
            });
        }
    }
    Ok(dim)
}

/// Unclipped BLX-α child: gene i ~ U[cmin − αI, cmax + αI].
pub fn blx_sample<R: Rng + ?Sized>(p1: &[f64], p2: &[f64], alpha: f64, rng: &mut R) -> Result<Vec<f64>> {
    check_same_dim(&[p1, p2])?;
    Ok(p1
        .iter()
        .zip(p2)
        .map(|(&a, &b)| {
            let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
            let width = hi - lo;
            if width == 0.0 {
                lo
            } else {
                let u: f64 = rng.gen();
                (lo - alpha * width) + u * (1.0 + 2.0 * alpha) * width
            }
        })
        .collect())
}

pub fn blx_alpha<R: Rng + ?Sized>(
    p1: &Individual,
    p2: &Individual,
    alpha: f64,
    bounds: &Bounds,
    rng: &mut R,
) -> Result<Individual> {
    let mut child = blx_sample(p1.genes(), p2.genes(), alpha, rng)?;
    clip_checked(&mut child, bounds)?;
    Ok(Individual::new(child))
}

/// Unclipped SPX child drawn uniformly from the simplex whose vertices are
/// the parents pushed away from their centroid by factor `epsilon`.
///
/// Uses the recursive construction: `c_0 = 0`, `r_{k-1} = u^{1/k}`,
/// `c_k = r_{k-1} (y_{k-1} - y_k + c_{k-1})`, child = `y_n + c_n`.
pub fn spx_sample<R: Rng + ?Sized>(parents: &[&[f64]], epsilon: f64, rng: &mut R) -> Result<Vec<f64>> {
    let dim = check_same_dim(parents)?;
    if parents.len() != dim + 1 {
        return Err(Error::config(format!(
            "SPX needs dim + 1 = {} parents, got {}",
            dim + 1,
            parents.len()
        )));
    }
    if parents.iter().all(|p| *p == parents[0]) {
        return Ok(parents[0].to_vec());
    }
    let n = parents.len() as f64;
    let mut centroid = vec![0.0; dim];
    for p in parents {
        for (c, v) in centroid.iter_mut().zip(p.iter()) {
            *c += v;
        }
    }
    centroid.iter_mut().for_each(|c| *c /= n);

    let vertex = |k: usize| -> Vec<f64> {
        parents[k]
            .iter()
            .zip(&centroid)
            .map(|(x, o)| o + epsilon * (x - o))
            .collect()
    };

    let mut prev = vertex(0);
    let mut c = vec![0.0; dim];
    for k in 1..parents.len() {
        let y = vertex(k);
        let u: f64 = rng.gen();
        let r = u.powf(1.0 / k as f64);
        for i in 0..dim {
            c[i] = r * (prev[i] - y[i] + c[i]);
        }
        prev = y;
    }
    Ok(prev.iter().zip(&c).map(|(y, ci)| y + ci).collect())
}

pub fn spx<R: Rng + ?Sized>(
    parents: &[&Individual],
    epsilon: f64,
    bounds: &Bounds,
    rng: &mut R,
) -> Result<Individual> {
    let genes: Vec<&[f64]> = parents.iter().map(|p| p.genes()).collect();
    let mut child = spx_sample(&genes, epsilon, rng)?;
    clip_checked(&mut child, bounds)?;
    Ok(Individual::new(child))
}

fn clip_checked(x: &mut [f64], bounds: &Bounds) -> Result<()> {
    if x.len() != bounds.dim() {
        return Err(Error::DimensionMismatch {
            expected: bounds.dim(),
            actual: x.len(),
        });
    }
    bounds.clip(x);
    Ok(())
}

fn cross<R: Rng + ?Sized>(
    parents: &[&Individual],
    spec: &CrossoverSpec,
    bounds: &Bounds,
    rng: &mut R,
) -> Result<Individual> {
    match spec.kind {
        CrossoverKind::Blx => blx_alpha(parents[0], parents[1], spec.alpha, bounds, rng),
        CrossoverKind::Spx => spx(parents, spec.epsilon(bounds.dim()), bounds, rng),
    }
}

/// Produces `count` unevaluated children from `pop`.
pub fn generate_candidates<R: Rng + ?Sized>(
    pop: &[Individual],
    spec: &CrossoverSpec,
    count: usize,
    bounds: &Bounds,
    rng: &mut R,
) -> Result<Vec<Individual>> {
    let m = spec.parents_required(bounds.dim());
    if pop.len() < m {
        return Err(Error::NotEnoughItems {
            requested: m,
            available: pop.len(),
        });
    }
    if count == 0 {
        return Ok(Vec::new());
    }
    match spec.parents {
        ParentPolicy::PerCandidate => (0..count)
            .map(|_| {
                let parents = sample_parents(pop, m, rng)?;
                cross(&parents, spec, bounds, rng)
            })
            .collect(),
        ParentPolicy::PerBatch => {
            let parents = sample_parents(pop, m, rng)?;
            (0..count).map(|_| cross(&parents, spec, bounds, rng)).collect()
        }
    }
}
