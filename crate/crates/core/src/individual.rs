use crate::benchmarks::Objective;
use crate::error::{Error, Result};

/// A real-valued genome with a lazily cached objective value.
///
/// The cache is cleared by every gene mutation, so a present fitness always
/// corresponds to the current genes.
#[derive(Clone, Debug, PartialEq)]
pub struct Individual {
    genes: Vec<f64>,
    fitness: Option<f64>,
}

impl Individual {
    pub fn new(genes: Vec<f64>) -> Self {
        Self {
            genes,
            fitness: None,
        }
    }

    pub fn genes(&self) -> &[f64] {
        &self.genes
    }

    pub fn into_genes(self) -> Vec<f64> {
        self.genes
    }

    pub fn dim(&self) -> usize {
        self.genes.len()
    }

    pub fn fitness(&self) -> Option<f64> {
        self.fitness
    }

    pub fn is_evaluated(&self) -> bool {
        self.fitness.is_some()
    }

    pub fn set_genes(&mut self, genes: Vec<f64>) {
        self.genes = genes;
        self.fitness = None;
    }

    pub fn genes_mut(&mut self) -> &mut [f64] {
        self.fitness = None;
        &mut self.genes
    }
}

/// Running count of objective evaluations. Only [`evaluate`] increments it.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct EvalCounter {
    count: u64,
}

impl EvalCounter {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn count(&self) -> u64 {
        self.count
    }
}

/// Returns the fitness of `ind`, evaluating and caching it on first use.
/// A cache hit costs no evaluation.
pub fn evaluate(ind: &mut Individual, objective: &Objective, counter: &mut EvalCounter) -> Result<f64> {
    if let Some(f) = ind.fitness {
        return Ok(f);
    }
    if ind.dim() != objective.dim() {
        return Err(Error::DimensionMismatch {
            expected: objective.dim(),
            actual: ind.dim(),
        });
    }
    let f = objective.value(&ind.genes)?;
    counter.count += 1;
    ind.fitness = Some(f);
    Ok(f)
}
