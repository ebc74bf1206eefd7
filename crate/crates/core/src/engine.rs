//! The generation loop.
//!
//! One generation runs, in this order:
//!
//! 1. crossover: `candidates` children with SHX on, `offspring` children
//!    without it;
//! 2. SHX selection of `offspring` children from the candidate pool;
//! 3. evaluation of the selected offspring only;
//! 4. survivor selection;
//! 5. archive update with the accepted offspring;
//! 6. k-means warm-started from the previous centroids;
//! 7. score recomputation.
//!
//! Steps 5–7 are skipped when no offspring survived. All randomness is drawn
//! from a single [`RandomStream`] in exactly this order, so a seed fully
//! determines a run.

use rand::Rng;

use crate::benchmarks::{objective, Bounds, FunctionName, Objective};
use crate::error::{Error, Result};
use crate::history::{compute_scores, kmeans_fit, Archive, ClusterModel, KMeansSettings, ScoreHistogram, UpdatePolicy};
use crate::individual::{evaluate, EvalCounter, Individual};
use crate::operators::{generate_candidates, CrossoverSpec};
use crate::random::RandomStream;
use crate::selection::{shx_select, survivor_select, SurvivorRule};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum ClusterCount {
    /// Half the archive capacity.
    #[default]
    Auto,
    Fixed(usize),
}

#[derive(Clone, Debug, PartialEq)]
pub struct RunConfig {
    pub function: FunctionName,
    pub dim: usize,
    /// Per-coordinate box override; `None` uses the function's default box.
    pub bounds: Option<(f64, f64)>,
    pub population: usize,
    pub generations: usize,
    /// Size of the SHX candidate pool.
    pub candidates: usize,
    /// Offspring evaluated per generation.
    pub offspring: usize,
    pub crossover: CrossoverSpec,
    pub shx: bool,
    /// Archive capacity in generations' worth of offspring.
    pub archive_generations: usize,
    pub clusters: ClusterCount,
    pub archive_update: UpdatePolicy,
    pub kmeans: KMeansSettings,
    pub survivor_rule: SurvivorRule,
    pub seed: u64,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            function: FunctionName::Sphere,
            dim: 10,
            bounds: None,
            population: 100,
            generations: 100,
            candidates: 180,
            offspring: 60,
            crossover: CrossoverSpec::blx(),
            shx: true,
            archive_generations: 30,
            clusters: ClusterCount::Auto,
            archive_update: UpdatePolicy::Sequential,
            kmeans: KMeansSettings::default(),
            survivor_rule: SurvivorRule::Truncation,
            seed: 0,
        }
    }
}

impl RunConfig {
    pub fn archive_capacity(&self) -> usize {
        self.archive_generations * self.offspring
    }

    pub fn cluster_count(&self) -> usize {
        match self.clusters {
            ClusterCount::Auto => (self.archive_capacity() / 2).max(1),
            ClusterCount::Fixed(k) => k,
        }
    }

    pub fn objective(&self) -> Result<Objective> {
        let obj = objective(self.function, self.dim)?;
        match self.bounds {
            Some((lo, hi)) => obj.with_bounds(Bounds::uniform(self.dim, lo, hi)?),
            None => Ok(obj),
        }
    }

    pub fn validate(&self) -> Result<()> {
        self.objective()?;
        self.crossover.validate()?;
        if self.population == 0 {
            return Err(Error::config("population must be at least 1"));
        }
        if self.offspring == 0 {
            return Err(Error::config("offspring must be at least 1"));
        }
        if self.candidates < self.offspring {
            return Err(Error::config(format!(
                "candidates ({}) must be >= offspring ({})",
                self.candidates, self.offspring
            )));
        }
        if self.offspring > self.population {
            return Err(Error::config(format!(
                "offspring ({}) must be <= population ({})",
                self.offspring, self.population
            )));
        }
        let need = self.crossover.parents_required(self.dim);
        if self.population < need {
            return Err(Error::config(format!(
                "{} crossover needs {need} parents but population is {}",
                self.crossover.kind, self.population
            )));
        }
        if self.shx {
            if self.archive_generations == 0 {
                return Err(Error::config("archive_generations must be at least 1"));
            }
            let k = self.cluster_count();
            if k == 0 || k > self.archive_capacity() {
                return Err(Error::config(format!(
                    "clusters ({k}) must be in 1..={}",
                    self.archive_capacity()
                )));
            }
        }
        if self.kmeans.tol.is_nan() || self.kmeans.tol < 0.0 {
            return Err(Error::config("kmeans_tol must be >= 0"));
        }
        Ok(())
    }
}

/// Archive together with its current clustering and scores.
#[derive(Clone, Debug, PartialEq)]
pub struct SearchHistory {
    pub archive: Archive,
    pub model: ClusterModel,
    pub scores: ScoreHistogram,
}

#[derive(Clone, Debug)]
pub struct GaState {
    pub objective: Objective,
    pub population: Vec<Individual>,
    /// Present only when SHX is enabled.
    pub history: Option<SearchHistory>,
    pub generation: usize,
    pub counter: EvalCounter,
    pub elite: Individual,
}

#[derive(Clone, Debug, PartialEq)]
pub struct GenerationRecord {
    pub generation: usize,
    pub best_fitness: f64,
    pub mean_fitness: f64,
    pub fe_count: u64,
    /// Mean pairwise distance among this generation's offspring
    /// (0 for the initial record).
    pub offspring_diversity: f64,
    pub survivors: usize,
}

#[derive(Clone, Debug, PartialEq)]
pub struct RunTrace {
    pub records: Vec<GenerationRecord>,
    /// Best individual of the final population.
    pub elite: Individual,
}

impl RunTrace {
    pub fn final_fitness(&self) -> f64 {
        self.elite.fitness().unwrap_or(f64::NAN)
    }

    pub fn total_fe(&self) -> u64 {
        self.records.last().map_or(0, |r| r.fe_count)
    }
}

fn random_point<R: Rng + ?Sized>(bounds: &Bounds, rng: &mut R) -> Vec<f64> {
    bounds
        .lower
        .iter()
        .zip(&bounds.upper)
        .map(|(l, u)| rng.gen_range(*l..=*u))
        .collect()
}

fn best_of(pop: &[Individual]) -> &Individual {
    pop.iter()
        .min_by(|a, b| {
            a.fitness()
                .unwrap_or(f64::INFINITY)
                .total_cmp(&b.fitness().unwrap_or(f64::INFINITY))
        })
        .expect("population is never empty")
}

fn mean_pairwise_distance(inds: &[Individual]) -> f64 {
    let n = inds.len();
    if n < 2 {
        return 0.0;
    }
    let mut total = 0.0;
    for i in 0..n {
        for j in i + 1..n {
            total += inds[i]
                .genes()
                .iter()
                .zip(inds[j].genes())
                .map(|(a, b)| (a - b) * (a - b))
                .sum::<f64>()
                .sqrt();
        }
    }
    total / (n * (n - 1) / 2) as f64
}

impl GaState {
    /// Random population (evaluated) and, with SHX on, a random archive with
    /// its initial cold-start clustering.
    pub fn init(config: &RunConfig, rng: &mut RandomStream) -> Result<Self> {
        config.validate()?;
        let objective = config.objective()?;
        let mut counter = EvalCounter::new();
        let mut population = Vec::with_capacity(config.population);
        for _ in 0..config.population {
            population.push(Individual::new(random_point(objective.bounds(), rng)));
        }
        for ind in &mut population {
            evaluate(ind, &objective, &mut counter)?;
        }
        let history = if config.shx {
            let archive = Archive::init_random(config.archive_capacity(), objective.bounds(), rng)?;
            let model = kmeans_fit(archive.entries(), config.cluster_count(), None, &config.kmeans, rng)?;
            let scores = compute_scores(&model, archive.len())?;
            Some(SearchHistory {
                archive,
                model,
                scores,
            })
        } else {
            None
        };
        let elite = best_of(&population).clone();
        Ok(Self {
            objective,
            population,
            history,
            generation: 0,
            counter,
            elite,
        })
    }

    pub fn record(&self, offspring_diversity: f64, survivors: usize) -> GenerationRecord {
        let fits: Vec<f64> = self
            .population
            .iter()
            .map(|i| i.fitness().unwrap_or(f64::NAN))
            .collect();
        GenerationRecord {
            generation: self.generation,
            best_fitness: best_of(&self.population).fitness().unwrap_or(f64::NAN),
            mean_fitness: fits.iter().sum::<f64>() / fits.len() as f64,
            fe_count: self.counter.count(),
            offspring_diversity,
            survivors,
        }
    }
}

/// Advances `state` by one generation and returns its record.
pub fn ga_generation(state: &mut GaState, config: &RunConfig, rng: &mut RandomStream) -> Result<GenerationRecord> {
    let bounds = state.objective.bounds().clone();
    let mut offspring = match &state.history {
        Some(h) => {
            let pool = generate_candidates(&state.population, &config.crossover, config.candidates, &bounds, rng)?;
            shx_select(pool, &h.model, &h.scores, config.offspring, rng)?
        }
        None => generate_candidates(&state.population, &config.crossover, config.offspring, &bounds, rng)?,
    };
    let diversity = mean_pairwise_distance(&offspring);
    for ind in &mut offspring {
        evaluate(ind, &state.objective, &mut state.counter)?;
    }

    let population = std::mem::take(&mut state.population);
    let (next, survivors) = survivor_select(population, offspring, config.survivor_rule)?;
    state.population = next;

    if let Some(h) = &mut state.history {
        if !survivors.is_empty() {
            let batch: Vec<Vec<f64>> = survivors.iter().map(|s| s.genes().to_vec()).collect();
            let written = h.archive.update(config.archive_update, &batch, rng)?;
            // Same result as kmeans_fit warm-started from the current centroids.
            h.model = h.model.refit(h.archive.entries(), &written, &config.kmeans)?;
            h.scores = compute_scores(&h.model, h.archive.len())?;
        }
    }

    state.generation += 1;
    let best = best_of(&state.population);
    if best.fitness() < state.elite.fitness() {
        state.elite = best.clone();
    }
    Ok(state.record(diversity, survivors.len()))
}

/// Runs a full experiment for one configuration and seed.
pub fn run(config: &RunConfig) -> Result<RunTrace> {
    let mut rng = RandomStream::new(config.seed);
    let mut state = GaState::init(config, &mut rng)?;
    let mut records = Vec::with_capacity(config.generations + 1);
    records.push(state.record(0.0, 0));
    for _ in 0..config.generations {
        records.push(ga_generation(&mut state, config, &mut rng)?);
    }
    Ok(RunTrace {
        records,
        elite: best_of(&state.population).clone(),
    })
}
