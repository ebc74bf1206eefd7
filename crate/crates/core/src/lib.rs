//! Real-coded genetic algorithm with search-history-driven crossover (SHX).
//!
//! Survivors of every generation are kept in a fixed-size archive that is
//! clustered with k-means. Crossover over-generates a pool of candidate
//! children; a roulette over the archive's cluster sizes then decides which
//! candidates become offspring. Only the chosen offspring are evaluated, so
//! SHX costs no extra objective evaluations compared with plain crossover.
//!
//! ```
//! use shx::{run, CrossoverSpec, FunctionName, RunConfig};
//!
//! let config = RunConfig {
//!     function: FunctionName::Rastrigin,
//!     crossover: CrossoverSpec::spx(),
//!     generations: 5,
//!     archive_generations: 3,
//!     ..RunConfig::default()
//! };
//! let trace = run(&config).unwrap();
//! assert_eq!(trace.total_fe(), 100 + 5 * 60);
//! ```

pub mod benchmarks;
pub mod engine;
pub mod error;
pub mod harness;
pub mod history;
pub mod individual;
pub mod operators;
pub mod random;
pub mod selection;

pub use benchmarks::{make_objective, Bounds, FunctionName, Objective};
pub use engine::{ga_generation, run, ClusterCount, GaState, GenerationRecord, RunConfig, RunTrace, SearchHistory};
pub use error::{Error, Result};
pub use history::{
    compute_scores, kmeans_fit, nearest_cluster, Archive, ClusterModel, KMeansSettings, ScoreHistogram,
    UpdatePolicy,
};
pub use individual::{evaluate, EvalCounter, Individual};
pub use operators::{
    blx_alpha, generate_candidates, sample_parents, spx, CrossoverKind, CrossoverSpec, ParentPolicy,
};
pub use random::RandomStream;
pub use selection::{roulette, shx_select, survivor_select, SurvivorRule};
