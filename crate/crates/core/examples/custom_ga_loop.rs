//! Drives the generation loop by hand to watch the archive and offspring
//! diversity, instead of calling `run`.
//!
//! cargo run --release --example custom_ga_loop

use shx::{ga_generation, ClusterCount, CrossoverSpec, FunctionName, GaState, RandomStream, RunConfig};

fn main() -> shx::Result<()> {
    let config = RunConfig {
        function: FunctionName::Ackley1,
        crossover: CrossoverSpec::spx(),
        generations: 60,
        clusters: ClusterCount::Fixed(15),
        seed: 11,
        ..RunConfig::default()
    };
    config.validate()?;
    let mut rng = RandomStream::new(config.seed);
    let mut state = GaState::init(&config, &mut rng)?;
    println!("gen  best        mean        FEs   survivors  diversity  archive");
    for _ in 0..config.generations {
        let rec = ga_generation(&mut state, &config, &mut rng)?;
        if rec.generation % 10 == 0 {
            let archive = state.history.as_ref().map_or(0, |h| h.archive.len());
            println!(
                "{:<4} {:<11.4e} {:<11.4e} {:<5} {:<10} {:<10.3} {}",
                rec.generation, rec.best_fitness, rec.mean_fitness, rec.fe_count, rec.survivors,
                rec.offspring_diversity, archive
            );
        }
    }
    Ok(())
}
