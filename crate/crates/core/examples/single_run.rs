//! One run of SHX against the plain operator at the default settings.
//!
//! cargo run --release --example single_run -- [sphere|rosenbrock|rastrigin|ackley1] [blx|spx] [clusters]

use std::time::Instant;

use shx::{run, ClusterCount, CrossoverKind, CrossoverSpec, FunctionName, RunConfig};

fn main() -> shx::Result<()> {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let function: FunctionName = args.first().map_or(Ok(FunctionName::Rastrigin), |s| s.parse())?;
    let kind: CrossoverKind = args.get(1).map_or(Ok(CrossoverKind::Spx), |s| s.parse())?;
    let clusters = match args.get(2) {
        Some(k) => ClusterCount::Fixed(k.parse().map_err(|_| shx::Error::Config(format!("bad cluster count `{k}`")))?),
        None => ClusterCount::Auto,
    };

    for shx in [false, true] {
        let config = RunConfig {
            function,
            crossover: CrossoverSpec::new(kind),
            shx,
            clusters,
            seed: 1,
            ..RunConfig::default()
        };
        let start = Instant::now();
        let trace = run(&config)?;
        println!(
            "{function} {kind} shx={shx:<5} k={:<4} final elite {:.4e}  FEs {}  ({:.2?})",
            if shx { config.cluster_count() } else { 0 },
            trace.final_fitness(),
            trace.total_fe(),
            start.elapsed()
        );
    }
    Ok(())
}
