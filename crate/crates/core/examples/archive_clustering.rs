//! Fills an archive, clusters it, pushes a few generations of survivors
//! through both update policies and shows how the cluster scores follow.
//!
//! cargo run --release --example archive_clustering

use rand::Rng;
use shx::{compute_scores, kmeans_fit, Archive, Bounds, KMeansSettings, RandomStream, UpdatePolicy};

fn main() -> shx::Result<()> {
    let dim = 2;
    let bounds = Bounds::uniform(dim, -5.0, 5.0)?;
    let settings = KMeansSettings::default();
    let k = 4;

    for policy in [UpdatePolicy::Sequential, UpdatePolicy::Random] {
        let mut rng = RandomStream::new(7);
        let mut archive = Archive::init_random(200, &bounds, &mut rng)?;
        let mut model = kmeans_fit(archive.entries(), k, None, &settings, &mut rng)?;
        println!("{policy} update, capacity {}", archive.capacity());
        for gen in 0..=8 {
            if gen > 0 {
                // Survivors concentrate around (3, 3).
                let batch: Vec<Vec<f64>> = (0..25)
                    .map(|_| (0..dim).map(|_| 3.0 + rng.gen_range(-0.5..0.5)).collect())
                    .collect();
                let written = archive.update(policy, &batch, &mut rng)?;
                model = model.refit(archive.entries(), &written, &settings)?;
            }
            let scores = compute_scores(&model, archive.len())?;
            let hot = model
                .centroids()
                .iter()
                .zip(scores.scores())
                .max_by(|a, b| a.1.total_cmp(b.1))
                .map(|(c, s)| format!("({:+.2}, {:+.2}) with {s:.2}", c[0], c[1]))
                .unwrap_or_default();
            println!(
                "  gen {gen}: {} lloyd steps, inertia {:8.2}, top cluster {hot}",
                model.iterations(),
                model.inertia()
            );
        }
    }
    Ok(())
}
