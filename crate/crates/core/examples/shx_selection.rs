//! Narrows a candidate pool with the cluster roulette and compares how many
//! picks land in each cluster against the cluster scores.
//!
//! cargo run --example shx_selection

use shx::{compute_scores, kmeans_fit, shx_select, Individual, KMeansSettings, RandomStream};

fn main() -> shx::Result<()> {
    let mut rng = RandomStream::new(3);

    // An archive with 90% of its members near 0 and 10% near 10.
    let mut archive: Vec<Vec<f64>> = (0..90).map(|i| vec![i as f64 * 0.01]).collect();
    archive.extend((0..10).map(|i| vec![10.0 + i as f64 * 0.01]));
    let model = kmeans_fit(&archive, 2, Some(&[vec![0.0], vec![10.0]]), &KMeansSettings::default(), &mut rng)?;
    let scores = compute_scores(&model, archive.len())?;
    println!("cluster scores: {:?}", scores.scores());

    // Equal numbers of candidates near each cluster.
    let pool = || -> Vec<Individual> {
        (0..90)
            .map(|i| Individual::new(vec![i as f64 * 0.001]))
            .chain((0..90).map(|i| Individual::new(vec![10.0 + i as f64 * 0.001])))
            .collect()
    };

    let trials = 200;
    let mut near_zero = 0;
    for _ in 0..trials {
        let picked = shx_select(pool(), &model, &scores, 60, &mut rng)?;
        near_zero += picked.iter().filter(|c| c.genes()[0] < 5.0).count();
    }
    let per_trial = near_zero as f64 / trials as f64;
    println!("60 of 180 candidates per trial, mean over {trials} trials:");
    println!("  from the dense cluster  {per_trial:.1}");
    println!("  from the sparse cluster {:.1}", 60.0 - per_trial);
    Ok(())
}
