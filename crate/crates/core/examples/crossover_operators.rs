//! Draws children from BLX-α and SPX and prints where they land relative
//! to the parents.
//!
//! cargo run --example crossover_operators

use shx::operators::{blx_sample, spx_sample};
use shx::{generate_candidates, Bounds, CrossoverSpec, Individual, RandomStream};

fn mean_and_spread(children: &[Vec<f64>]) -> (Vec<f64>, Vec<f64>) {
    let n = children.len() as f64;
    let dim = children[0].len();
    let mean: Vec<f64> = (0..dim).map(|i| children.iter().map(|c| c[i]).sum::<f64>() / n).collect();
    let spread = (0..dim)
        .map(|i| (children.iter().map(|c| (c[i] - mean[i]).powi(2)).sum::<f64>() / n).sqrt())
        .collect();
    (mean, spread)
}

fn main() -> shx::Result<()> {
    let mut rng = RandomStream::new(42);

    let (p1, p2) = (vec![0.0, 1.0], vec![2.0, 1.0]);
    let kids: Vec<Vec<f64>> = (0..20_000)
        .map(|_| blx_sample(&p1, &p2, 0.5, &mut rng))
        .collect::<Result<_, _>>()?;
    let (mean, spread) = mean_and_spread(&kids);
    let lo = kids.iter().map(|k| k[0]).fold(f64::INFINITY, f64::min);
    let hi = kids.iter().map(|k| k[0]).fold(f64::NEG_INFINITY, f64::max);
    println!("BLX-0.5 of {p1:?} and {p2:?}");
    println!("  gene 0 in [{lo:.3}, {hi:.3}] (interval [-1, 3]), mean {:.3}, sd {:.3}", mean[0], spread[0]);
    println!("  gene 1 identical in both parents, sd {}", spread[1]);

    let triangle = [vec![0.0, 0.0], vec![1.0, 0.0], vec![0.0, 1.0]];
    let refs: Vec<&[f64]> = triangle.iter().map(Vec::as_slice).collect();
    let eps = 4f64.sqrt();
    let kids: Vec<Vec<f64>> = (0..20_000)
        .map(|_| spx_sample(&refs, eps, &mut rng))
        .collect::<Result<_, _>>()?;
    let (mean, spread) = mean_and_spread(&kids);
    println!("SPX (eps = {eps}) of a unit right triangle");
    println!("  mean ({:.3}, {:.3}) vs centroid (0.333, 0.333), sd ({:.3}, {:.3})", mean[0], mean[1], spread[0], spread[1]);

    // A whole candidate pool, clipped to the box, as the GA produces it.
    let bounds = Bounds::uniform(5, -5.12, 5.12)?;
    let pop: Vec<Individual> = (0..10)
        .map(|i| Individual::new(vec![i as f64 - 4.5; 5]))
        .collect();
    for spec in [CrossoverSpec::blx(), CrossoverSpec::spx()] {
        let pool = generate_candidates(&pop, &spec, 180, &bounds, &mut rng)?;
        let inside = pool.iter().all(|c| bounds.contains(c.genes()));
        let evaluated = pool.iter().filter(|c| c.is_evaluated()).count();
        println!(
            "{} pool: {} candidates from {} parents each, all in bounds: {inside}, evaluated: {evaluated}",
            spec.kind,
            pool.len(),
            spec.parents_required(5)
        );
    }
    Ok(())
}
