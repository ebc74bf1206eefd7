//! Acceptance gate. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any criterion fails.
//!
//! Criteria 1-4 and 8 run the full default experiment plan (4 functions,
//! 6 variants, 10 seeds) twice, plus once more with 15 clusters for the
//! alternative cluster-count reading. Expect several minutes in release mode.

mod common;

use std::collections::BTreeSet;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use common::{barycentric, brute_force_lloyd, chi2_critical_p01, chi2_statistic, sorted, FifoOracle};
use rand::Rng;
use shx::harness::experiment::{parse_trace_file_name, SUMMARY_FILE};
use shx::harness::report::compare_report;
use shx::harness::{read_trace, run_experiment, ExperimentPlan, RunOptions, SummaryRow, Variant};
use shx::history::{kmeans_fit, Archive, KMeansSettings, UpdatePolicy};
use shx::operators::{blx_sample, spx_sample};
use shx::selection::roulette_at;
use shx::{
    compute_scores, roulette, shx_select, Bounds, ClusterCount, CrossoverKind, FunctionName,
    Individual, RandomStream,
};

struct Verdict {
    pass: bool,
    detail: String,
}

impl Verdict {
    fn new(pass: bool, detail: impl Into<String>) -> Self {
        Self {
            pass,
            detail: detail.into(),
        }
    }
}

fn report(id: u32, name: &str, v: &Verdict, elapsed: Duration) -> bool {
    let tag = if v.pass { "PASS" } else { "FAIL" };
    println!("{tag} {id} {name} ({:.1}s): {}", elapsed.as_secs_f64(), v.detail);
    v.pass
}

fn timed(f: impl FnOnce() -> Verdict) -> (Verdict, Duration) {
    let start = Instant::now();
    let v = f();
    (v, start.elapsed())
}

fn scratch(name: &str) -> PathBuf {
    let dir = Path::new(env!("CARGO_TARGET_TMPDIR")).join("acceptance").join(name);
    let _ = fs::remove_dir_all(&dir);
    dir
}

fn run_plan(plan: &ExperimentPlan, dir: &Path) -> Vec<SummaryRow> {
    let outcome = run_experiment(plan, dir, RunOptions::default()).expect("experiment failed to start");
    assert!(outcome.failures.is_empty(), "runs failed: {:?}", outcome.failures.len());
    outcome.summary
}

fn mean_of(rows: &[SummaryRow], f: FunctionName, v: Variant) -> f64 {
    rows.iter()
        .find(|r| r.function == f && r.variant == v)
        .unwrap_or_else(|| panic!("missing cell {f} {}", v.name()))
        .mean
}

// ---------------------------------------------------------------- 1

fn fe_parity(dir: &Path) -> Verdict {
    let mut seen = BTreeSet::new();
    let mut bad = Vec::new();
    for entry in fs::read_dir(dir).unwrap() {
        let path = entry.unwrap().path();
        let name = path.file_name().unwrap().to_string_lossy().into_owned();
        let Some((f, v, seed)) = parse_trace_file_name(&name) else {
            continue;
        };
        let rows = read_trace(&path).unwrap();
        let fe = rows.last().map_or(0, |r| r.fe_count);
        if fe != 6100 {
            bad.push(format!("{name}: {fe}"));
        }
        seen.insert((f, v.ordinal(), seed));
    }
    let expected = FunctionName::ALL.len() * Variant::ALL.len() * 10;
    Verdict::new(
        bad.is_empty() && seen.len() == expected,
        format!(
            "{} of {expected} traces end at fe_count 6100{}",
            seen.len() - bad.len().min(seen.len()),
            if bad.is_empty() {
                String::new()
            } else {
                format!("; mismatches: {}", bad.join(", "))
            }
        ),
    )
}

// ---------------------------------------------------------------- 2, 3

fn directional(rows: &[SummaryRow], kind: CrossoverKind, rastrigin_ratio: Option<f64>) -> Verdict {
    let base = Variant::new(kind, None);
    let seq = Variant::new(kind, Some(UpdatePolicy::Sequential));
    let mut wins = 0;
    let mut cells = Vec::new();
    for f in FunctionName::ALL {
        let b = mean_of(rows, f, base);
        let s = mean_of(rows, f, seq);
        if s < b {
            wins += 1;
        }
        cells.push(format!("{f} {b:.3e}->{s:.3e}"));
    }
    let ras = mean_of(rows, FunctionName::Rastrigin, base) / mean_of(rows, FunctionName::Rastrigin, seq);
    let ratio_ok = rastrigin_ratio.is_none_or(|min| ras >= min);
    let mut detail = format!("{} better on {wins}/4 ({})", seq.name(), cells.join(", "));
    if let Some(min) = rastrigin_ratio {
        detail.push_str(&format!("; rastrigin ratio {ras:.2} (need >= {min})"));
    }
    Verdict::new(wins >= 3 && ratio_ok, detail)
}

// ---------------------------------------------------------------- 4

fn sequential_vs_random(rows: &[SummaryRow]) -> Verdict {
    let report = compare_report(rows);
    let h = report.sequential_vs_random;
    // Independent recount straight from the summary rows.
    let (mut seq, mut rnd, mut tie) = (0, 0, 0);
    for f in FunctionName::ALL {
        for kind in [CrossoverKind::Blx, CrossoverKind::Spx] {
            let s = mean_of(rows, f, Variant::new(kind, Some(UpdatePolicy::Sequential)));
            let r = mean_of(rows, f, Variant::new(kind, Some(UpdatePolicy::Random)));
            match s.partial_cmp(&r).unwrap() {
                std::cmp::Ordering::Less => seq += 1,
                std::cmp::Ordering::Greater => rnd += 1,
                std::cmp::Ordering::Equal => tie += 1,
            }
        }
    }
    let text = report.to_string();
    let ok = h.cells() == 8
        && (h.sequential_wins, h.random_wins, h.ties) == (seq, rnd, tie)
        && report.missing.is_empty()
        && text.contains(&format!("sequential better in {seq} of 8 cells"));
    Verdict::new(
        ok,
        format!("sequential better in {seq} of 8 cells (random {rnd}, ties {tie})"),
    )
}

// ---------------------------------------------------------------- 5

fn operator_suites() -> Verdict {
    let mut rng = RandomStream::new(0x5eed_0005);
    let mut failures = Vec::new();

    for _ in 0..10_000 {
        let dim = rng.gen_range(1..=10);
        let alpha = 0.5;
        let p1: Vec<f64> = (0..dim).map(|_| rng.gen_range(-10.0..10.0)).collect();
        let p2: Vec<f64> = (0..dim).map(|_| rng.gen_range(-10.0..10.0)).collect();
        let child = blx_sample(&p1, &p2, alpha, &mut rng).unwrap();
        for i in 0..dim {
            let (lo, hi) = (p1[i].min(p2[i]), p1[i].max(p2[i]));
            let w = hi - lo;
            if child[i] < lo - alpha * w || child[i] > hi + alpha * w {
                failures.push(format!("BLX gene {} outside [{}, {}]", child[i], lo - alpha * w, hi + alpha * w));
            }
        }
    }

    for t in 0..1000 {
        let dim = 2 + t % 9;
        let eps = ((dim + 2) as f64).sqrt();
        let parents: Vec<Vec<f64>> = (0..=dim)
            .map(|_| (0..dim).map(|_| rng.gen_range(-5.0..5.0)).collect())
            .collect();
        let refs: Vec<&[f64]> = parents.iter().map(Vec::as_slice).collect();
        let child = spx_sample(&refs, eps, &mut rng).unwrap();
        let n = parents.len() as f64;
        let centroid: Vec<f64> = (0..dim).map(|i| parents.iter().map(|p| p[i]).sum::<f64>() / n).collect();
        let vertices: Vec<Vec<f64>> = parents
            .iter()
            .map(|p| p.iter().zip(&centroid).map(|(x, o)| o + eps * (x - o)).collect())
            .collect();
        match barycentric(&vertices, &child) {
            Some(w) if w.iter().all(|&wi| wi >= -1e-9) => {}
            Some(w) => failures.push(format!("SPX child outside simplex (dim {dim}): {w:?}")),
            None => failures.push(format!("singular simplex (dim {dim})")),
        }
    }

    let same: Vec<f64> = vec![1.5, -2.25, 3.0];
    if blx_sample(&same, &same, 0.5, &mut rng).unwrap() != same {
        failures.push("BLX with identical parents changed the genes".into());
    }
    let refs: Vec<&[f64]> = vec![&same; 4];
    if spx_sample(&refs, 5f64.sqrt(), &mut rng).unwrap() != same {
        failures.push("SPX with identical parents changed the genes".into());
    }
    let bounds = Bounds::uniform(3, -5.12, 5.12).unwrap();
    let ind = Individual::new(same.clone());
    let blx = shx::blx_alpha(&ind, &ind, 0.5, &bounds, &mut rng).unwrap();
    let spx = shx::spx(&[&ind, &ind, &ind, &ind], 5f64.sqrt(), &bounds, &mut rng).unwrap();
    if blx.genes() != same.as_slice() || spx.genes() != same.as_slice() {
        failures.push("clipped operators changed identical parents".into());
    }

    Verdict::new(
        failures.is_empty(),
        if failures.is_empty() {
            "BLX 10^4 pairs contained; SPX 10^3 simplices (dims 2-10) contained; degenerate parents exact".into()
        } else {
            format!("{} failures, first: {}", failures.len(), failures[0])
        },
    )
}

// ---------------------------------------------------------------- 6

fn random_points(rng: &mut RandomStream, n: usize, dim: usize) -> Vec<Vec<f64>> {
    (0..n)
        .map(|_| (0..dim).map(|_| rng.gen_range(-5.0..5.0)).collect())
        .collect()
}

fn history_suites() -> Verdict {
    let mut rng = RandomStream::new(0x5eed_0006);
    let mut failures: Vec<String> = Vec::new();

    // Capacity conservation, both policies, starting empty or full.
    for t in 0..1000 {
        let policy = if t % 2 == 0 {
            UpdatePolicy::Random
        } else {
            UpdatePolicy::Sequential
        };
        let capacity = rng.gen_range(1..=50);
        let mut archive = if t % 4 < 2 {
            Archive::new(capacity).unwrap()
        } else {
            Archive::init_random(capacity, &Bounds::uniform(2, -1.0, 1.0).unwrap(), &mut rng).unwrap()
        };
        let mut expected = archive.len();
        for _ in 0..rng.gen_range(1..=30) {
            let len = rng.gen_range(0..=capacity);
            let batch = random_points(&mut rng, len, 2);
            archive.update(policy, &batch, &mut rng).unwrap();
            expected = (expected + len).min(capacity);
            if archive.len() != expected {
                failures.push(format!("{policy:?}: size {} expected {expected}", archive.len()));
            }
        }
        if archive.update(policy, &random_points(&mut rng, capacity + 1, 2), &mut rng).is_ok() {
            failures.push("oversized batch accepted".into());
        }
    }

    // Sequential update against a FIFO queue simulation.
    for _ in 0..200 {
        let capacity = rng.gen_range(1..=40);
        let initial = random_points(&mut rng, capacity, 3);
        let mut archive = Archive::from_entries(capacity, initial.clone()).unwrap();
        let mut oracle = FifoOracle::new(capacity, &initial);
        for _ in 0..rng.gen_range(1..=20) {
            let len = rng.gen_range(1..=capacity);
            let batch = random_points(&mut rng, len, 3);
            archive.update_sequential(&batch).unwrap();
            oracle.push_batch(&batch);
            if sorted(archive.entries().to_vec()) != oracle.sorted() {
                failures.push("sequential update diverged from FIFO oracle".into());
            }
        }
    }

    // Inertia monotonicity and label optimality.
    let settings = KMeansSettings::default();
    for _ in 0..100 {
        let n = rng.gen_range(5..=200);
        let dim = rng.gen_range(1..=10);
        let k = rng.gen_range(1..=n.min(30));
        let points = random_points(&mut rng, n, dim);
        let model = kmeans_fit(&points, k, None, &settings, &mut rng).unwrap();
        if model
            .inertia_trace()
            .windows(2)
            .any(|w| w[1] > w[0] * (1.0 + 1e-12) + 1e-12)
        {
            failures.push(format!("inertia increased: {:?}", model.inertia_trace()));
        }
        let d2 = |a: &[f64], b: &[f64]| a.iter().zip(b).map(|(x, y)| (x - y).powi(2)).sum::<f64>();
        for (p, &l) in points.iter().zip(model.labels()) {
            let own = d2(p, &model.centroids()[l]);
            if model.centroids().iter().any(|c| d2(p, c) < own) {
                failures.push("point not assigned to its nearest centroid".into());
                break;
            }
        }
    }

    // Brute-force Lloyd oracle with identical initialization.
    for _ in 0..500 {
        let n = rng.gen_range(2..=30);
        let dim = rng.gen_range(1..=4);
        let k = rng.gen_range(1..=n.min(5));
        let points = random_points(&mut rng, n, dim);
        let init: Vec<Vec<f64>> = rand::seq::index::sample(&mut rng, n, k)
            .into_iter()
            .map(|i| points[i].clone())
            .collect();
        let model = kmeans_fit(&points, k, Some(&init), &settings, &mut rng).unwrap();
        let (_, inertia) = brute_force_lloyd(&points, &init, settings.max_iters, settings.tol);
        if (model.inertia() - inertia).abs() > 1e-9 {
            failures.push(format!("inertia {} vs oracle {inertia}", model.inertia()));
        }
    }

    Verdict::new(
        failures.is_empty(),
        if failures.is_empty() {
            "capacity conserved over 10^3 sequences; FIFO matches queue oracle; \
             inertia monotone and labels optimal on 100 instances; Lloyd oracle agrees within 1e-9"
                .into()
        } else {
            format!("{} failures, first: {}", failures.len(), failures[0])
        },
    )
}

// ---------------------------------------------------------------- 7

fn selection_suites() -> Verdict {
    let mut rng = RandomStream::new(0x5eed_0007);
    let mut failures: Vec<String> = Vec::new();

    let vectors: [&[f64]; 5] = [
        &[0.2, 0.3, 0.5],
        &[0.25, 0.25, 0.25, 0.25],
        &[0.9, 0.1],
        &[0.05, 0.0, 0.15, 0.3, 0.5],
        &[0.01, 0.04, 0.15, 0.2, 0.25, 0.35],
    ];
    let mut stats = Vec::new();
    for scores in vectors {
        let mut counts = vec![0u64; scores.len()];
        for _ in 0..100_000 {
            counts[roulette(scores, &mut rng).unwrap()] += 1;
        }
        let positive = scores.iter().filter(|&&s| s > 0.0).count();
        let stat = chi2_statistic(&counts, scores);
        let crit = chi2_critical_p01(positive - 1);
        let zero_hit = scores.iter().zip(&counts).any(|(&s, &c)| s == 0.0 && c > 0);
        stats.push(format!("{stat:.2}/{crit}"));
        if stat > crit || zero_hit {
            failures.push(format!("roulette {scores:?}: chi2 {stat:.3} > {crit} or zero-weight hit"));
        }
    }
    if roulette_at(&[0.5, 0.5], 0.25).unwrap() != 0 || roulette(&[0.0, 0.0], &mut rng).is_ok() {
        failures.push("roulette spot checks failed".into());
    }

    let settings = KMeansSettings::default();
    for t in 0..1000 {
        let dim = rng.gen_range(1..=5);
        let archive_n = rng.gen_range(1..=120);
        let archive = random_points(&mut rng, archive_n, dim);
        let k = match t % 4 {
            0 => 1,
            1 => archive_n,
            _ => rng.gen_range(1..=archive_n),
        };
        let model = kmeans_fit(&archive, k, None, &settings, &mut rng).unwrap();
        let scores = compute_scores(&model, archive_n).unwrap();
        let n_can = rng.gen_range(1..=60);
        let n_off = rng.gen_range(0..=n_can);
        let candidates: Vec<Individual> = if t % 8 == 7 {
            // All candidates in a tiny ball around one archive point.
            let c = &archive[0];
            (0..n_can)
                .map(|i| Individual::new(c.iter().map(|x| x + 1e-9 * i as f64).collect()))
                .collect()
        } else {
            random_points(&mut rng, n_can, dim).into_iter().map(Individual::new).collect()
        };
        let ids: Vec<Vec<f64>> = candidates.iter().map(|c| c.genes().to_vec()).collect();
        let picked = shx_select(candidates, &model, &scores, n_off, &mut rng).unwrap();
        let mut idx: Vec<usize> = picked
            .iter()
            .map(|p| ids.iter().position(|g| g.as_slice() == p.genes()).expect("foreign individual"))
            .collect();
        idx.sort_unstable();
        idx.dedup();
        if picked.len() != n_off || idx.len() != n_off || picked.iter().any(Individual::is_evaluated) {
            failures.push(format!("shx_select k={k} n_can={n_can} n_off={n_off} returned {}", picked.len()));
        }
    }

    Verdict::new(
        failures.is_empty(),
        if failures.is_empty() {
            format!(
                "chi2 (stat/critical) {}; shx_select exact over 10^3 configurations",
                stats.join(", ")
            )
        } else {
            format!("{} failures, first: {}", failures.len(), failures[0])
        },
    )
}

// ---------------------------------------------------------------- 8

fn csv_bodies(dir: &Path) -> Vec<(String, Vec<u8>)> {
    let mut files: Vec<(String, Vec<u8>)> = fs::read_dir(dir)
        .unwrap()
        .map(|e| e.unwrap().path())
        .filter(|p| p.extension().is_some_and(|x| x == "csv"))
        .map(|p| (p.file_name().unwrap().to_string_lossy().into_owned(), fs::read(&p).unwrap()))
        .collect();
    files.sort();
    files
}

fn determinism(a: &Path, b: &Path) -> Verdict {
    let fa = csv_bodies(a);
    let fb = csv_bodies(b);
    let differing: Vec<&str> = fa
        .iter()
        .zip(&fb)
        .filter(|(x, y)| x != y)
        .map(|(x, _)| x.0.as_str())
        .collect();
    let has_summary = fa.iter().any(|(n, _)| n == SUMMARY_FILE);
    Verdict::new(
        fa.len() == fb.len() && differing.is_empty() && has_summary,
        format!(
            "{} CSV files compared, {} differ",
            fa.len().max(fb.len()),
            differing.len() + fa.len().abs_diff(fb.len())
        ),
    )
}

fn main() -> ExitCode {
    let mut all = true;

    let (v, t) = timed(operator_suites);
    all &= report(5, "operator suites", &v, t);
    let (v, t) = timed(history_suites);
    all &= report(6, "history suites", &v, t);
    let (v, t) = timed(selection_suites);
    all &= report(7, "selection suites", &v, t);

    let plan = ExperimentPlan::default();
    let dir_a = scratch("default_a");
    let dir_b = scratch("default_b");
    let start = Instant::now();
    let rows = run_plan(&plan, &dir_a);
    println!("     default plan: {} cells in {:.1}s", rows.len(), start.elapsed().as_secs_f64());
    print!("{}", compare_report(&rows));

    let (v, t) = timed(|| fe_parity(&dir_a));
    all &= report(1, "FE parity", &v, t);
    let (v, t) = timed(|| directional(&rows, CrossoverKind::Spx, Some(2.0)));
    all &= report(2, "SPX directional", &v, t);

    let mut k15 = plan.clone();
    k15.base.clusters = ClusterCount::Fixed(15);
    let rows15 = run_plan(&k15, &scratch("k15"));
    let v15 = directional(&rows15, CrossoverKind::Spx, Some(2.0));
    println!("INFO 2 SPX directional with 15 clusters: {}", v15.detail);
    let b15 = directional(&rows15, CrossoverKind::Blx, None);
    println!("INFO 3 BLX directional with 15 clusters: {}", b15.detail);

    let (v, t) = timed(|| directional(&rows, CrossoverKind::Blx, None));
    all &= report(3, "BLX directional", &v, t);
    let (v, t) = timed(|| sequential_vs_random(&rows));
    all &= report(4, "sequential vs random", &v, t);

    run_plan(&plan, &dir_b);
    let (v, t) = timed(|| determinism(&dir_a, &dir_b));
    all &= report(8, "determinism", &v, t);

    if all {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
