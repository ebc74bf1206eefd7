//! Search history: the survivor archive, its clustering and the per-cluster
//! score histogram.
//!
//! The archive has a fixed capacity. Survivors of each generation overwrite
//! existing entries, either at uniformly random positions
//! ([`UpdatePolicy::Random`]) or oldest-first ([`UpdatePolicy::Sequential`]).
//! After every update the archive is re-clustered with Lloyd's k-means,
//! warm-started from the previous centroids, and the normalized cluster sizes
//! become the roulette weights used by SHX offspring selection.

use std::fmt;
use std::str::FromStr;

use rand::seq::index;
use rand::Rng;

use crate::benchmarks::Bounds;
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum UpdatePolicy {
    Random,
    Sequential,
}

impl UpdatePolicy {
    pub fn as_str(self) -> &'static str {
        match self {
            UpdatePolicy::Random => "random",
            UpdatePolicy::Sequential => "sequential",
        }
    }
}

impl fmt::Display for UpdatePolicy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for UpdatePolicy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "random" => Ok(UpdatePolicy::Random),
            "sequential" => Ok(UpdatePolicy::Sequential),
            other => Err(Error::config(format!(
                "unknown archive update `{other}` (valid: random, sequential)"
            ))),
        }
    }
}

/// Fixed-capacity store of survivor genomes.
///
/// Each entry carries an arrival index; indices are strictly increasing in
/// insertion order and are never reused.
#[derive(Clone, Debug, PartialEq)]
pub struct Archive {
    capacity: usize,
    entries: Vec<Vec<f64>>,
    arrivals: Vec<u64>,
    next_arrival: u64,
}

impl Archive {
    pub fn new(capacity: usize) -> Result<Self> {
        if capacity == 0 {
            return Err(Error::config("archive capacity must be at least 1"));
        }
        Ok(Self {
            capacity,
            entries: Vec::with_capacity(capacity),
            arrivals: Vec::with_capacity(capacity),
            next_arrival: 0,
        })
    }

    /// Builds an archive from existing entries; arrival order follows slice order.
    pub fn from_entries(capacity: usize, entries: Vec<Vec<f64>>) -> Result<Self> {
        if entries.len() > capacity {
            return Err(Error::BatchTooLarge {
                batch: entries.len(),
                capacity,
            });
        }
        let mut archive = Self::new(capacity)?;
        for e in entries {
            archive.push(e);
        }
        Ok(archive)
    }

    /// `capacity` points drawn uniformly from the box.
    pub fn init_random<R: Rng + ?Sized>(capacity: usize, bounds: &Bounds, rng: &mut R) -> Result<Self> {
        let mut archive = Self::new(capacity)?;
        for _ in 0..capacity {
            let p = bounds
                .lower
                .iter()
                .zip(&bounds.upper)
                .map(|(l, u)| rng.gen_range(*l..=*u))
                .collect();
            archive.push(p);
        }
        Ok(archive)
    }

    pub fn capacity(&self) -> usize {
        self.capacity
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn is_full(&self) -> bool {
        self.entries.len() == self.capacity
    }

    pub fn entries(&self) -> &[Vec<f64>] {
        &self.entries
    }

    pub fn arrivals(&self) -> &[u64] {
        &self.arrivals
    }

    fn push(&mut self, genes: Vec<f64>) {
        self.entries.push(genes);
        self.arrivals.push(self.next_arrival);
        self.next_arrival += 1;
    }

    fn overwrite(&mut self, slot: usize, genes: Vec<f64>) {
        self.entries[slot] = genes;
        self.arrivals[slot] = self.next_arrival;
        self.next_arrival += 1;
    }

    /// Fills free slots first; returns the slots written and the part of
    /// `batch` that still needs a slot.
    fn fill<'a>(&mut self, batch: &'a [Vec<f64>]) -> Result<(Vec<usize>, &'a [Vec<f64>])> {
        if batch.len() > self.capacity {
            return Err(Error::BatchTooLarge {
                batch: batch.len(),
                capacity: self.capacity,
            });
        }
        let free = (self.capacity - self.entries.len()).min(batch.len());
        let mut written = Vec::with_capacity(batch.len());
        for genes in &batch[..free] {
            written.push(self.entries.len());
            self.push(genes.clone());
        }
        Ok((written, &batch[free..]))
    }

    /// Overwrites `batch.len()` distinct, uniformly chosen slots. Returns the
    /// slots written, in batch order.
    pub fn update_random<R: Rng + ?Sized>(&mut self, batch: &[Vec<f64>], rng: &mut R) -> Result<Vec<usize>> {
        let (mut written, rest) = self.fill(batch)?;
        if rest.is_empty() {
            return Ok(written);
        }
        let slots = index::sample(rng, self.entries.len(), rest.len());
        for (slot, genes) in slots.into_iter().zip(rest) {
            self.overwrite(slot, genes.clone());
            written.push(slot);
        }
        Ok(written)
    }

    /// Overwrites the `batch.len()` oldest entries (FIFO). Returns the slots
    /// written, in batch order.
    pub fn update_sequential(&mut self, batch: &[Vec<f64>]) -> Result<Vec<usize>> {
        let (mut written, rest) = self.fill(batch)?;
        if rest.is_empty() {
            return Ok(written);
        }
        let mut slots: Vec<usize> = (0..self.entries.len()).collect();
        slots.sort_unstable_by_key(|&i| self.arrivals[i]);
        for (&slot, genes) in slots.iter().zip(rest) {
            self.overwrite(slot, genes.clone());
            written.push(slot);
        }
        Ok(written)
    }

    pub fn update<R: Rng + ?Sized>(
        &mut self,
        policy: UpdatePolicy,
        batch: &[Vec<f64>],
        rng: &mut R,
    ) -> Result<Vec<usize>> {
        match policy {
            UpdatePolicy::Random => self.update_random(batch, rng),
            UpdatePolicy::Sequential => self.update_sequential(batch),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct KMeansSettings {
    pub max_iters: usize,
    /// Convergence threshold on the largest centroid displacement.
    pub tol: f64,
}

impl Default for KMeansSettings {
    fn default() -> Self {
        Self {
            max_iters: 100,
            tol: 1e-6,
        }
    }
}

/// Result of a k-means fit over the archive.
#[derive(Clone, Debug)]
pub struct ClusterModel {
    centroids: Vec<Vec<f64>>,
    labels: Vec<usize>,
    /// Squared distance of each point to its assigned centroid.
    dists: Vec<f64>,
    /// Lower bound on each point's distance to every centroid other than its
    /// own. Only used to skip scans; never affects the result.
    lower: Vec<f64>,
    iterations: usize,
    inertia_trace: Vec<f64>,
}

impl PartialEq for ClusterModel {
    fn eq(&self, other: &Self) -> bool {
        self.centroids == other.centroids
            && self.labels == other.labels
            && self.dists == other.dists
            && self.iterations == other.iterations
            && self.inertia_trace == other.inertia_trace
    }
}

impl ClusterModel {
    pub fn k(&self) -> usize {
        self.centroids.len()
    }

    pub fn centroids(&self) -> &[Vec<f64>] {
        &self.centroids
    }

    pub fn labels(&self) -> &[usize] {
        &self.labels
    }

    /// Number of centroid-update steps performed.
    pub fn iterations(&self) -> usize {
        self.iterations
    }

    /// Within-cluster sum of squares after each assignment step. The last
    /// value is the inertia of the returned model.
    pub fn inertia_trace(&self) -> &[f64] {
        &self.inertia_trace
    }

    pub fn inertia(&self) -> f64 {
        self.inertia_trace.last().copied().unwrap_or(0.0)
    }

    pub fn cluster_sizes(&self) -> Vec<usize> {
        let mut sizes = vec![0; self.k()];
        for &l in &self.labels {
            sizes[l] += 1;
        }
        sizes
    }
}

fn sq_dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
}

/// Index and squared distance of the closest centroid; ties go to the lowest id.
///
/// `centroids` is row-major with `dim` columns.
fn closest(point: &[f64], centroids: &[f64], dim: usize) -> (usize, f64) {
    let mut best = 0;
    let mut best_d = f64::INFINITY;
    for (c, row) in centroids.chunks_exact(dim).enumerate() {
        let d = sq_dist(point, row);
        if d < best_d {
            best_d = d;
            best = c;
        }
    }
    (best, best_d)
}

/// Like [`closest`], also returning the Euclidean (not squared) distance to
/// the runner-up centroid (infinite when `k == 1`).
fn closest2(point: &[f64], centroids: &[f64], dim: usize) -> (usize, f64, f64) {
    let mut best = 0;
    let mut best_d = f64::INFINITY;
    let mut second_d = f64::INFINITY;
    for (c, row) in centroids.chunks_exact(dim).enumerate() {
        let d = sq_dist(point, row);
        if d < best_d {
            second_d = best_d;
            best_d = d;
            best = c;
        } else if d < second_d {
            second_d = d;
        }
    }
    (best, best_d, second_d.sqrt())
}

fn flatten(rows: &[Vec<f64>]) -> Vec<f64> {
    rows.iter().flat_map(|r| r.iter().copied()).collect()
}

/// Closest centroid of `model` to `point` by Euclidean distance, lowest id on ties.
pub fn nearest_cluster(model: &ClusterModel, point: &[f64]) -> Result<usize> {
    let dim = model.centroids.first().map_or(0, Vec::len);
    if point.len() != dim {
        return Err(Error::DimensionMismatch {
            expected: dim,
            actual: point.len(),
        });
    }
    let flat = flatten(&model.centroids);
    Ok(closest(point, &flat, dim).0)
}

/// Lloyd's k-means.
///
/// With `init = None` the starting centroids are `k` distinct archive entries
/// chosen uniformly; otherwise `init` is used as given (warm start). Each
/// iteration recomputes centroids as member means and reassigns every point.
/// Iteration stops when no label changes, when the largest centroid shift
/// drops below `settings.tol`, or after `settings.max_iters` updates.
///
/// A cluster left empty by an assignment step is reseeded at the point that
/// lies farthest from its own centroid (lowest index on ties, each point used
/// at most once per step).
pub fn kmeans_fit<R: Rng + ?Sized>(
    points: &[Vec<f64>],
    k: usize,
    init: Option<&[Vec<f64>]>,
    settings: &KMeansSettings,
    rng: &mut R,
) -> Result<ClusterModel> {
    if k == 0 {
        return Err(Error::config("k must be at least 1"));
    }
    if k > points.len() {
        return Err(Error::NotEnoughItems {
            requested: k,
            available: points.len(),
        });
    }
    let dim = points[0].len();
    if let Some(p) = points.iter().find(|p| p.len() != dim) {
        return Err(Error::DimensionMismatch {
            expected: dim,
            actual: p.len(),
        });
    }
    let centroids: Vec<f64> = match init {
        Some(init) => {
            if init.len() != k {
                return Err(Error::config(format!(
                    "warm start has {} centroids, expected {k}",
                    init.len()
                )));
            }
            if let Some(c) = init.iter().find(|c| c.len() != dim) {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    actual: c.len(),
                });
            }
            flatten(init)
        }
        None => index::sample(rng, points.len(), k)
            .into_iter()
            .flat_map(|i| points[i].iter().copied())
            .collect(),
    };

    let mut labels = vec![0usize; points.len()];
    let mut dists = vec![0.0f64; points.len()];
    let mut lower = vec![0.0f64; points.len()];
    for (i, p) in points.iter().enumerate() {
        (labels[i], dists[i], lower[i]) = closest2(p, &centroids, dim);
    }
    Ok(lloyd(points, dim, centroids, labels, dists, lower, settings))
}

impl ClusterModel {
    /// Warm-started refit after some archive slots were overwritten.
    ///
    /// Produces exactly the same model as
    /// `kmeans_fit(points, self.k(), Some(self.centroids()), ..)` but reuses
    /// the previous assignment for every slot not listed in `changed`.
    pub fn refit(&self, points: &[Vec<f64>], changed: &[usize], settings: &KMeansSettings) -> Result<ClusterModel> {
        if points.len() != self.labels.len() {
            return Err(Error::DimensionMismatch {
                expected: self.labels.len(),
                actual: points.len(),
            });
        }
        let dim = self.centroids[0].len();
        if let Some(p) = points.iter().find(|p| p.len() != dim) {
            return Err(Error::DimensionMismatch {
                expected: dim,
                actual: p.len(),
            });
        }
        let centroids = flatten(&self.centroids);
        let mut labels = self.labels.clone();
        let mut dists = self.dists.clone();
        let mut lower = self.lower.clone();
        for &i in changed {
            (labels[i], dists[i], lower[i]) = closest2(&points[i], &centroids, dim);
        }
        Ok(lloyd(points, dim, centroids, labels, dists, lower, settings))
    }
}

/// Centroids whose shift is checked explicitly instead of through the
/// shared lower bound.
const JUMPERS: usize = 16;

/// Lloyd iterations from a valid assignment of `points` to `centroids`.
///
/// Reassignment is exact but skips most distance scans: each point carries a
/// lower bound on its distance to every other centroid, decreased by the
/// largest centroid shift after each update. The few centroids that moved the
/// most (typically reseeded ones) are measured directly instead, so a single
/// large jump does not invalidate every bound. A point keeps its label only
/// when its own centroid is strictly closer than that bound, with a relative
/// margin far above rounding error; any other point gets a full scan.
fn lloyd(
    points: &[Vec<f64>],
    dim: usize,
    mut centroids: Vec<f64>,
    mut labels: Vec<usize>,
    mut dists: Vec<f64>,
    mut lower: Vec<f64>,
    settings: &KMeansSettings,
) -> ClusterModel {
    let n = points.len();
    let k = centroids.len() / dim;
    let scale = points
        .iter()
        .flatten()
        .chain(&centroids)
        .fold(0.0f64, |m, x| m.max(x.abs()));
    let margin = 1e-9 * (1.0 + scale);
    let mut inertia_trace = vec![dists.iter().sum()];
    let mut iterations = 0;
    let mut sums = vec![0.0; k * dim];
    let mut counts = vec![0usize; k];
    let mut used = vec![false; n];
    let mut shifts = vec![0.0f64; k];
    let mut moved_ids = Vec::with_capacity(k);
    let mut new = vec![0.0; dim];

    while iterations < settings.max_iters {
        sums.iter_mut().for_each(|s| *s = 0.0);
        counts.iter_mut().for_each(|c| *c = 0);
        for (p, &l) in points.iter().zip(&labels) {
            counts[l] += 1;
            for (s, x) in sums[l * dim..(l + 1) * dim].iter_mut().zip(p) {
                *s += x;
            }
        }

        used.iter_mut().for_each(|u| *u = false);
        moved_ids.clear();
        let mut shift = 0.0f64;
        for c in 0..k {
            let row = c * dim..(c + 1) * dim;
            if counts[c] > 0 {
                let m = counts[c] as f64;
                for (v, s) in new.iter_mut().zip(&sums[row.clone()]) {
                    *v = s / m;
                }
            } else {
                let far = (0..n)
                    .filter(|&i| !used[i])
                    .fold(None::<usize>, |best, i| match best {
                        Some(b) if dists[b] >= dists[i] => Some(b),
                        _ => Some(i),
                    });
                match far {
                    Some(i) => {
                        used[i] = true;
                        new.copy_from_slice(&points[i]);
                    }
                    None => new.copy_from_slice(&centroids[row.clone()]),
                }
            }
            shifts[c] = 0.0;
            if new[..] != centroids[row.clone()] {
                shifts[c] = sq_dist(&centroids[row.clone()], &new).sqrt();
                moved_ids.push(c);
                shift = shift.max(shifts[c]);
                centroids[row].copy_from_slice(&new);
            }
        }
        iterations += 1;

        moved_ids.sort_unstable_by(|&a, &b| shifts[b].total_cmp(&shifts[a]).then(a.cmp(&b)));
        let jumpers = &moved_ids[..moved_ids.len().min(JUMPERS)];
        let rest_shift = moved_ids.get(JUMPERS).map_or(0.0, |&c| shifts[c]);

        let mut changed = false;
        for (i, p) in points.iter().enumerate() {
            let own = labels[i];
            let d_own = sq_dist(p, &centroids[own * dim..(own + 1) * dim]);
            let u = d_own.sqrt() + margin;
            let mut bound = lower[i] - rest_shift - margin;
            let mut keep = u < bound;
            if keep {
                for &j in jumpers.iter().filter(|&&j| j != own) {
                    let dj = sq_dist(p, &centroids[j * dim..(j + 1) * dim]).sqrt();
                    if dj - margin <= u {
                        keep = false;
                        break;
                    }
                    bound = bound.min(dj - margin);
                }
            }
            if keep {
                dists[i] = d_own;
                lower[i] = bound;
            } else {
                let (c, d, second) = closest2(p, &centroids, dim);
                changed |= own != c;
                labels[i] = c;
                dists[i] = d;
                lower[i] = second;
            }
        }
        inertia_trace.push(dists.iter().sum());
        if !changed || shift < settings.tol {
            break;
        }
    }

    ClusterModel {
        centroids: centroids.chunks_exact(dim).map(<[f64]>::to_vec).collect(),
        labels,
        dists,
        lower,
        iterations,
        inertia_trace,
    }
}

/// Per-cluster share of the archive: `scores[i] = |cluster i| / archive_size`.
#[derive(Clone, Debug, PartialEq)]
pub struct ScoreHistogram {
    scores: Vec<f64>,
}

impl ScoreHistogram {
    pub fn from_scores(scores: Vec<f64>) -> Result<Self> {
        if scores.is_empty() || scores.iter().any(|s| !(s.is_finite() && *s >= 0.0)) {
            return Err(Error::DegenerateWeights);
        }
        Ok(Self { scores })
    }

    pub fn scores(&self) -> &[f64] {
        &self.scores
    }

    pub fn len(&self) -> usize {
        self.scores.len()
    }

    pub fn is_empty(&self) -> bool {
        self.scores.is_empty()
    }
}

pub fn compute_scores(model: &ClusterModel, archive_size: usize) -> Result<ScoreHistogram> {
    if archive_size != model.labels.len() {
        return Err(Error::DimensionMismatch {
            expected: archive_size,
            actual: model.labels.len(),
        });
    }
    let n = archive_size as f64;
    Ok(ScoreHistogram {
        scores: model
            .cluster_sizes()
            .into_iter()
            .map(|c| c as f64 / n)
            .collect(),
    })
}
