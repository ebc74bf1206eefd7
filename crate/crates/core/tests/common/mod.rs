//! Independent reference implementations used as test oracles.
#![allow(dead_code, clippy::needless_range_loop)]

use std::collections::VecDeque;

/// Plain Lloyd's k-means, written without any of the library's machinery.
/// Same stopping rule and empty-cluster repair, so on identical input and
/// initialization it must reach the same partition.
pub fn brute_force_lloyd(points: &[Vec<f64>], init: &[Vec<f64>], max_iters: usize, tol: f64) -> (Vec<usize>, f64) {
    let k = init.len();
    let dim = points[0].len();
    let mut centroids: Vec<Vec<f64>> = init.to_vec();
    let d2 = |a: &[f64], b: &[f64]| -> f64 {
        let mut s = 0.0;
        for i in 0..a.len() {
            s += (a[i] - b[i]) * (a[i] - b[i]);
        }
        s
    };
    let assign = |centroids: &Vec<Vec<f64>>| -> (Vec<usize>, Vec<f64>) {
        let mut labels = Vec::new();
        let mut dists = Vec::new();
        for p in points {
            let mut best = 0;
            for c in 1..k {
                if d2(p, &centroids[c]) < d2(p, &centroids[best]) {
                    best = c;
                }
            }
            labels.push(best);
            dists.push(d2(p, &centroids[best]));
        }
        (labels, dists)
    };
    let (mut labels, mut dists) = assign(&centroids);
    for _ in 0..max_iters {
        let mut taken = vec![false; points.len()];
        let mut shift: f64 = 0.0;
        for c in 0..k {
            let members: Vec<usize> = (0..points.len()).filter(|&i| labels[i] == c).collect();
            let new = if members.is_empty() {
                let mut far: Option<usize> = None;
                for i in 0..points.len() {
                    if taken[i] {
                        continue;
                    }
                    if far.is_none_or(|f| dists[i] > dists[f]) {
                        far = Some(i);
                    }
                }
                match far {
                    Some(i) => {
                        taken[i] = true;
                        points[i].clone()
                    }
                    None => centroids[c].clone(),
                }
            } else {
                let mut m = vec![0.0; dim];
                for &i in &members {
                    for j in 0..dim {
                        m[j] += points[i][j];
                    }
                }
                m.iter().map(|v| v / members.len() as f64).collect()
            };
            shift = shift.max(d2(&centroids[c], &new).sqrt());
            centroids[c] = new;
        }
        let (new_labels, new_dists) = assign(&centroids);
        let changed = new_labels != labels;
        labels = new_labels;
        dists = new_dists;
        if !changed || shift < tol {
            break;
        }
    }
    let inertia = dists.iter().sum();
    (labels, inertia)
}

/// FIFO queue model of a sequentially updated archive.
pub struct FifoOracle {
    capacity: usize,
    queue: VecDeque<Vec<f64>>,
}

impl FifoOracle {
    pub fn new(capacity: usize, initial: &[Vec<f64>]) -> Self {
        Self {
            capacity,
            queue: initial.iter().cloned().collect(),
        }
    }

    pub fn push_batch(&mut self, batch: &[Vec<f64>]) {
        for b in batch {
            self.queue.push_back(b.clone());
            if self.queue.len() > self.capacity {
                self.queue.pop_front();
            }
        }
    }

    pub fn sorted(&self) -> Vec<Vec<f64>> {
        sorted(self.queue.iter().cloned().collect())
    }
}

pub fn sorted(mut v: Vec<Vec<f64>>) -> Vec<Vec<f64>> {
    v.sort_by(|a, b| {
        a.iter()
            .zip(b)
            .map(|(x, y)| x.total_cmp(y))
            .find(|o| o.is_ne())
            .unwrap_or(std::cmp::Ordering::Equal)
    });
    v
}

/// Solves `a x = b` by Gaussian elimination with partial pivoting.
pub fn solve(mut a: Vec<Vec<f64>>, mut b: Vec<f64>) -> Option<Vec<f64>> {
    let n = b.len();
    for col in 0..n {
        let piv = (col..n).max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs()))?;
        if a[piv][col].abs() < 1e-14 {
            return None;
        }
        a.swap(col, piv);
        b.swap(col, piv);
        for row in col + 1..n {
            let f = a[row][col] / a[col][col];
            for c in col..n {
                a[row][c] -= f * a[col][c];
            }
            b[row] -= f * b[col];
        }
    }
    let mut x = vec![0.0; n];
    for row in (0..n).rev() {
        let s: f64 = (row + 1..n).map(|c| a[row][c] * x[c]).sum();
        x[row] = (b[row] - s) / a[row][row];
    }
    Some(x)
}

/// Barycentric coordinates of `p` with respect to the `dim + 1` vertices.
pub fn barycentric(vertices: &[Vec<f64>], p: &[f64]) -> Option<Vec<f64>> {
    let dim = p.len();
    let last = &vertices[dim];
    // p - v_n = sum_i w_i (v_i - v_n), i < n
    let a: Vec<Vec<f64>> = (0..dim)
        .map(|r| (0..dim).map(|c| vertices[c][r] - last[r]).collect())
        .collect();
    let b: Vec<f64> = (0..dim).map(|r| p[r] - last[r]).collect();
    let mut w = solve(a, b)?;
    let wn = 1.0 - w.iter().sum::<f64>();
    w.push(wn);
    Some(w)
}

/// Upper 1% critical values of the chi-square distribution by degrees of freedom.
pub fn chi2_critical_p01(df: usize) -> f64 {
    const TABLE: [f64; 10] = [6.635, 9.210, 11.345, 13.277, 15.086, 16.812, 18.475, 20.090, 21.666, 23.209];
    TABLE[df - 1]
}

pub fn chi2_statistic(observed: &[u64], probs: &[f64]) -> f64 {
    let n: u64 = observed.iter().sum();
    observed
        .iter()
        .zip(probs)
        .filter(|(_, &p)| p > 0.0)
        .map(|(&o, &p)| {
            let e = p * n as f64;
            (o as f64 - e).powi(2) / e
        })
        .sum()
}
