//! Independent oracles for integration tests. Nothing here calls the
//! synthesizers; expected values come from direct integer or matrix math.
#![allow(dead_code)]

use std::collections::VecDeque;

use num_complex::Complex64 as C;

/// Bit of wire `w` in an `n`-wire binary label (wire 0 most significant).
pub fn bit(label: usize, n: usize, w: usize) -> usize {
    (label >> (n - 1 - w)) & 1
}

pub fn flip(label: usize, n: usize, w: usize) -> usize {
    label ^ (1 << (n - 1 - w))
}

/// Target flipped iff every other wire reads 1.
pub fn toffoli_map(n: usize, target: usize) -> impl Fn(usize) -> usize {
    move |s| {
        let controls_on = (0..n).filter(|&w| w != target).all(|w| bit(s, n, w) == 1);
        if controls_on {
            flip(s, n, target)
        } else {
            s
        }
    }
}

/// Targets swapped iff every other wire reads 1.
pub fn fredkin_map(n: usize, t1: usize, t2: usize) -> impl Fn(usize) -> usize {
    move |s| {
        let on = (0..n)
            .filter(|&w| w != t1 && w != t2)
            .all(|w| bit(s, n, w) == 1);
        if on && bit(s, n, t1) != bit(s, n, t2) {
            flip(flip(s, n, t1), n, t2)
        } else {
            s
        }
    }
}

/// `diag(1, ..., 1, -1)` of size `2^n`.
pub fn mcz_matrix(n: usize) -> Vec<Vec<C>> {
    let d = 1 << n;
    (0..d)
        .map(|r| {
            (0..d)
                .map(|c| match (r == c, r == d - 1) {
                    (true, true) => C::new(-1.0, 0.0),
                    (true, false) => C::new(1.0, 0.0),
                    _ => C::new(0.0, 0.0),
                })
                .collect()
        })
        .collect()
}

/// `2|psi0><psi0| - I` with `psi0` uniform.
pub fn inversion_about_mean(n: usize) -> Vec<Vec<C>> {
    let d = 1 << n;
    let w = 2.0 / d as f64;
    (0..d)
        .map(|r| {
            (0..d)
                .map(|c| C::new(w - if r == c { 1.0 } else { 0.0 }, 0.0))
                .collect()
        })
        .collect()
}

/// Largest entrywise distance between `a` and `e^{i phi} b`, with `phi`
/// chosen from the largest entry of `b`.
pub fn distance_up_to_phase(a: &[Vec<C>], b: &[Vec<C>]) -> f64 {
    let (mut best, mut pos) = (0.0, (0, 0));
    for (i, row) in b.iter().enumerate() {
        for (j, v) in row.iter().enumerate() {
            if v.norm() > best {
                best = v.norm();
                pos = (i, j);
            }
        }
    }
    let ratio = a[pos.0][pos.1] / b[pos.0][pos.1];
    let phase = ratio / ratio.norm();
    a.iter()
        .flatten()
        .zip(b.iter().flatten())
        .map(|(x, y)| (x - phase * y).norm())
        .fold(0.0, f64::max)
}

/// Ideal single-solution Grover success probability by direct iteration of
/// a real 2^n vector.
pub fn grover_vector_asp(n: usize, solution: usize, cycles: usize) -> f64 {
    let d = 1usize << n;
    let mut v = vec![1.0 / (d as f64).sqrt(); d];
    for _ in 0..cycles {
        v[solution] = -v[solution];
        let mean = v.iter().sum::<f64>() / d as f64;
        v.iter_mut().for_each(|x| *x = 2.0 * mean - *x);
    }
    v[solution] * v[solution]
}

pub fn closed_form_asp(n: usize, cycles: usize, f: f64) -> f64 {
    let m = cycles as f64;
    let theta = (2f64).powf(-(n as f64) / 2.0).asin();
    let decay = f.powf(2.0 * m);
    decay * ((2.0 * m + 1.0) * theta).sin().powi(2) + (1.0 - decay) / (1u64 << n) as f64
}

/// Plain BFS distances over an edge list.
pub fn bfs_distances(n: usize, edges: &[(usize, usize)], src: usize) -> Vec<usize> {
    let mut adj = vec![Vec::new(); n];
    for &(u, v) in edges {
        adj[u].push(v);
        adj[v].push(u);
    }
    let mut dist = vec![usize::MAX; n];
    dist[src] = 0;
    let mut q = VecDeque::from([src]);
    while let Some(u) = q.pop_front() {
        for &v in &adj[u] {
            if dist[v] == usize::MAX {
                dist[v] = dist[u] + 1;
                q.push_back(v);
            }
        }
    }
    dist
}

/// Two-sided binomial 3-sigma check of an observed frequency.
pub fn within_3_sigma(observed: f64, p: f64, shots: u64) -> bool {
    let sigma = (p * (1.0 - p) / shots as f64).sqrt();
    (observed - p).abs() <= 3.0 * sigma + 1e-12
}
