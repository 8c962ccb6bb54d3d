#![allow(dead_code)]

use nehari_core::{Graph, Vertex, VertexFunction};
use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

/// A weighted graph kept as plain arrays, used both to build a [`Graph`] and
/// to evaluate reference formulas straight from the definitions.
#[derive(Debug, Clone)]
pub struct RawGraph {
    pub mu: Vec<f64>,
    pub edges: Vec<(Vertex, Vertex, f64)>,
}

impl RawGraph {
    pub fn build(&self) -> Graph {
        Graph::new(self.mu.clone(), &self.edges).expect("valid raw graph")
    }

    pub fn n(&self) -> usize {
        self.mu.len()
    }

    /// Dense symmetric weight matrix.
    pub fn weights(&self) -> Vec<Vec<f64>> {
        let n = self.n();
        let mut w = vec![vec![0.0; n]; n];
        for &(x, y, v) in &self.edges {
            w[x][y] = v;
            w[y][x] = v;
        }
        w
    }
}

/// Random connected graph: a random spanning tree plus extra edges, weights
/// and measure uniform in `[lo, hi]`.
pub fn random_graph(rng: &mut ChaCha8Rng, n: usize, extra: usize, lo: f64, hi: f64) -> RawGraph {
    let mu: Vec<f64> = (0..n).map(|_| rng.gen_range(lo..=hi)).collect();
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(rng);
    let mut seen = vec![vec![false; n]; n];
    let mut edges = Vec::new();
    for i in 1..n {
        let x = order[i];
        let y = order[rng.gen_range(0..i)];
        seen[x][y] = true;
        seen[y][x] = true;
        edges.push((x, y, rng.gen_range(lo..=hi)));
    }
    if n > 1 {
        for _ in 0..extra {
            let x = rng.gen_range(0..n);
            let y = rng.gen_range(0..n);
            if x != y && !seen[x][y] {
                seen[x][y] = true;
                seen[y][x] = true;
                edges.push((x, y, rng.gen_range(lo..=hi)));
            }
        }
    }
    RawGraph { mu, edges }
}

/// Connected vertex set grown by random breadth-first accretion from a
/// random seed vertex.
pub fn random_connected_subset(rng: &mut ChaCha8Rng, raw: &RawGraph, size: usize) -> Vec<Vertex> {
    let n = raw.n();
    let w = raw.weights();
    let mut inside = vec![false; n];
    let start = rng.gen_range(0..n);
    inside[start] = true;
    let mut set = vec![start];
    while set.len() < size.min(n) {
        let frontier: Vec<usize> = (0..n)
            .filter(|&y| !inside[y] && set.iter().any(|&x| w[x][y] > 0.0))
            .collect();
        let Some(&y) = frontier.choose(rng) else { break };
        inside[y] = true;
        set.push(y);
    }
    set.sort_unstable();
    set
}

pub fn random_values(rng: &mut ChaCha8Rng, n: usize, scale: f64) -> Vec<f64> {
    (0..n).map(|_| rng.gen_range(-scale..=scale)).collect()
}

pub fn function(g: &Graph, values: Vec<f64>) -> VertexFunction {
    VertexFunction::new(g, values).expect("length matches")
}

pub fn ref_laplacian(raw: &RawGraph, u: &[f64]) -> Vec<f64> {
    let w = raw.weights();
    (0..raw.n())
        .map(|x| (0..raw.n()).map(|y| w[x][y] * (u[y] - u[x])).sum::<f64>() / raw.mu[x])
        .collect()
}

pub fn ref_gamma(raw: &RawGraph, u: &[f64], v: &[f64]) -> Vec<f64> {
    let w = raw.weights();
    (0..raw.n())
        .map(|x| {
            (0..raw.n())
                .map(|y| w[x][y] * (u[y] - u[x]) * (v[y] - v[x]))
                .sum::<f64>()
                / (2.0 * raw.mu[x])
        })
        .collect()
}

/// `½‖u‖²_{E_λ} − (1/p)∫|u|^p` written out from the definitions.
pub fn ref_energy(raw: &RawGraph, a: &[f64], lambda: f64, p: f64, u: &[f64]) -> f64 {
    let lap = ref_laplacian(raw, u);
    let gam = ref_gamma(raw, u, u);
    let mut s = 0.0;
    for x in 0..raw.n() {
        let quad = lap[x] * lap[x] + gam[x] + (lambda * a[x] + 1.0) * u[x] * u[x];
        s += raw.mu[x] * (0.5 * quad - u[x].abs().powf(p) / p);
    }
    s
}

/// Central finite difference of `f` at `u` in direction `v`.
pub fn directional_fd(f: impl Fn(&[f64]) -> f64, u: &[f64], v: &[f64], h: f64) -> f64 {
    let plus: Vec<f64> = u.iter().zip(v).map(|(a, b)| a + h * b).collect();
    let minus: Vec<f64> = u.iter().zip(v).map(|(a, b)| a - h * b).collect();
    (f(&plus) - f(&minus)) / (2.0 * h)
}
