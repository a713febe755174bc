use std::collections::HashSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::Graph;
use crate::error::{Error, Result};

#[inline]
fn pair_key(u: u32, v: u32) -> u64 {
    ((u.min(v) as u64) << 32) | u.max(v) as u64
}

fn random_pairs(n: usize, count: u64, rng: &mut ChaCha8Rng) -> HashSet<u64> {
    let mut chosen = HashSet::with_capacity(count as usize);
    while (chosen.len() as u64) < count {
        let u = rng.random_range(0..n as u32);
        let v = rng.random_range(0..n as u32);
        if u != v {
            chosen.insert(pair_key(u, v));
        }
    }
    chosen
}

/// Uniform simple undirected graph with exactly `n` nodes and `m` edges.
///
/// Rejection-samples edges while `m` is at most half the possible pairs and
/// samples the complement otherwise. Deterministic for a given seed.
pub fn gnm_random(n: usize, m: u64, seed: u64) -> Result<Graph> {
    let max = (n as u64) * (n as u64).saturating_sub(1) / 2;
    if m > max {
        return Err(Error::Capacity { requested: m, max, nodes: n });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut keys: Vec<u64> = if m <= max / 2 {
        random_pairs(n, m, &mut rng).into_iter().collect()
    } else {
        let excluded = random_pairs(n, max - m, &mut rng);
        (0..n as u32)
            .flat_map(|u| (u + 1..n as u32).map(move |v| pair_key(u, v)))
            .filter(|k| !excluded.contains(k))
            .collect()
    };
    keys.sort_unstable();
    Graph::from_arcs(n, keys.into_iter().map(|k| ((k >> 32) as u32, k as u32)), false)
}

/// Ring lattice: node `i` joined to `i ± 1, …, i ± k/2 (mod n)`.
pub fn ring_lattice(n: usize, k: usize) -> Result<Graph> {
    if !k.is_multiple_of(2) {
        return Err(Error::Parameter(format!("lattice degree must be even, got {k}")));
    }
    if k >= n {
        return Err(Error::Parameter(format!("lattice degree {k} must be below node count {n}")));
    }
    let arcs = (0..n).flat_map(move |i| (1..=k / 2).map(move |j| (i as u32, ((i + j) % n) as u32)));
    Graph::from_arcs(n, arcs, false)
}

/// Watts-Strogatz graph: a [`ring_lattice`] whose edges `(i, i + j)` are
/// each rewired with probability `beta` to a uniform endpoint that keeps the
/// graph simple. The edge count equals the lattice's.
pub fn watts_strogatz(n: usize, k: usize, beta: f64, seed: u64) -> Result<Graph> {
    if !(0.0..=1.0).contains(&beta) {
        return Err(Error::Parameter(format!("rewiring probability must be in [0, 1], got {beta}")));
    }
    ring_lattice(n, k)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut edges: HashSet<u64> = HashSet::with_capacity(n * k / 2);
    let mut order = Vec::with_capacity(n * k / 2);
    let mut degree = vec![k; n];
    for j in 1..=k / 2 {
        for i in 0..n {
            let key = pair_key(i as u32, ((i + j) % n) as u32);
            edges.insert(key);
            order.push(key);
        }
    }
    for key in order {
        if !rng.random_bool(beta) {
            continue;
        }
        let u = (key >> 32) as u32;
        // A node adjacent to every other keeps its edge.
        if degree[u as usize] >= n - 1 {
            continue;
        }
        loop {
            let w = rng.random_range(0..n as u32);
            if w != u && !edges.contains(&pair_key(u, w)) {
                edges.remove(&key);
                edges.insert(pair_key(u, w));
                degree[key as u32 as usize] -= 1;
                degree[w as usize] += 1;
                break;
            }
        }
    }
    let mut keys: Vec<u64> = edges.into_iter().collect();
    keys.sort_unstable();
    Graph::from_arcs(n, keys.into_iter().map(|k| ((k >> 32) as u32, k as u32)), false)
}

/// Even lattice degree closest to `mean_degree`, clamped to `[2, n - 1)`.
pub fn lattice_degree_for(n: usize, mean_degree: f64) -> usize {
    let nearest = 2 * ((mean_degree / 2.0).round() as usize).max(1);
    let cap = if n.is_multiple_of(2) { n.saturating_sub(2) } else { n.saturating_sub(1) };
    nearest.min(cap)
}
