//! Exact breadth-first references for ball sizes, distance distributions and
//! average path length.

use std::collections::VecDeque;
use std::time::{Duration, Instant};

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::hyperball::{with_pool, BallTable};

/// Integer ball sizes, same shape as [`BallTable`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExactBallTable {
    n: usize,
    num_radii: usize,
    sizes: Vec<u64>,
}

impl ExactBallTable {
    pub fn num_nodes(&self) -> usize {
        self.n
    }

    pub fn num_radii(&self) -> usize {
        self.num_radii
    }

    pub fn size(&self, v: usize, t: usize) -> u64 {
        self.sizes[v * self.num_radii + t]
    }

    pub fn row(&self, v: usize) -> &[u64] {
        &self.sizes[v * self.num_radii..(v + 1) * self.num_radii]
    }

    pub fn to_ball_table(&self, converged: bool) -> BallTable {
        let sizes = self.sizes.iter().map(|&s| s as f64).collect();
        BallTable::from_matrix(self.n, self.num_radii, sizes, converged).expect("BFS balls are monotone")
    }
}

#[derive(Clone, Debug, Default)]
pub struct OracleConfig {
    pub max_depth: usize,
    /// 1 runs sources sequentially on the calling thread; 0 uses every core.
    pub threads: usize,
    pub budget: Option<Duration>,
}

impl OracleConfig {
    pub fn sequential(max_depth: usize) -> Self {
        Self { max_depth, threads: 1, budget: None }
    }
}

/// Reusable BFS buffers; `seen` holds the stamp of the last visiting source.
struct Scratch {
    seen: Vec<u32>,
    stamp: u32,
    queue: VecDeque<(u32, u32)>,
}

impl Scratch {
    fn new(n: usize) -> Self {
        Self { seen: vec![0; n], stamp: 0, queue: VecDeque::new() }
    }

    /// Number of nodes at each distance `0..=max_depth` from `source`, with
    /// trailing empty levels dropped.
    fn level_counts(&mut self, g: &Graph, source: usize, max_depth: usize) -> Vec<u64> {
        self.stamp = self.stamp.wrapping_add(1);
        if self.stamp == 0 {
            self.seen.fill(0);
            self.stamp = 1;
        }
        let stamp = self.stamp;
        let mut counts = vec![1u64];
        self.seen[source] = stamp;
        self.queue.clear();
        self.queue.push_back((source as u32, 0));
        while let Some((u, d)) = self.queue.pop_front() {
            if d as usize == max_depth {
                continue;
            }
            for &w in g.neighbours(u as usize) {
                if self.seen[w as usize] != stamp {
                    self.seen[w as usize] = stamp;
                    let dw = d + 1;
                    if counts.len() <= dw as usize {
                        counts.push(0);
                    }
                    counts[dw as usize] += 1;
                    self.queue.push_back((w, dw));
                }
            }
        }
        counts
    }
}

fn all_level_counts(g: &Graph, config: &OracleConfig) -> Result<Vec<Vec<u64>>> {
    let n = g.num_nodes();
    let start = Instant::now();
    let over_budget = || config.budget.is_some_and(|b| start.elapsed() > b);
    let budget_error = || Error::BudgetExceeded(config.budget.unwrap_or_default().as_secs_f64());
    if config.threads == 1 {
        let mut scratch = Scratch::new(n);
        let mut rows = Vec::with_capacity(n);
        for v in 0..n {
            if v % 64 == 0 && over_budget() {
                return Err(budget_error());
            }
            rows.push(scratch.level_counts(g, v, config.max_depth));
        }
        Ok(rows)
    } else {
        let rows: Vec<Option<Vec<u64>>> = with_pool(config.threads, || {
            (0..n)
                .into_par_iter()
                .map_init(
                    || Scratch::new(n),
                    |scratch, v| (!over_budget()).then(|| scratch.level_counts(g, v, config.max_depth)),
                )
                .collect()
        })?;
        rows.into_iter().map(|r| r.ok_or_else(budget_error)).collect()
    }
}

/// Exact `|B(v, t)|` by a BFS from every node truncated at `config.max_depth`.
///
/// Radii stop at the largest eccentricity (or the cap), matching the shape
/// of an exact-mode HyperBall run.
pub fn bfs_balls(g: &Graph, config: &OracleConfig) -> Result<ExactBallTable> {
    if g.num_nodes() == 0 {
        return Err(Error::EmptyGraph);
    }
    let levels = all_level_counts(g, config)?;
    let num_radii = levels.iter().map(Vec::len).max().unwrap_or(1);
    let mut sizes = Vec::with_capacity(g.num_nodes() * num_radii);
    for row in &levels {
        let mut total = 0;
        for t in 0..num_radii {
            total += row.get(t).copied().unwrap_or(0);
            sizes.push(total);
        }
    }
    Ok(ExactBallTable { n: g.num_nodes(), num_radii, sizes })
}

/// Number of ordered pairs `(u, v)`, `u ≠ v`, at each exact distance;
/// index 0 is always 0.
pub fn exact_distance_counts(g: &Graph, threads: usize) -> Result<Vec<u64>> {
    let config = OracleConfig { max_depth: usize::MAX, threads, budget: None };
    let mut totals: Vec<u64> = Vec::new();
    for row in all_level_counts(g, &config)? {
        if totals.len() < row.len() {
            totals.resize(row.len(), 0);
        }
        for (acc, c) in totals.iter_mut().zip(row).skip(1) {
            *acc += c;
        }
    }
    if totals.is_empty() {
        totals.push(0);
    }
    totals[0] = 0;
    Ok(totals)
}

/// Mean shortest-path distance over reachable ordered pairs.
pub fn exact_average_path_length(g: &Graph) -> Result<f64> {
    let counts = exact_distance_counts(g, 0)?;
    let pairs: u64 = counts.iter().sum();
    if pairs == 0 {
        return Err(Error::UndefinedMetric("graph has no reachable pairs".into()));
    }
    let weighted: u64 = counts.iter().enumerate().map(|(d, &c)| d as u64 * c).sum();
    Ok(weighted as f64 / pairs as f64)
}

/// Hop distances from `source`; `None` for unreachable nodes.
pub fn distances_from(g: &Graph, source: usize) -> Vec<Option<u32>> {
    let mut dist = vec![None; g.num_nodes()];
    let mut queue = VecDeque::from([source as u32]);
    dist[source] = Some(0);
    while let Some(u) = queue.pop_front() {
        let du = dist[u as usize].unwrap();
        for &w in g.neighbours(u as usize) {
            if dist[w as usize].is_none() {
                dist[w as usize] = Some(du + 1);
                queue.push_back(w);
            }
        }
    }
    dist
}
