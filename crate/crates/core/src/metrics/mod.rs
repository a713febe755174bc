//! Distance and clustering metrics derived from ball tables and graphs.

mod clustering;
mod small_world;

pub use clustering::{avg_clustering, local_clustering, triangles_per_node};
pub use small_world::{average_path_length_of, small_world_coefficient, SmallWorldConfig, SmallWorldReport};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hyperball::BallTable;

/// Neumaier-compensated running sum.
#[derive(Clone, Copy, Debug, Default)]
pub(crate) struct CompensatedSum {
    sum: f64,
    carry: f64,
}

impl CompensatedSum {
    pub(crate) fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.carry += (self.sum - t) + x;
        } else {
            self.carry += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub(crate) fn value(&self) -> f64 {
        self.sum + self.carry
    }
}

/// Estimated number of nodes at exactly distance `t` from `v`.
///
/// Radius 0 counts the node itself; radii beyond the table count nothing.
pub fn num_nodes_dist_from(bt: &BallTable, v: usize, t: usize) -> Result<f64> {
    if v >= bt.num_nodes() {
        return Err(Error::IndexOutOfRange { index: v, len: bt.num_nodes() });
    }
    Ok(match t {
        0 => 1.0,
        t if t >= bt.num_radii() => 0.0,
        t => bt.size(v, t) - bt.size(v, t - 1),
    })
}

/// Ordered-pair counts by distance. `counts[d]` is the (estimated) number of
/// pairs `(u, v)` with `u ≠ v` at distance `d`; `counts[0]` is always zero.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DistanceDistribution {
    pub counts: Vec<f64>,
    pub total_pairs: f64,
}

impl DistanceDistribution {
    pub fn from_counts(mut counts: Vec<f64>) -> Self {
        if counts.is_empty() {
            counts.push(0.0);
        }
        counts[0] = 0.0;
        let mut total = CompensatedSum::default();
        counts.iter().for_each(|&c| total.add(c));
        Self { counts, total_pairs: total.value() }
    }

    pub fn from_exact(counts: &[u64]) -> Self {
        Self::from_counts(counts.iter().map(|&c| c as f64).collect())
    }

    pub fn max_distance(&self) -> usize {
        self.counts.len() - 1
    }

    fn moment(&self, f: impl Fn(f64) -> f64) -> f64 {
        let mut acc = CompensatedSum::default();
        for (d, &c) in self.counts.iter().enumerate() {
            acc.add(f(d as f64) * c);
        }
        acc.value() / self.total_pairs
    }

    pub fn mean(&self) -> Result<f64> {
        if self.total_pairs <= 0.0 {
            return Err(Error::UndefinedMetric("no reachable pairs".into()));
        }
        Ok(self.moment(|d| d))
    }

    /// Population variance of the pair distance.
    pub fn variance(&self) -> Result<f64> {
        let mean = self.mean()?;
        Ok(self.moment(|d| (d - mean) * (d - mean)))
    }
}

pub fn distance_distribution(bt: &BallTable) -> DistanceDistribution {
    let mut sums = vec![CompensatedSum::default(); bt.num_radii().max(1)];
    for v in 0..bt.num_nodes() {
        let row = bt.row(v);
        for t in 1..row.len() {
            sums[t].add(row[t] - row[t - 1]);
        }
    }
    DistanceDistribution::from_counts(sums.iter().map(CompensatedSum::value).collect())
}

/// Mean distance over (estimated) reachable ordered pairs within the table's radii.
pub fn average_path_length(bt: &BallTable) -> Result<f64> {
    distance_distribution(bt).mean()
}

/// Variance-to-mean ratio of the pair-distance distribution.
pub fn dispersion_index(d: &DistanceDistribution) -> Result<f64> {
    let mean = d.mean()?;
    if mean <= 0.0 {
        return Err(Error::UndefinedMetric("distance distribution has zero mean".into()));
    }
    Ok(d.variance()? / mean)
}
