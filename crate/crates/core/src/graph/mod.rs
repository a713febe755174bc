//! Compact adjacency storage, edge-list ingestion and reference-graph generators.

mod generators;
mod load;

pub use generators::{gnm_random, lattice_degree_for, ring_lattice, watts_strogatz};
pub use load::{load_edge_list, load_edge_list_path, LoadReport};

use std::collections::HashMap;
use std::io::Write;

use crate::error::{Error, Result};

/// Immutable graph over dense node ids `0..n` in compressed sparse row form.
///
/// Undirected graphs store both arcs of every edge. Self-loops and duplicate
/// arcs never appear, and each adjacency list is sorted.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Graph {
    offsets: Vec<usize>,
    targets: Vec<u32>,
    directed: bool,
    labels: Option<Vec<String>>,
}

impl Graph {
    /// Builds a graph from arcs over `0..n`, dropping self-loops and
    /// duplicates and symmetrizing when `directed` is false.
    pub fn from_arcs(n: usize, arcs: impl IntoIterator<Item = (u32, u32)>, directed: bool) -> Result<Self> {
        Ok(Self::build(n, arcs, directed)?.0)
    }

    /// Returns the graph plus the number of dropped self-loops and duplicates.
    pub(crate) fn build(
        n: usize,
        arcs: impl IntoIterator<Item = (u32, u32)>,
        directed: bool,
    ) -> Result<(Self, usize, usize)> {
        if n > u32::MAX as usize {
            return Err(Error::Parameter(format!("{n} nodes exceed the u32 id space")));
        }
        let mut self_loops = 0;
        let mut pairs: Vec<(u32, u32)> = Vec::new();
        for (u, v) in arcs {
            if u as usize >= n || v as usize >= n {
                return Err(Error::IndexOutOfRange { index: u.max(v) as usize, len: n });
            }
            if u == v {
                self_loops += 1;
                continue;
            }
            pairs.push(if directed { (u, v) } else { (u.min(v), u.max(v)) });
        }
        pairs.sort_unstable();
        let before = pairs.len();
        pairs.dedup();
        let duplicates = before - pairs.len();
        if !directed {
            pairs.reserve(pairs.len());
            for i in 0..pairs.len() {
                let (u, v) = pairs[i];
                pairs.push((v, u));
            }
            pairs.sort_unstable();
        }

        let mut offsets = vec![0usize; n + 1];
        for &(u, _) in &pairs {
            offsets[u as usize + 1] += 1;
        }
        for i in 0..n {
            offsets[i + 1] += offsets[i];
        }
        let targets = pairs.into_iter().map(|(_, v)| v).collect();
        Ok((Self { offsets, targets, directed, labels: None }, self_loops, duplicates))
    }

    pub(crate) fn with_labels(mut self, labels: Vec<String>) -> Self {
        debug_assert_eq!(labels.len(), self.num_nodes());
        self.labels = Some(labels);
        self
    }

    #[inline]
    pub fn num_nodes(&self) -> usize {
        self.offsets.len() - 1
    }

    /// Stored arcs; twice the edge count for undirected graphs.
    #[inline]
    pub fn num_arcs(&self) -> usize {
        self.targets.len()
    }

    pub fn num_edges(&self) -> usize {
        if self.directed {
            self.targets.len()
        } else {
            self.targets.len() / 2
        }
    }

    #[inline]
    pub fn is_directed(&self) -> bool {
        self.directed
    }

    #[inline]
    pub fn neighbours(&self, v: usize) -> &[u32] {
        &self.targets[self.offsets[v]..self.offsets[v + 1]]
    }

    #[inline]
    pub fn degree(&self, v: usize) -> usize {
        self.offsets[v + 1] - self.offsets[v]
    }

    pub fn offsets(&self) -> &[usize] {
        &self.offsets
    }

    pub fn targets(&self) -> &[u32] {
        &self.targets
    }

    /// Mean out-degree, `arcs / n`.
    pub fn mean_degree(&self) -> f64 {
        if self.num_nodes() == 0 {
            0.0
        } else {
            self.num_arcs() as f64 / self.num_nodes() as f64
        }
    }

    /// Original label of node `v`, or its dense id for generated graphs.
    pub fn label(&self, v: usize) -> String {
        match &self.labels {
            Some(labels) => labels[v].clone(),
            None => v.to_string(),
        }
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    /// Raw-label to dense-id table.
    pub fn id_map(&self) -> HashMap<String, u32> {
        (0..self.num_nodes()).map(|v| (self.label(v), v as u32)).collect()
    }

    /// Every edge once: `u < v` for undirected graphs, every arc otherwise.
    pub fn edges(&self) -> impl Iterator<Item = (u32, u32)> + '_ {
        (0..self.num_nodes()).flat_map(move |u| {
            self.neighbours(u)
                .iter()
                .filter(move |&&v| self.directed || (u as u32) < v)
                .map(move |&v| (u as u32, v))
        })
    }

    pub fn write_edge_list<W: Write>(&self, mut w: W) -> Result<()> {
        for (u, v) in self.edges() {
            writeln!(w, "{} {}", self.label(u as usize), self.label(v as usize))?;
        }
        Ok(())
    }

    /// Same structure under a node relabelling `perm[old] = new`.
    pub fn permuted(&self, perm: &[u32]) -> Result<Self> {
        if perm.len() != self.num_nodes() {
            return Err(Error::Parameter("permutation length differs from node count".into()));
        }
        let arcs = self.edges().map(|(u, v)| (perm[u as usize], perm[v as usize]));
        Self::from_arcs(self.num_nodes(), arcs, self.directed)
    }
}
