//! Neighbourhood-function estimation for large graphs.
//!
//! HyperBall grows one HyperLogLog counter per node by neighbour unions to
//! estimate every ball size `|B(v, t)|`; the metrics layer turns those into
//! distance distributions, average path length, dispersion and the
//! small-world coefficient. The [`oracle`] module computes the same
//! quantities exactly by breadth-first search.

pub mod cli;
pub mod error;
pub mod graph;
pub mod hyperball;
pub mod metrics;
pub mod oracle;
pub mod sketch;

pub use error::{Error, Result};
pub use graph::Graph;
pub use hyperball::{run_hyperball, BallMode, BallTable, HyperBallConfig};
pub use sketch::{HllCounter, MinHashSignature, NeighbourhoodSketch, SketchConfig};

use serde::{Deserialize, Serialize};

/// How ball sizes and path lengths are computed.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    /// HyperBall with HyperLogLog counters.
    Estimate,
    /// HyperBall with explicit node sets.
    Exact,
    /// Breadth-first search from every node.
    Oracle,
}
