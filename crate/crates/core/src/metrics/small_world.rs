use serde::{Deserialize, Serialize};

use super::{average_path_length, avg_clustering};
use crate::error::{Error, Result};
use crate::graph::{gnm_random, lattice_degree_for, ring_lattice, Graph};
use crate::hyperball::{run_hyperball, BallMode, HyperBallConfig};
use crate::oracle::exact_average_path_length;
use crate::Mode;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SmallWorldConfig {
    /// How average path lengths are obtained.
    pub mode: Mode,
    /// Precision, depth cap, hash seed and threads for HyperBall runs.
    pub hyperball: HyperBallConfig,
    /// Seed of the first random reference graph.
    pub random_seed: u64,
    /// Extra random graphs tried when one has no reachable pairs.
    pub max_retries: usize,
    /// Overrides the lattice degree chosen from the mean degree.
    pub lattice_degree: Option<usize>,
}

impl Default for SmallWorldConfig {
    fn default() -> Self {
        Self {
            mode: Mode::Estimate,
            hyperball: HyperBallConfig::default(),
            random_seed: 42,
            max_retries: 10,
            lattice_degree: None,
        }
    }
}

/// `omega = l - c` with `l = APL(random) / APL(input)` and
/// `c = C(input) / C(lattice)`, plus every value it was built from.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SmallWorldReport {
    pub l: f64,
    pub c: f64,
    pub omega: f64,
    pub apl_input: f64,
    pub apl_random: f64,
    pub clustering_input: f64,
    pub clustering_lattice: f64,
    pub nodes: usize,
    pub edges: usize,
    pub random_seed: u64,
    pub lattice_degree: usize,
    pub warnings: Vec<String>,
}

/// Average path length of `g` under `mode`.
pub fn average_path_length_of(g: &Graph, mode: Mode, hyperball: &HyperBallConfig) -> Result<f64> {
    match mode {
        Mode::Oracle => exact_average_path_length(g),
        Mode::Estimate | Mode::Exact => {
            let mode = if mode == Mode::Exact { BallMode::Exact } else { BallMode::Estimate };
            let config = HyperBallConfig { mode, ..hyperball.clone() };
            average_path_length(&run_hyperball(g, &config)?)
        }
    }
}

pub fn small_world_coefficient(g: &Graph, config: &SmallWorldConfig) -> Result<SmallWorldReport> {
    if g.is_directed() {
        return Err(Error::Unsupported("small-world coefficient needs an undirected graph".into()));
    }
    let n = g.num_nodes();
    let m = g.num_edges() as u64;
    let mut warnings = Vec::new();

    let apl_input = average_path_length_of(g, config.mode, &config.hyperball)?;

    let mut attempt = 0;
    let (apl_random, random_seed) = loop {
        let seed = config.random_seed.wrapping_add(attempt as u64);
        let random = gnm_random(n, m, seed)?;
        match average_path_length_of(&random, config.mode, &config.hyperball) {
            Ok(apl) => break (apl, seed),
            Err(Error::UndefinedMetric(_)) if attempt < config.max_retries => {
                warnings.push(format!("random graph with seed {seed} has no reachable pairs; retrying"));
                attempt += 1;
            }
            Err(Error::UndefinedMetric(msg)) => {
                return Err(Error::UndefinedMetric(format!(
                    "random reference graph undefined after {} attempts: {msg}",
                    attempt + 1
                )))
            }
            Err(e) => return Err(e),
        }
    };

    let lattice_degree = config.lattice_degree.unwrap_or_else(|| lattice_degree_for(n, g.mean_degree()));
    let lattice = ring_lattice(n, lattice_degree)?;
    let clustering_input = avg_clustering(g)?;
    let clustering_lattice = avg_clustering(&lattice)?;

    let l = apl_random / apl_input;
    let c = if clustering_lattice == 0.0 {
        let msg = format!("lattice with degree {lattice_degree} has no triangles; clustering ratio set to 0");
        log::warn!("{msg}");
        warnings.push(msg);
        0.0
    } else {
        clustering_input / clustering_lattice
    };
    Ok(SmallWorldReport {
        l,
        c,
        omega: l - c,
        apl_input,
        apl_random,
        clustering_input,
        clustering_lattice,
        nodes: n,
        edges: m as usize,
        random_seed,
        lattice_degree,
        warnings,
    })
}
