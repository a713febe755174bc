//! HyperBall: one counter per node, grown by neighbour unions one hop per
//! round until the radius cap or until no counter changes.
//!
//! Counters live in two flat buffers. Each round reads only the previous
//! buffer and writes only the next one, so rounds are data-parallel over
//! disjoint node ranges with no locking.

mod counters;
mod table;

pub use counters::{BallCounters, ExactCounters, HllCounters};
pub use table::{BallTable, TABLE_MAGIC, TABLE_VERSION};

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::PathBuf;
use std::time::{Duration, Instant};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::sketch::check_precision;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum BallMode {
    /// HyperLogLog counters.
    Estimate,
    /// Explicit node sets; exact but quadratic in memory.
    Exact,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HyperBallConfig {
    pub precision: u8,
    pub max_depth: usize,
    pub mode: BallMode,
    pub seed: u64,
    /// Worker threads; 0 uses every logical core.
    pub threads: usize,
    /// Write each round's `<node, size>` pairs under this directory.
    pub spill_dir: Option<PathBuf>,
    /// Abort with [`Error::BudgetExceeded`] once a round ends past this budget.
    pub budget: Option<Duration>,
}

impl Default for HyperBallConfig {
    fn default() -> Self {
        Self {
            precision: 14,
            max_depth: 10,
            mode: BallMode::Estimate,
            seed: 42,
            threads: 0,
            spill_dir: None,
            budget: None,
        }
    }
}

impl HyperBallConfig {
    pub fn exact(max_depth: usize) -> Self {
        Self { mode: BallMode::Exact, max_depth, ..Self::default() }
    }
}

/// Runs `f` inside a pool of `threads` workers (0: rayon's default).
pub(crate) fn with_pool<T: Send>(threads: usize, f: impl FnOnce() -> T + Send) -> Result<T> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| Error::Parameter(format!("cannot build thread pool: {e}")))?;
    Ok(pool.install(f))
}

/// Seeds every node's counter with the node itself.
pub fn initialize<C: BallCounters>(counters: &C, n: usize) -> Vec<C::Word> {
    let width = counters.words_per_counter();
    let mut buf = vec![C::Word::default(); n * width];
    buf.par_chunks_mut(width).enumerate().with_min_len(64).for_each(|(v, c)| counters.init(v, c));
    buf
}

/// One HyperBall round: `next[v] = current[v] ∪ ⋃ current[w]` over the
/// out-neighbours `w` of `v`. Returns whether any counter changed.
pub fn counter_union_round<C: BallCounters>(
    counters: &C,
    g: &Graph,
    current: &[C::Word],
    next: &mut [C::Word],
) -> bool {
    let width = counters.words_per_counter();
    debug_assert_eq!(current.len(), g.num_nodes() * width);
    debug_assert_eq!(next.len(), current.len());
    next.par_chunks_mut(width)
        .enumerate()
        .with_min_len(16)
        .map(|(v, out)| {
            out.copy_from_slice(&current[v * width..(v + 1) * width]);
            let mut changed = false;
            for &w in g.neighbours(v) {
                let w = w as usize;
                changed |= counters.merge(out, &current[w * width..(w + 1) * width]);
            }
            changed
        })
        .reduce(|| false, |a, b| a || b)
}

/// Same result as [`counter_union_round`], merging only neighbours whose
/// counters changed in the previous round: every unchanged neighbour is
/// already contained in `current[v]`. Fills `changed_now` per node.
fn incremental_round<C: BallCounters>(
    counters: &C,
    g: &Graph,
    current: &[C::Word],
    next: &mut [C::Word],
    changed_before: &[bool],
    changed_now: &mut [bool],
) -> bool {
    let width = counters.words_per_counter();
    next.par_chunks_mut(width)
        .zip(changed_now.par_iter_mut())
        .enumerate()
        .with_min_len(16)
        .map(|(v, (out, flag))| {
            out.copy_from_slice(&current[v * width..(v + 1) * width]);
            let mut changed = false;
            for &w in g.neighbours(v) {
                let w = w as usize;
                if changed_before[w] {
                    changed |= counters.merge(out, &current[w * width..(w + 1) * width]);
                }
            }
            *flag = changed;
            changed
        })
        .reduce(|| false, |a, b| a || b)
}

fn sizes_of<C: BallCounters>(counters: &C, buf: &[C::Word]) -> Vec<f64> {
    buf.par_chunks(counters.words_per_counter()).with_min_len(64).map(|c| counters.size(c)).collect()
}

/// Sizes after a round, re-estimating only counters that changed.
fn resized<C: BallCounters>(counters: &C, buf: &[C::Word], previous: &[f64], changed: &[bool]) -> Vec<f64> {
    let width = counters.words_per_counter();
    buf.par_chunks(width)
        .zip(previous.par_iter().zip(changed.par_iter()))
        .with_min_len(64)
        .map(|(c, (&prev, &ch))| if ch { counters.size(c) } else { prev })
        .collect()
}

fn spill(dir: &PathBuf, t: usize, sizes: &[f64]) -> Result<()> {
    std::fs::create_dir_all(dir)?;
    let mut w = BufWriter::new(File::create(dir.join(format!("radius_{t:03}.csv")))?);
    writeln!(w, "node,ball_size")?;
    for (v, s) in sizes.iter().enumerate() {
        writeln!(w, "{v},{s}")?;
    }
    w.flush()?;
    Ok(())
}

/// Drives rounds for any counter representation.
pub fn run_with<C: BallCounters>(counters: &C, g: &Graph, config: &HyperBallConfig) -> Result<BallTable> {
    let start = Instant::now();
    let n = g.num_nodes();
    let mut current = initialize(counters, n);
    let mut next = current.clone();
    let mut columns = vec![sizes_of(counters, &current)];
    if let Some(dir) = &config.spill_dir {
        spill(dir, 0, &columns[0])?;
    }
    let mut converged = false;
    let mut changed_before = vec![true; n];
    let mut changed_now = vec![false; n];
    for t in 1..=config.max_depth {
        if !incremental_round(counters, g, &current, &mut next, &changed_before, &mut changed_now) {
            converged = true;
            break;
        }
        std::mem::swap(&mut current, &mut next);
        std::mem::swap(&mut changed_before, &mut changed_now);
        let sizes = resized(counters, &current, columns.last().unwrap(), &changed_before);
        if let Some(dir) = &config.spill_dir {
            spill(dir, t, &sizes)?;
        }
        columns.push(sizes);
        log::debug!("round {t} done after {:.3}s", start.elapsed().as_secs_f64());
        if let Some(budget) = config.budget {
            if start.elapsed() > budget {
                return Err(Error::BudgetExceeded(budget.as_secs_f64()));
            }
        }
    }
    Ok(BallTable::from_columns(&columns, converged))
}

/// Estimates `|B(v, t)|` for every node and radius up to `config.max_depth`.
pub fn run_hyperball(g: &Graph, config: &HyperBallConfig) -> Result<BallTable> {
    if g.num_nodes() == 0 {
        return Err(Error::EmptyGraph);
    }
    if config.max_depth == 0 {
        return Err(Error::Parameter("max_depth must be at least 1".into()));
    }
    match config.mode {
        BallMode::Estimate => {
            check_precision(config.precision)?;
            let counters = HllCounters::new(config.precision, config.seed);
            with_pool(config.threads, || run_with(&counters, g, config))?
        }
        BallMode::Exact => {
            let counters = ExactCounters::new(g.num_nodes());
            with_pool(config.threads, || run_with(&counters, g, config))?
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{gnm_random, ring_lattice};
    use crate::sketch::relative_standard_deviation;

    fn path3() -> Graph {
        Graph::from_arcs(3, [(0, 1), (1, 2)], false).unwrap()
    }

    #[test]
    fn triangle_exact() {
        let g = Graph::from_arcs(3, [(0, 1), (1, 2), (2, 0)], false).unwrap();
        let t = run_hyperball(&g, &HyperBallConfig::exact(10)).unwrap();
        assert!((0..3).all(|v| t.size(v, 1) == 3.0));
        assert_eq!(t.num_radii(), 2);
        assert!(t.converged());
    }

    #[test]
    fn path_exact() {
        let t = run_hyperball(&path3(), &HyperBallConfig::exact(10)).unwrap();
        assert_eq!(t.row(0), &[1.0, 2.0, 3.0]);
        assert_eq!(t.row(1), &[1.0, 3.0, 3.0]);
    }

    #[test]
    fn depth_cap_truncates() {
        let g = ring_lattice(20, 2).unwrap();
        let t = run_hyperball(&g, &HyperBallConfig::exact(3)).unwrap();
        assert_eq!(t.num_radii(), 4);
        assert!(!t.converged());
        assert_eq!(t.row(5), &[1.0, 3.0, 5.0, 7.0]);
    }

    #[test]
    fn directed_balls_follow_out_arcs() {
        let g = Graph::from_arcs(3, [(0, 1), (1, 2)], true).unwrap();
        let t = run_hyperball(&g, &HyperBallConfig::exact(5)).unwrap();
        assert_eq!(t.row(0), &[1.0, 2.0, 3.0]);
        assert_eq!(t.row(2), &[1.0, 1.0, 1.0]);
    }

    #[test]
    fn edgeless_graph_stops_after_one_round() {
        let g = Graph::from_arcs(4, [], false).unwrap();
        let counters = ExactCounters::new(4);
        let current = initialize(&counters, 4);
        let mut next = current.clone();
        assert!(!counter_union_round(&counters, &g, &current, &mut next));
        assert_eq!(next, current);
        let t = run_hyperball(&g, &HyperBallConfig::exact(10)).unwrap();
        assert_eq!(t.num_radii(), 1);
    }

    #[test]
    fn isolated_node_is_unchanged() {
        let g = Graph::from_arcs(3, [(0, 1)], false).unwrap();
        let counters = HllCounters::new(6, 1);
        let current = initialize(&counters, 3);
        let mut next = current.clone();
        assert!(counter_union_round(&counters, &g, &current, &mut next));
        assert_eq!(next[2 * 64..], current[2 * 64..]);
    }

    #[test]
    fn incremental_rounds_match_full_rounds() {
        let g = gnm_random(400, 900, 8).unwrap();
        let counters = HllCounters::new(7, 3);
        let mut full = initialize(&counters, 400);
        let mut inc = full.clone();
        let mut scratch = full.clone();
        let mut before = vec![true; 400];
        let mut now = vec![false; 400];
        for _ in 0..12 {
            let full_changed = counter_union_round(&counters, &g, &full, &mut scratch);
            std::mem::swap(&mut full, &mut scratch);
            let inc_changed = incremental_round(&counters, &g, &inc, &mut scratch, &before, &mut now);
            std::mem::swap(&mut inc, &mut scratch);
            std::mem::swap(&mut before, &mut now);
            assert_eq!(full, inc);
            assert_eq!(full_changed, inc_changed);
        }
    }

    #[test]
    fn parameter_errors() {
        let g = path3();
        let bad_p = HyperBallConfig { precision: 3, ..Default::default() };
        assert!(matches!(run_hyperball(&g, &bad_p), Err(Error::Parameter(_))));
        let zero_depth = HyperBallConfig { max_depth: 0, ..Default::default() };
        assert!(matches!(run_hyperball(&g, &zero_depth), Err(Error::Parameter(_))));
        let empty = Graph::from_arcs(0, [], false).unwrap();
        assert!(matches!(run_hyperball(&empty, &HyperBallConfig::default()), Err(Error::EmptyGraph)));
    }

    #[test]
    fn estimate_tracks_exact_on_random_graph() {
        let g = gnm_random(300, 900, 2).unwrap();
        let exact = run_hyperball(&g, &HyperBallConfig::exact(10)).unwrap();
        let config = HyperBallConfig { precision: 10, ..Default::default() };
        let est = run_hyperball(&g, &config).unwrap();
        let tol = 3.0 * relative_standard_deviation(10);
        for (t, (e, x)) in est.aggregate().iter().zip(exact.aggregate()).enumerate() {
            assert!((e - x).abs() <= tol * x, "t={t}: {e} vs {x}");
        }
    }

    #[test]
    fn rows_are_monotone_and_start_near_one() {
        let g = gnm_random(200, 400, 9).unwrap();
        let t = run_hyperball(&g, &HyperBallConfig { precision: 8, ..Default::default() }).unwrap();
        for v in 0..200 {
            let row = t.row(v);
            assert!((row[0] - 1.0).abs() < 0.01);
            assert!(row.windows(2).all(|w| w[0] <= w[1]));
        }
    }

    #[test]
    fn thread_count_does_not_change_results() {
        let g = gnm_random(500, 2000, 4).unwrap();
        let one = HyperBallConfig { precision: 9, threads: 1, ..Default::default() };
        let four = HyperBallConfig { threads: 4, ..one.clone() };
        assert_eq!(run_hyperball(&g, &one).unwrap(), run_hyperball(&g, &four).unwrap());
    }

    #[test]
    fn spill_writes_one_file_per_radius() {
        let dir = tempfile::tempdir().unwrap();
        let config = HyperBallConfig { spill_dir: Some(dir.path().to_path_buf()), ..HyperBallConfig::exact(10) };
        let t = run_hyperball(&path3(), &config).unwrap();
        for r in 0..t.num_radii() {
            let text = std::fs::read_to_string(dir.path().join(format!("radius_{r:03}.csv"))).unwrap();
            assert_eq!(text.lines().count(), 4);
        }
    }

    #[test]
    fn budget_is_enforced() {
        let g = ring_lattice(50, 2).unwrap();
        let config = HyperBallConfig { budget: Some(Duration::ZERO), ..HyperBallConfig::exact(10) };
        assert!(matches!(run_hyperball(&g, &config), Err(Error::BudgetExceeded(_))));
    }
}
