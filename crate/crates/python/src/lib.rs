//! Python bindings for the `hyperball` crate.

use pyo3::create_exception;
use pyo3::exceptions::{PyException, PyIndexError, PyOSError, PyValueError};
use pyo3::prelude::*;

use hyperball::graph;
use hyperball::metrics::{self, DistanceDistribution, SmallWorldConfig};
use hyperball::oracle::{self, OracleConfig};
use hyperball::{BallMode, Error, HyperBallConfig, Mode, SketchConfig};

create_exception!(pyhyperball, UndefinedMetricError, PyException);

fn to_py(e: Error) -> PyErr {
    match e {
        Error::Io(e) => PyOSError::new_err(e.to_string()),
        Error::IndexOutOfRange { .. } => PyIndexError::new_err(e.to_string()),
        Error::UndefinedMetric(_) => UndefinedMetricError::new_err(e.to_string()),
        other => PyValueError::new_err(other.to_string()),
    }
}

fn parse_mode(mode: &str) -> PyResult<Mode> {
    match mode {
        "estimate" => Ok(Mode::Estimate),
        "exact" => Ok(Mode::Exact),
        "oracle" => Ok(Mode::Oracle),
        _ => Err(PyValueError::new_err(format!("unknown mode {mode:?}"))),
    }
}

fn ball_config(precision: u8, max_depth: usize, mode: &str, seed: u64, threads: usize) -> PyResult<HyperBallConfig> {
    let mode = match parse_mode(mode)? {
        Mode::Estimate => BallMode::Estimate,
        Mode::Exact => BallMode::Exact,
        Mode::Oracle => return Err(PyValueError::new_err("HyperBall runs in estimate or exact mode")),
    };
    Ok(HyperBallConfig { precision, max_depth, mode, seed, threads, ..HyperBallConfig::default() })
}

#[pyclass(name = "HllCounter", module = "pyhyperball", from_py_object)]
#[derive(Clone)]
struct PyHllCounter(hyperball::HllCounter);

#[pymethods]
impl PyHllCounter {
    #[new]
    #[pyo3(signature = (precision = 14, seed = 42))]
    fn new(precision: u8, seed: u64) -> PyResult<Self> {
        hyperball::HllCounter::new(precision, seed).map(Self).map_err(to_py)
    }

    #[staticmethod]
    fn from_registers(precision: u8, seed: u64, registers: Vec<u8>) -> PyResult<Self> {
        hyperball::HllCounter::from_registers(precision, seed, registers).map(Self).map_err(to_py)
    }

    fn add(&mut self, item: u64) {
        self.0.add(item);
    }

    fn extend(&mut self, items: Vec<u64>) {
        self.0.extend(items);
    }

    fn count(&self) -> f64 {
        self.0.count()
    }

    /// Merges `other` in place; returns whether any register grew.
    fn merge(&mut self, other: &Self) -> PyResult<bool> {
        self.0.merge(&other.0).map_err(to_py)
    }

    fn union(&self, other: &Self) -> PyResult<Self> {
        self.0.union(&other.0).map(Self).map_err(to_py)
    }

    #[getter]
    fn precision(&self) -> u8 {
        self.0.precision()
    }

    #[getter]
    fn seed(&self) -> u64 {
        self.0.seed()
    }

    #[getter]
    fn registers(&self) -> Vec<u8> {
        self.0.registers().to_vec()
    }

    fn __eq__(&self, other: &Self) -> bool {
        self.0 == other.0
    }

    fn __repr__(&self) -> String {
        format!("HllCounter(precision={}, count={:.1})", self.0.precision(), self.0.count())
    }
}

#[pyclass(name = "MinHashSignature", module = "pyhyperball", from_py_object)]
#[derive(Clone)]
struct PyMinHash(hyperball::MinHashSignature);

#[pymethods]
impl PyMinHash {
    #[new]
    #[pyo3(signature = (k = 1024, seed = 42))]
    fn new(k: usize, seed: u64) -> PyResult<Self> {
        hyperball::MinHashSignature::new(k, seed).map(Self).map_err(to_py)
    }

    fn add(&mut self, item: u64) {
        self.0.add(item);
    }

    fn extend(&mut self, items: Vec<u64>) {
        for item in items {
            self.0.add(item);
        }
    }

    fn merge(&mut self, other: &Self) -> PyResult<()> {
        self.0.merge(&other.0).map_err(to_py)
    }

    fn jaccard(&self, other: &Self) -> PyResult<f64> {
        self.0.jaccard(&other.0).map_err(to_py)
    }

    #[getter]
    fn k(&self) -> usize {
        self.0.k()
    }

    #[getter]
    fn values(&self) -> Vec<u64> {
        self.0.values().to_vec()
    }
}

#[pyclass(name = "NeighbourhoodSketch", module = "pyhyperball", from_py_object)]
#[derive(Clone)]
struct PySketch(hyperball::NeighbourhoodSketch);

#[pymethods]
impl PySketch {
    #[new]
    #[pyo3(signature = (precision = 14, minhash_k = 1024, seed = 42))]
    fn new(precision: u8, minhash_k: usize, seed: u64) -> PyResult<Self> {
        hyperball::NeighbourhoodSketch::new(SketchConfig { precision, minhash_k, seed }).map(Self).map_err(to_py)
    }

    fn add(&mut self, item: u64) {
        self.0.add(item);
    }

    fn extend(&mut self, items: Vec<u64>) {
        for item in items {
            self.0.add(item);
        }
    }

    fn merge(&mut self, other: &Self) -> PyResult<()> {
        self.0.merge(&other.0).map_err(to_py)
    }

    fn count(&self) -> f64 {
        self.0.count()
    }

    fn jaccard(&self, other: &Self) -> PyResult<f64> {
        self.0.jaccard(&other.0).map_err(to_py)
    }

    fn estimate_intersection(&self, other: &Self) -> PyResult<f64> {
        self.0.estimate_intersection(&other.0).map_err(to_py)
    }

    #[getter]
    fn hll(&self) -> PyHllCounter {
        PyHllCounter(self.0.hll().clone())
    }

    #[getter]
    fn minhash(&self) -> PyMinHash {
        PyMinHash(self.0.minhash().clone())
    }
}

#[pyclass(name = "Graph", module = "pyhyperball", frozen)]
struct PyGraph(hyperball::Graph);

#[pymethods]
impl PyGraph {
    /// Graph on nodes `0..n` from `(u, v)` pairs.
    #[new]
    #[pyo3(signature = (n, edges, directed = false))]
    fn new(n: usize, edges: Vec<(u32, u32)>, directed: bool) -> PyResult<Self> {
        hyperball::Graph::from_arcs(n, edges, directed).map(Self).map_err(to_py)
    }

    #[getter]
    fn num_nodes(&self) -> usize {
        self.0.num_nodes()
    }

    #[getter]
    fn num_edges(&self) -> usize {
        self.0.num_edges()
    }

    #[getter]
    fn directed(&self) -> bool {
        self.0.is_directed()
    }

    fn neighbours(&self, v: usize) -> PyResult<Vec<u32>> {
        if v >= self.0.num_nodes() {
            return Err(to_py(Error::IndexOutOfRange { index: v, len: self.0.num_nodes() }));
        }
        Ok(self.0.neighbours(v).to_vec())
    }

    fn degree(&self, v: usize) -> PyResult<usize> {
        self.neighbours(v).map(|n| n.len())
    }

    fn label(&self, v: usize) -> String {
        self.0.label(v)
    }

    fn edges(&self) -> Vec<(u32, u32)> {
        self.0.edges().collect()
    }

    fn mean_degree(&self) -> f64 {
        self.0.mean_degree()
    }

    fn __repr__(&self) -> String {
        format!("Graph(nodes={}, edges={}, directed={})", self.0.num_nodes(), self.0.num_edges(), self.0.is_directed())
    }
}

#[pyclass(name = "BallTable", module = "pyhyperball", frozen)]
struct PyBallTable(hyperball::BallTable);

#[pymethods]
impl PyBallTable {
    #[getter]
    fn num_nodes(&self) -> usize {
        self.0.num_nodes()
    }

    #[getter]
    fn num_radii(&self) -> usize {
        self.0.num_radii()
    }

    #[getter]
    fn converged(&self) -> bool {
        self.0.converged()
    }

    fn size(&self, v: usize, t: usize) -> PyResult<f64> {
        if v >= self.0.num_nodes() {
            return Err(to_py(Error::IndexOutOfRange { index: v, len: self.0.num_nodes() }));
        }
        if t >= self.0.num_radii() {
            return Err(to_py(Error::IndexOutOfRange { index: t, len: self.0.num_radii() }));
        }
        Ok(self.0.size(v, t))
    }

    fn row(&self, v: usize) -> PyResult<Vec<f64>> {
        if v >= self.0.num_nodes() {
            return Err(to_py(Error::IndexOutOfRange { index: v, len: self.0.num_nodes() }));
        }
        Ok(self.0.row(v).to_vec())
    }

    fn rows(&self) -> Vec<Vec<f64>> {
        (0..self.0.num_nodes()).map(|v| self.0.row(v).to_vec()).collect()
    }

    fn aggregate(&self) -> Vec<f64> {
        self.0.aggregate()
    }

    fn num_nodes_dist_from(&self, v: usize, t: usize) -> PyResult<f64> {
        metrics::num_nodes_dist_from(&self.0, v, t).map_err(to_py)
    }

    fn distance_distribution(&self) -> Vec<f64> {
        metrics::distance_distribution(&self.0).counts
    }

    fn average_path_length(&self) -> PyResult<f64> {
        metrics::average_path_length(&self.0).map_err(to_py)
    }

    fn dispersion_index(&self) -> PyResult<f64> {
        metrics::dispersion_index(&metrics::distance_distribution(&self.0)).map_err(to_py)
    }
}

#[pyfunction]
#[pyo3(signature = (path, directed = false))]
fn load_edge_list(py: Python<'_>, path: std::path::PathBuf, directed: bool) -> PyResult<PyGraph> {
    let (g, _) = py.detach(|| graph::load_edge_list_path(path, directed)).map_err(to_py)?;
    Ok(PyGraph(g))
}

#[pyfunction]
fn gnm_random(n: usize, m: u64, seed: u64) -> PyResult<PyGraph> {
    graph::gnm_random(n, m, seed).map(PyGraph).map_err(to_py)
}

#[pyfunction]
fn ring_lattice(n: usize, k: usize) -> PyResult<PyGraph> {
    graph::ring_lattice(n, k).map(PyGraph).map_err(to_py)
}

#[pyfunction]
fn watts_strogatz(n: usize, k: usize, beta: f64, seed: u64) -> PyResult<PyGraph> {
    graph::watts_strogatz(n, k, beta, seed).map(PyGraph).map_err(to_py)
}

#[pyfunction]
#[pyo3(signature = (g, precision = 14, max_depth = 10, mode = "estimate", seed = 42, threads = 0))]
fn run_hyperball(
    py: Python<'_>,
    g: &PyGraph,
    precision: u8,
    max_depth: usize,
    mode: &str,
    seed: u64,
    threads: usize,
) -> PyResult<PyBallTable> {
    let config = ball_config(precision, max_depth, mode, seed, threads)?;
    py.detach(|| hyperball::run_hyperball(&g.0, &config)).map(PyBallTable).map_err(to_py)
}

/// Exact ball sizes by breadth-first search from every node; no depth cap
/// when `max_depth` is None.
#[pyfunction]
#[pyo3(signature = (g, max_depth = None, threads = 1))]
fn bfs_balls(py: Python<'_>, g: &PyGraph, max_depth: Option<usize>, threads: usize) -> PyResult<PyBallTable> {
    let config = OracleConfig { max_depth: max_depth.unwrap_or(usize::MAX), threads, budget: None };
    let table = py.detach(|| oracle::bfs_balls(&g.0, &config)).map_err(to_py)?;
    Ok(PyBallTable(table.to_ball_table(true)))
}

#[pyfunction]
fn exact_average_path_length(py: Python<'_>, g: &PyGraph) -> PyResult<f64> {
    py.detach(|| oracle::exact_average_path_length(&g.0)).map_err(to_py)
}

#[pyfunction]
#[pyo3(signature = (g, threads = 0))]
fn exact_distance_distribution(py: Python<'_>, g: &PyGraph, threads: usize) -> PyResult<Vec<f64>> {
    let counts = py.detach(|| oracle::exact_distance_counts(&g.0, threads)).map_err(to_py)?;
    Ok(DistanceDistribution::from_exact(&counts).counts)
}

#[pyfunction]
fn avg_clustering(py: Python<'_>, g: &PyGraph) -> PyResult<f64> {
    py.detach(|| metrics::avg_clustering(&g.0)).map_err(to_py)
}

#[pyfunction]
fn local_clustering(py: Python<'_>, g: &PyGraph) -> PyResult<Vec<f64>> {
    py.detach(|| metrics::local_clustering(&g.0)).map_err(to_py)
}

/// Small-world coefficient; returns a dict of omega and its ingredients.
#[pyfunction]
#[pyo3(signature = (g, mode = "estimate", precision = 14, max_depth = 10, seed = 42, random_seed = 42, threads = 0))]
#[allow(clippy::too_many_arguments)]
fn small_world_coefficient(
    py: Python<'_>,
    g: &PyGraph,
    mode: &str,
    precision: u8,
    max_depth: usize,
    seed: u64,
    random_seed: u64,
    threads: usize,
) -> PyResult<Py<PyAny>> {
    let config = SmallWorldConfig {
        mode: parse_mode(mode)?,
        hyperball: ball_config(precision, max_depth, "estimate", seed, threads)?,
        random_seed,
        ..Default::default()
    };
    let report = py.detach(|| metrics::small_world_coefficient(&g.0, &config)).map_err(to_py)?;
    let dict = pyo3::types::PyDict::new(py);
    dict.set_item("omega", report.omega)?;
    dict.set_item("l", report.l)?;
    dict.set_item("c", report.c)?;
    dict.set_item("apl_input", report.apl_input)?;
    dict.set_item("apl_random", report.apl_random)?;
    dict.set_item("clustering_input", report.clustering_input)?;
    dict.set_item("clustering_lattice", report.clustering_lattice)?;
    dict.set_item("lattice_degree", report.lattice_degree)?;
    dict.set_item("random_seed", report.random_seed)?;
    dict.set_item("warnings", report.warnings)?;
    Ok(dict.into_any().unbind())
}

#[pymodule]
fn pyhyperball(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("UndefinedMetricError", m.py().get_type::<UndefinedMetricError>())?;
    m.add_class::<PyHllCounter>()?;
    m.add_class::<PyMinHash>()?;
    m.add_class::<PySketch>()?;
    m.add_class::<PyGraph>()?;
    m.add_class::<PyBallTable>()?;
    m.add_function(wrap_pyfunction!(load_edge_list, m)?)?;
    m.add_function(wrap_pyfunction!(gnm_random, m)?)?;
    m.add_function(wrap_pyfunction!(ring_lattice, m)?)?;
    m.add_function(wrap_pyfunction!(watts_strogatz, m)?)?;
    m.add_function(wrap_pyfunction!(run_hyperball, m)?)?;
    m.add_function(wrap_pyfunction!(bfs_balls, m)?)?;
    m.add_function(wrap_pyfunction!(exact_average_path_length, m)?)?;
    m.add_function(wrap_pyfunction!(exact_distance_distribution, m)?)?;
    m.add_function(wrap_pyfunction!(avg_clustering, m)?)?;
    m.add_function(wrap_pyfunction!(local_clustering, m)?)?;
    m.add_function(wrap_pyfunction!(small_world_coefficient, m)?)?;
    Ok(())
}
