//! Python bindings: expose the graph type, the generator, the matchers, the
//! scorer, and the estimators to Python as an in-process extension module.

use std::collections::HashMap;

use pyo3::exceptions::{PyIOError, PyValueError};
use pyo3::prelude::*;

use pld_core::bench;
use pld_core::estimation;
use pld_core::gen;
use pld_core::matchers;
use pld_core::slicing::{self, PldParams};
use pld_core::Error;

fn to_py_err(err: Error) -> PyErr {
    match err {
        Error::Io(_) | Error::Parse { .. } => PyIOError::new_err(err.to_string()),
        other => PyValueError::new_err(other.to_string()),
    }
}

/// Immutable undirected simple graph.
#[pyclass(name = "Graph", skip_from_py_object)]
#[derive(Clone)]
struct PyGraph {
    inner: pld_core::Graph,
}

#[pymethods]
impl PyGraph {
    /// Build from an edge list; ids must be below `n`. Self-loops are
    /// dropped and duplicate edges merged.
    #[staticmethod]
    fn from_edges(n: usize, edges: Vec<(u32, u32)>) -> PyResult<Self> {
        Ok(PyGraph { inner: pld_core::Graph::from_edges(n, &edges).map_err(to_py_err)? })
    }

    /// Load a whitespace-separated edge list ('#' comments allowed).
    #[staticmethod]
    fn load(path: &str) -> PyResult<Self> {
        Ok(PyGraph { inner: pld_core::Graph::load_edge_list(path).map_err(to_py_err)? })
    }

    fn save(&self, path: &str) -> PyResult<()> {
        self.inner.save_edge_list(path).map_err(to_py_err)
    }

    fn vertex_count(&self) -> usize {
        self.inner.vertex_count()
    }

    fn edge_count(&self) -> usize {
        self.inner.edge_count()
    }

    fn degree(&self, u: u32) -> usize {
        self.inner.degree(u)
    }

    fn neighbors(&self, u: u32) -> Vec<u32> {
        self.inner.neighbors(u).to_vec()
    }

    /// Vertices at shortest-path distance exactly `d` from `u`.
    fn d_hop_neighbors(&self, u: u32, d: u32) -> Vec<u32> {
        self.inner.d_hop_neighbors(u, d).as_slice().to_vec()
    }

    /// Vertices within distance `d` of `u` (`u` excluded).
    fn neighbors_within(&self, u: u32, d: u32) -> Vec<u32> {
        self.inner.neighbors_within(u, d).as_slice().to_vec()
    }

    fn edges(&self) -> Vec<(u32, u32)> {
        self.inner.edges().collect()
    }

    fn __repr__(&self) -> String {
        format!(
            "Graph(vertices={}, edges={})",
            self.inner.vertex_count(),
            self.inner.edge_count()
        )
    }
}

/// A generated problem instance: two correlated graphs, the hidden
/// correspondence, and the revealed seed pairs.
#[pyclass(name = "Instance")]
struct PyInstance {
    #[pyo3(get)]
    g1: PyGraph,
    #[pyo3(get)]
    g2: PyGraph,
    #[pyo3(get)]
    truth: Vec<(u32, u32)>,
    #[pyo3(get)]
    seeds: Vec<(u32, u32)>,
}

/// Generate a correlated pair from the power-law model.
#[pyfunction]
#[pyo3(signature = (n, beta, wbar, s=1.0, theta=0.0, master_seed=0, wmax=None, vertex_keep=1.0))]
#[allow(clippy::too_many_arguments)]
fn generate(
    n: usize,
    beta: f64,
    wbar: f64,
    s: f64,
    theta: f64,
    master_seed: u64,
    wmax: Option<f64>,
    vertex_keep: f64,
) -> PyResult<PyInstance> {
    let mut model = gen::ModelParams::new(n, beta, wbar)
        .with_s(s)
        .with_theta(theta)
        .with_vertex_keep(vertex_keep);
    if let Some(wmax) = wmax {
        model = model.with_wmax(wmax);
    }
    let inst = gen::generate_instance(&model, master_seed).map_err(to_py_err)?;
    Ok(PyInstance {
        g1: PyGraph { inner: inst.g1 },
        g2: PyGraph { inner: inst.g2 },
        truth: inst.truth,
        seeds: inst.seeds,
    })
}

fn build_params(
    g1: &PyGraph,
    g2: &PyGraph,
    seeds_len: usize,
    d_hops: u32,
    beta: f64,
    wbar: f64,
    s: f64,
    gamma: Option<f64>,
    threshold_scale: f64,
    r_pgm: u32,
) -> PldParams {
    let n = g1.inner.vertex_count().min(g2.inner.vertex_count());
    let theta = seeds_len as f64 / n.max(1) as f64;
    let mut p = PldParams::new(d_hops, n, beta, wbar, s, theta);
    if let Some(g) = gamma {
        p.gamma = g;
    }
    p.threshold_scale = threshold_scale;
    p.r_pgm = r_pgm;
    p
}

/// Run the full slice-and-percolate matcher. Returns `(u, v, stage)` tuples.
#[pyfunction]
#[pyo3(signature = (g1, g2, seeds, d_hops=3, beta=2.5, wbar=10.0, s=0.8,
                    gamma=None, threshold_scale=1.0, r_pgm=3))]
#[allow(clippy::too_many_arguments)]
fn match_pld(
    g1: &PyGraph,
    g2: &PyGraph,
    seeds: Vec<(u32, u32)>,
    d_hops: u32,
    beta: f64,
    wbar: f64,
    s: f64,
    gamma: Option<f64>,
    threshold_scale: f64,
    r_pgm: u32,
) -> PyResult<Vec<(u32, u32, String)>> {
    let params = build_params(
        g1, g2, seeds.len(), d_hops, beta, wbar, s, gamma, threshold_scale, r_pgm,
    );
    let m = matchers::pld(&g1.inner, &g2.inner, &seeds, &params).map_err(to_py_err)?;
    Ok(m.iter().map(|e| (e.u, e.v, e.stage.label())).collect())
}

/// Run a baseline matcher: "one_hop", "pgm", or "dhop_only".
#[pyfunction]
#[pyo3(signature = (name, g1, g2, seeds, tau=1.0, r=3, d_hops=2))]
fn match_baseline(
    name: &str,
    g1: &PyGraph,
    g2: &PyGraph,
    seeds: Vec<(u32, u32)>,
    tau: f64,
    r: u32,
    d_hops: u32,
) -> PyResult<Vec<(u32, u32, String)>> {
    let m = match name {
        "one_hop" => matchers::baseline_one_hop(&g1.inner, &g2.inner, &seeds, tau),
        "pgm" => matchers::baseline_pgm(&g1.inner, &g2.inner, &seeds, r),
        "dhop_only" => matchers::baseline_dhop_only(&g1.inner, &g2.inner, &seeds, d_hops, tau),
        other => return Err(PyValueError::new_err(format!("unknown baseline {other:?}"))),
    };
    Ok(m.iter().map(|e| (e.u, e.v, e.stage.label())).collect())
}

/// Score a matching against ground truth; returns `(accuracy, precision)`.
#[pyfunction]
fn score(matching: Vec<(u32, u32)>, truth: Vec<(u32, u32)>) -> PyResult<(f64, f64)> {
    let m = matchers::Matching::from_seed_pairs(&matching);
    bench::score(&m, &truth).map_err(to_py_err)
}

/// Estimate model parameters from an observed pair and its seeds.
#[pyfunction]
#[pyo3(signature = (g1, g2, seeds, dmin=6))]
fn estimate(
    g1: &PyGraph,
    g2: &PyGraph,
    seeds: Vec<(u32, u32)>,
    dmin: usize,
) -> PyResult<HashMap<String, f64>> {
    let est = estimation::estimate_all(&g1.inner, &g2.inner, &seeds, Some(dmin))
        .map_err(to_py_err)?;
    Ok(HashMap::from([
        ("beta_hat".to_string(), est.beta_hat),
        ("dmin_hat".to_string(), est.dmin_hat as f64),
        ("s_hat".to_string(), est.s_hat),
        ("wbar_hat".to_string(), est.wbar_hat),
        ("theta_hat".to_string(), est.theta_hat),
    ]))
}

/// Numeric audit of the asymptotic sufficient conditions; advisory only.
#[pyfunction]
#[pyo3(signature = (n, beta, wbar, s, theta, d_hops=3, gamma=None))]
fn feasibility(
    n: usize,
    beta: f64,
    wbar: f64,
    s: f64,
    theta: f64,
    d_hops: u32,
    gamma: Option<f64>,
) -> PyResult<Vec<(String, f64, f64, bool)>> {
    let mut p = PldParams::new(d_hops, n, beta, wbar, s, theta);
    if let Some(g) = gamma {
        p.gamma = g;
    }
    let report = slicing::feasibility_report(&p);
    Ok(report
        .conditions
        .into_iter()
        .map(|c| (c.condition, c.lhs, c.rhs, c.pass))
        .collect())
}

#[pymodule]
fn pld_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyGraph>()?;
    m.add_class::<PyInstance>()?;
    m.add_function(wrap_pyfunction!(generate, m)?)?;
    m.add_function(wrap_pyfunction!(match_pld, m)?)?;
    m.add_function(wrap_pyfunction!(match_baseline, m)?)?;
    m.add_function(wrap_pyfunction!(score, m)?)?;
    m.add_function(wrap_pyfunction!(estimate, m)?)?;
    m.add_function(wrap_pyfunction!(feasibility, m)?)?;
    Ok(())
}
