//! Reproducible benchmark harness: generate instances, run matchers over a
//! parameter sweep, score against the hidden truth, and emit CSV plus a
//! static SVG plot. A run is a pure function of its config and master seed,
//! independent of the worker-thread count.

use std::collections::{BTreeMap, HashMap};
use std::fmt::Write as _;
use std::path::Path;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::estimation::{derive_practical_params, estimate_all};
use crate::gen::{
    compute_weights, load_pairs, sample_parent, sample_seed_set, subsample_pair, ModelParams,
};
use crate::graph::Graph;
use crate::matchers::{
    baseline_dhop_only, baseline_one_hop, baseline_pgm, pld, validate_matching, Matching,
};
use crate::rng::{tag, StreamKey};
use crate::slicing::{KStarMode, PldParams};
use crate::{Error, Result};

fn one() -> f64 {
    1.0
}

/// Generative-model section of a run config.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelConfig {
    pub n: usize,
    pub beta: f64,
    pub wbar: f64,
    /// Defaults to `sqrt(n * wbar)`.
    #[serde(default)]
    pub wmax: Option<f64>,
    #[serde(default = "one")]
    pub s: f64,
    #[serde(default)]
    pub theta: f64,
    #[serde(default = "one")]
    pub vertex_keep: f64,
}

impl ModelConfig {
    pub fn to_params(&self) -> ModelParams {
        let mut p = ModelParams::new(self.n, self.beta, self.wbar)
            .with_s(self.s)
            .with_theta(self.theta)
            .with_vertex_keep(self.vertex_keep);
        if let Some(wmax) = self.wmax {
            p = p.with_wmax(wmax);
        }
        p
    }
}

fn default_d_hops() -> u32 {
    3
}
fn default_r_pgm() -> u32 {
    3
}
fn default_floor() -> f64 {
    8.0
}
fn default_mode() -> KStarMode {
    KStarMode::Practical
}

/// Matcher section of a run config; every field has a sensible default.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AlgoConfig {
    #[serde(default = "default_d_hops")]
    pub d_hops: u32,
    /// Defaults to `min(optimal_gamma, 0.49)`.
    #[serde(default)]
    pub gamma: Option<f64>,
    #[serde(default = "default_r_pgm")]
    pub r_pgm: u32,
    #[serde(default = "one")]
    pub threshold_scale: f64,
    #[serde(default = "default_floor")]
    pub slice_floor_degree: f64,
    #[serde(default = "default_mode")]
    pub mode: KStarMode,
    #[serde(default)]
    pub q0_threshold: Option<f64>,
    /// Witness threshold for the one-hop and depth-limited baselines.
    #[serde(default = "one")]
    pub baseline_tau: f64,
}

impl Default for AlgoConfig {
    fn default() -> Self {
        AlgoConfig {
            d_hops: 3,
            gamma: None,
            r_pgm: 3,
            threshold_scale: 1.0,
            slice_floor_degree: 8.0,
            mode: KStarMode::Practical,
            q0_threshold: None,
            baseline_tau: 1.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Algorithm {
    Pld,
    OneHop,
    Pgm,
    DhopOnly,
}

impl Algorithm {
    pub fn label(&self) -> &'static str {
        match self {
            Algorithm::Pld => "pld",
            Algorithm::OneHop => "one_hop",
            Algorithm::Pgm => "pgm",
            Algorithm::DhopOnly => "dhop_only",
        }
    }
}

/// One sweep axis: a parameter name and its values.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepSpec {
    pub param: String,
    pub values: Vec<f64>,
}

/// Paths to a pre-existing instance (real-graph mode).
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InputsConfig {
    pub g1: String,
    pub g2: String,
    pub seeds: String,
    #[serde(default)]
    pub truth: Option<String>,
}

fn default_reps() -> u32 {
    10
}
fn default_algorithms() -> Vec<Algorithm> {
    vec![Algorithm::Pld]
}

/// Full benchmark configuration (one JSON document).
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    /// Required unless `inputs` is given.
    #[serde(default)]
    pub model: Option<ModelConfig>,
    #[serde(default)]
    pub algo: AlgoConfig,
    /// At most one axis per run.
    #[serde(default)]
    pub sweep: Vec<SweepSpec>,
    #[serde(default = "default_reps")]
    pub repetitions: u32,
    #[serde(default)]
    pub master_seed: u64,
    #[serde(default = "default_algorithms")]
    pub algorithms: Vec<Algorithm>,
    #[serde(default)]
    pub inputs: Option<InputsConfig>,
}

impl RunConfig {
    pub fn from_json(text: &str) -> Result<RunConfig> {
        let cfg: RunConfig = serde_json::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        Ok(cfg)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum SweepParam {
    Theta,
    Gamma,
    DHops,
    S,
    ThresholdScale,
}

impl SweepParam {
    fn parse(name: &str) -> Result<SweepParam> {
        match name.to_ascii_lowercase().as_str() {
            "theta" => Ok(SweepParam::Theta),
            "gamma" => Ok(SweepParam::Gamma),
            "d" | "d_hops" => Ok(SweepParam::DHops),
            "s" => Ok(SweepParam::S),
            "threshold_scale" => Ok(SweepParam::ThresholdScale),
            other => Err(Error::Config(format!("unknown sweep parameter {other:?}"))),
        }
    }

    fn is_model_param(&self) -> bool {
        matches!(self, SweepParam::Theta | SweepParam::S)
    }
}

/// One scored run. `accuracy`/`precision` are absent when no ground truth is
/// available.
#[derive(Debug, Clone, Serialize)]
pub struct RunRow {
    pub algorithm: String,
    pub sweep_param: String,
    pub sweep_value: f64,
    pub repetition: u32,
    pub accuracy: Option<f64>,
    pub precision: Option<f64>,
    pub matched: usize,
    pub wall_ms: u64,
    pub stage_counts: BTreeMap<String, usize>,
}

/// Accuracy is the fraction of truth pairs matched correctly (seeds count);
/// precision is the fraction of output pairs that are correct, reported as 1
/// for an empty matching so downstream aggregation never divides by zero.
pub fn score(matching: &Matching, truth: &[(u32, u32)]) -> Result<(f64, f64)> {
    if truth.is_empty() {
        return Err(Error::Scoring("truth map is empty".into()));
    }
    let map: HashMap<u32, u32> = truth.iter().copied().collect();
    let correct = matching.iter().filter(|e| map.get(&e.u) == Some(&e.v)).count();
    let accuracy = correct as f64 / truth.len() as f64;
    let precision = if matching.is_empty() {
        1.0
    } else {
        correct as f64 / matching.len() as f64
    };
    Ok((accuracy, precision))
}

/// Sort-and-pick median; even-length inputs average the two middle values.
pub fn median(values: &[f64]) -> f64 {
    assert!(!values.is_empty(), "median of empty slice");
    let mut sorted = values.to_vec();
    sorted.sort_by(f64::total_cmp);
    let n = sorted.len();
    if n % 2 == 1 {
        sorted[n / 2]
    } else {
        (sorted[n / 2 - 1] + sorted[n / 2]) / 2.0
    }
}

fn build_pld_params(model: &ModelParams, algo: &AlgoConfig) -> PldParams {
    let mut p = PldParams::new(algo.d_hops, model.n, model.beta, model.wbar, model.s, model.theta);
    if let Some(g) = algo.gamma {
        p.gamma = g;
    }
    p.r_pgm = algo.r_pgm;
    p.threshold_scale = algo.threshold_scale;
    p.slice_floor_degree = algo.slice_floor_degree;
    p.mode = algo.mode;
    p.q0_threshold = algo.q0_threshold;
    p
}

fn apply_sweep(p: &mut PldParams, param: SweepParam, value: f64, algo: &AlgoConfig) -> Result<()> {
    match param {
        SweepParam::Theta => p.theta = value,
        SweepParam::Gamma => p.gamma = value,
        SweepParam::DHops => {
            if value.fract() != 0.0 || value < 1.0 {
                return Err(Error::Config(format!("sweep value {value} is not a valid depth")));
            }
            p.d_hops = value as u32;
            // Re-derive the default gamma for the new depth unless pinned.
            if algo.gamma.is_none() {
                p.gamma = crate::slicing::optimal_gamma(p.d_hops, p.beta).min(0.49);
            }
        }
        SweepParam::S => p.s = value,
        SweepParam::ThresholdScale => p.threshold_scale = value,
    }
    Ok(())
}

fn run_algorithm(
    algo: Algorithm,
    g1: &Graph,
    g2: &Graph,
    seeds: &[(u32, u32)],
    params: &PldParams,
    baseline_tau: f64,
) -> Result<Matching> {
    match algo {
        Algorithm::Pld => pld(g1, g2, seeds, params),
        Algorithm::OneHop => Ok(baseline_one_hop(g1, g2, seeds, baseline_tau)),
        Algorithm::Pgm => Ok(baseline_pgm(g1, g2, seeds, params.r_pgm)),
        Algorithm::DhopOnly => {
            Ok(baseline_dhop_only(g1, g2, seeds, params.d_hops, baseline_tau))
        }
    }
}

fn thread_count(arg: Option<usize>) -> usize {
    arg.or_else(|| std::env::var("PLD_THREADS").ok().and_then(|v| v.parse().ok()))
        .unwrap_or(0) // 0 lets the pool pick hardware parallelism
}

/// Runs the whole benchmark: every sweep point times every repetition times
/// every algorithm. Worker threads are capped by `threads`, then the
/// `PLD_THREADS` environment variable, then hardware parallelism; the result
/// is identical regardless.
pub fn run_benchmark(cfg: &RunConfig, threads: Option<usize>) -> Result<Vec<RunRow>> {
    if cfg.repetitions == 0 {
        return Err(Error::Config("repetitions must be at least 1".into()));
    }
    if cfg.algorithms.is_empty() {
        return Err(Error::Config("no algorithms selected".into()));
    }
    if cfg.sweep.len() > 1 {
        return Err(Error::Config("at most one sweep axis per run".into()));
    }
    let sweep = match cfg.sweep.first() {
        Some(spec) => {
            if spec.values.is_empty() {
                return Err(Error::Config("sweep axis has no values".into()));
            }
            Some((SweepParam::parse(&spec.param)?, spec.param.clone(), spec.values.clone()))
        }
        None => None,
    };

    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(thread_count(threads))
        .build()
        .map_err(|e| Error::Config(format!("cannot build thread pool: {e}")))?;

    if let Some(inputs) = &cfg.inputs {
        pool.install(|| run_on_inputs(cfg, inputs, sweep))
    } else {
        pool.install(|| run_synthetic(cfg, sweep))
    }
}

fn run_synthetic(
    cfg: &RunConfig,
    sweep: Option<(SweepParam, String, Vec<f64>)>,
    ) -> Result<Vec<RunRow>> {
    let model_cfg = cfg
        .model
        .as_ref()
        .ok_or_else(|| Error::Config("synthetic benchmarks need a model section".into()))?;
    let model = model_cfg.to_params();
    model.validate()?;
    let weights = compute_weights(&model)?;

    let rep_key = |rep: u32| {
        StreamKey::new(cfg.master_seed).child(tag::REPETITION).child(rep as u64)
    };

    // Parent graphs depend only on (master seed, repetition), so sweeping any
    // parameter compares algorithms on the same realizations.
    let parents: Vec<Graph> = (0..cfg.repetitions)
        .into_par_iter()
        .map(|rep| sample_parent(&weights, &model, rep_key(rep)))
        .collect::<Result<Vec<_>>>()?;

    let (sweep_param, sweep_name, sweep_values) = match sweep {
        Some((p, name, values)) => (Some(p), name, values),
        None => (None, "none".to_string(), vec![0.0]),
    };

    let tasks: Vec<(usize, u32)> = (0..sweep_values.len())
        .flat_map(|si| (0..cfg.repetitions).map(move |rep| (si, rep)))
        .collect();

    let rows: Vec<Vec<RunRow>> = tasks
        .into_par_iter()
        .map(|(si, rep)| -> Result<Vec<RunRow>> {
            let value = sweep_values[si];
            let mut model_pt = model.clone();
            if sweep_param == Some(SweepParam::S) {
                model_pt.s = value;
                model_pt.validate()?;
            }
            let key = rep_key(rep);
            let inst = subsample_pair(&parents[rep as usize], &model_pt, key);
            let mut params = build_pld_params(&model_pt, &cfg.algo);
            if let Some(p) = sweep_param {
                apply_sweep(&mut params, p, value, &cfg.algo)?;
            }
            let mut seed_rng = key.child(tag::SEEDS).rng();
            let seeds = sample_seed_set(&inst, params.theta, &mut seed_rng);

            let mut out = Vec::with_capacity(cfg.algorithms.len());
            for &algo in &cfg.algorithms {
                let start = Instant::now();
                let matching =
                    run_algorithm(algo, &inst.g1, &inst.g2, &seeds, &params, cfg.algo.baseline_tau)?;
                let wall_ms = start.elapsed().as_millis() as u64;
                validate_matching(&matching, &inst.g1, &inst.g2, &params)?;
                let (accuracy, precision) = score(&matching, &inst.truth)?;
                out.push(RunRow {
                    algorithm: algo.label().to_string(),
                    sweep_param: sweep_name.clone(),
                    sweep_value: value,
                    repetition: rep,
                    accuracy: Some(accuracy),
                    precision: Some(precision),
                    matched: matching.len(),
                    wall_ms,
                    stage_counts: matching.stage_counts(),
                });
            }
            Ok(out)
        })
        .collect::<Result<Vec<_>>>()?;

    Ok(rows.into_iter().flatten().collect())
}

fn run_on_inputs(
    cfg: &RunConfig,
    inputs: &InputsConfig,
    sweep: Option<(SweepParam, String, Vec<f64>)>,
) -> Result<Vec<RunRow>> {
    if let Some((param, _, _)) = &sweep {
        if param.is_model_param() {
            return Err(Error::Config(
                "cannot sweep a model parameter over fixed input graphs".into(),
            ));
        }
    }
    let g1 = Graph::load_edge_list(&inputs.g1)?;
    let g2 = Graph::load_edge_list(&inputs.g2)?;
    let seeds = load_pairs(&inputs.seeds)?;
    let truth = inputs.truth.as_ref().map(load_pairs).transpose()?;

    let est = estimate_all(&g1, &g2, &seeds, Some(6))?;
    let (mut base_params, _warnings) = derive_practical_params(
        &est,
        cfg.algo.d_hops,
        g1.vertex_count(),
        g2.vertex_count(),
        est.theta_hat,
    );
    if let Some(gamma) = cfg.algo.gamma {
        base_params.gamma = gamma;
    }
    base_params.r_pgm = cfg.algo.r_pgm;
    base_params.threshold_scale = cfg.algo.threshold_scale;
    base_params.slice_floor_degree = cfg.algo.slice_floor_degree;
    base_params.q0_threshold = cfg.algo.q0_threshold;

    let (sweep_param, sweep_name, sweep_values) = match sweep {
        Some((p, name, values)) => (Some(p), name, values),
        None => (None, "none".to_string(), vec![0.0]),
    };

    let mut rows = Vec::new();
    for (_si, &value) in sweep_values.iter().enumerate() {
        let mut params = base_params.clone();
        if let Some(p) = sweep_param {
            apply_sweep(&mut params, p, value, &cfg.algo)?;
        }
        for rep in 0..cfg.repetitions {
            for &algo in &cfg.algorithms {
                let start = Instant::now();
                let matching =
                    run_algorithm(algo, &g1, &g2, &seeds, &params, cfg.algo.baseline_tau)?;
                let wall_ms = start.elapsed().as_millis() as u64;
                validate_matching(&matching, &g1, &g2, &params)?;
                let (accuracy, precision) = match &truth {
                    Some(t) => {
                        let (a, p) = score(&matching, t)?;
                        (Some(a), Some(p))
                    }
                    None => (None, None),
                };
                rows.push(RunRow {
                    algorithm: algo.label().to_string(),
                    sweep_param: sweep_name.clone(),
                    sweep_value: value,
                    repetition: rep,
                    accuracy,
                    precision,
                    matched: matching.len(),
                    wall_ms,
                    stage_counts: matching.stage_counts(),
                });
            }
        }
    }
    Ok(rows)
}

/// Renders the CSV. With `no_timing` the wall-time column is zeroed so two
/// runs of the same config are byte-identical.
pub fn emit_csv(rows: &[RunRow], no_timing: bool) -> Result<String> {
    if rows.is_empty() {
        return Err(Error::Input("no rows to emit".into()));
    }
    let mut out = String::from(
        "algorithm,sweep_param,sweep_value,repetition,accuracy,precision,matched,wall_ms\n",
    );
    for r in rows {
        let acc = r.accuracy.map(|a| format!("{a:.6}")).unwrap_or_default();
        let prec = r.precision.map(|p| format!("{p:.6}")).unwrap_or_default();
        let wall = if no_timing { 0 } else { r.wall_ms };
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{},{}",
            r.algorithm, r.sweep_param, r.sweep_value, r.repetition, acc, prec, r.matched, wall
        );
    }
    Ok(out)
}

pub fn write_csv(rows: &[RunRow], path: impl AsRef<Path>, no_timing: bool) -> Result<()> {
    let text = emit_csv(rows, no_timing)?;
    std::fs::write(path, text)?;
    Ok(())
}

const PALETTE: [&str; 6] = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"];

/// Renders a self-contained SVG: median accuracy against the sweep value,
/// one polyline per algorithm.
pub fn emit_plot(rows: &[RunRow]) -> Result<String> {
    let scored: Vec<&RunRow> = rows.iter().filter(|r| r.accuracy.is_some()).collect();
    if scored.is_empty() {
        return Err(Error::Input("no scored rows to plot".into()));
    }
    let sweep_name = scored[0].sweep_param.clone();

    // algorithm -> sweep value -> accuracies
    let mut by_algo: BTreeMap<&str, BTreeMap<u64, (f64, Vec<f64>)>> = BTreeMap::new();
    for r in &scored {
        by_algo
            .entry(r.algorithm.as_str())
            .or_default()
            .entry(r.sweep_value.to_bits())
            .or_insert((r.sweep_value, Vec::new()))
            .1
            .push(r.accuracy.unwrap());
    }

    let values: Vec<f64> = {
        let set: std::collections::HashSet<u64> =
            scored.iter().map(|r| r.sweep_value.to_bits()).collect();
        let mut v: Vec<f64> = set.into_iter().map(f64::from_bits).collect();
        v.sort_by(f64::total_cmp);
        v
    };
    let (xmin, xmax) = (values[0], *values.last().unwrap());
    let span = if (xmax - xmin).abs() < f64::EPSILON { 1.0 } else { xmax - xmin };

    let (w, h, ml, mr, mt, mb) = (640.0, 440.0, 70.0, 20.0, 30.0, 60.0);
    let px = |x: f64| ml + (x - xmin) / span * (w - ml - mr);
    let py = |y: f64| h - mb - y * (h - mt - mb);

    let mut svg = String::new();
    let _ = writeln!(
        svg,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{w}\" height=\"{h}\" viewBox=\"0 0 {w} {h}\">"
    );
    let _ = writeln!(svg, "<rect width=\"{w}\" height=\"{h}\" fill=\"white\"/>");
    // Axes.
    let _ = writeln!(
        svg,
        "<line x1=\"{ml}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" stroke=\"black\"/>",
        h - mb,
        w - mr,
        h - mb
    );
    let _ = writeln!(
        svg,
        "<line x1=\"{ml}\" y1=\"{mt}\" x2=\"{ml}\" y2=\"{}\" stroke=\"black\"/>",
        h - mb
    );
    for i in 0..=4 {
        let y = i as f64 * 0.25;
        let _ = writeln!(
            svg,
            "<text x=\"{}\" y=\"{}\" font-size=\"11\" text-anchor=\"end\">{y:.2}</text>",
            ml - 6.0,
            py(y) + 4.0
        );
        let _ = writeln!(
            svg,
            "<line x1=\"{ml}\" y1=\"{0}\" x2=\"{1}\" y2=\"{0}\" stroke=\"#dddddd\"/>",
            py(y),
            w - mr
        );
    }
    let x_ticks = values.len().min(9);
    for i in 0..x_ticks {
        let idx = i * (values.len() - 1).max(1) / x_ticks.max(1);
        let x = values[idx.min(values.len() - 1)];
        let _ = writeln!(
            svg,
            "<text x=\"{}\" y=\"{}\" font-size=\"11\" text-anchor=\"middle\">{x}</text>",
            px(x),
            h - mb + 16.0
        );
    }
    let _ = writeln!(
        svg,
        "<text x=\"{}\" y=\"{}\" font-size=\"13\" text-anchor=\"middle\">{sweep_name}</text>",
        (ml + w - mr) / 2.0,
        h - 14.0
    );
    let _ = writeln!(
        svg,
        "<text x=\"16\" y=\"{}\" font-size=\"13\" text-anchor=\"middle\" transform=\"rotate(-90 16 {})\">median accuracy</text>",
        (mt + h - mb) / 2.0,
        (mt + h - mb) / 2.0
    );

    for (idx, (algo, series)) in by_algo.iter().enumerate() {
        let color = PALETTE[idx % PALETTE.len()];
        let mut points: Vec<(f64, f64)> =
            series.values().map(|(x, accs)| (*x, median(accs))).collect();
        points.sort_by(|a, b| a.0.total_cmp(&b.0));
        let path: Vec<String> =
            points.iter().map(|&(x, y)| format!("{:.2},{:.2}", px(x), py(y))).collect();
        let _ = writeln!(
            svg,
            "<polyline fill=\"none\" stroke=\"{color}\" stroke-width=\"2\" points=\"{}\"/>",
            path.join(" ")
        );
        for &(x, y) in &points {
            let _ = writeln!(
                svg,
                "<circle cx=\"{:.2}\" cy=\"{:.2}\" r=\"3\" fill=\"{color}\"/>",
                px(x),
                py(y)
            );
        }
        let ly = mt + 16.0 * idx as f64;
        let _ = writeln!(
            svg,
            "<rect x=\"{}\" y=\"{}\" width=\"12\" height=\"4\" fill=\"{color}\"/>",
            w - mr - 110.0,
            ly
        );
        let _ = writeln!(
            svg,
            "<text x=\"{}\" y=\"{}\" font-size=\"12\">{algo}</text>",
            w - mr - 92.0,
            ly + 6.0
        );
    }
    svg.push_str("</svg>\n");
    Ok(svg)
}

pub fn write_plot(rows: &[RunRow], path: impl AsRef<Path>) -> Result<()> {
    let svg = emit_plot(rows)?;
    std::fs::write(path, svg)?;
    Ok(())
}
