//! Chung-Lu parent graphs, correlated subsampled pairs, and seed sets,
//! all reproducible from one master seed.

use std::path::Path;

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::graph::Graph;
use crate::rng::{tag, StreamKey};
use crate::{Error, Result};

/// Parameters of the generative model.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModelParams {
    pub n: usize,
    /// Power-law exponent, in (2, 3).
    pub beta: f64,
    /// Target average weight.
    pub wbar: f64,
    /// Largest weight; must satisfy `wbar < wmax <= sqrt(n * wbar)`.
    pub wmax: f64,
    /// Edge subsampling probability for each observed graph.
    pub s: f64,
    /// Seed fraction: each true pair is revealed independently with this probability.
    pub theta: f64,
    /// Vertex survival probability, applied independently per graph
    /// (1.0 keeps every vertex and the two graphs share the full id space).
    pub vertex_keep: f64,
}

impl ModelParams {
    /// Defaults: `wmax = sqrt(n * wbar)`, `s = 1`, `theta = 0`, all vertices kept.
    pub fn new(n: usize, beta: f64, wbar: f64) -> Self {
        ModelParams {
            n,
            beta,
            wbar,
            wmax: (n as f64 * wbar).sqrt(),
            s: 1.0,
            theta: 0.0,
            vertex_keep: 1.0,
        }
    }

    pub fn with_s(mut self, s: f64) -> Self {
        self.s = s;
        self
    }

    pub fn with_theta(mut self, theta: f64) -> Self {
        self.theta = theta;
        self
    }

    pub fn with_wmax(mut self, wmax: f64) -> Self {
        self.wmax = wmax;
        self
    }

    pub fn with_vertex_keep(mut self, keep: f64) -> Self {
        self.vertex_keep = keep;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.n == 0 {
            return Err(Error::Parameter("n must be positive".into()));
        }
        if !(self.beta > 2.0 && self.beta < 3.0) {
            return Err(Error::Parameter(format!(
                "beta must lie in (2, 3), got {}",
                self.beta
            )));
        }
        if !(self.wbar > 0.0) {
            return Err(Error::Parameter("wbar must be positive".into()));
        }
        let cap = (self.n as f64 * self.wbar).sqrt();
        if !(self.wbar < self.wmax && self.wmax <= cap * (1.0 + 1e-12)) {
            return Err(Error::Parameter(format!(
                "need wbar < wmax <= sqrt(n*wbar) = {cap}, got wmax = {}",
                self.wmax
            )));
        }
        if !(0.0..=1.0).contains(&self.s) {
            return Err(Error::Parameter("s must lie in [0, 1]".into()));
        }
        if !(0.0..=1.0).contains(&self.theta) {
            return Err(Error::Parameter("theta must lie in [0, 1]".into()));
        }
        if !(self.vertex_keep > 0.0 && self.vertex_keep <= 1.0) {
            return Err(Error::Parameter("vertex_keep must lie in (0, 1]".into()));
        }
        Ok(())
    }
}

/// Per-vertex weights, nonincreasing in the vertex index.
#[derive(Debug, Clone)]
pub struct WeightSequence {
    pub w: Vec<f64>,
    pub i0: f64,
}

/// Evaluates the closed-form weight sequence: vertex `i` gets
/// `wbar * (beta-2)/(beta-1) * (n/(i + i0))^(1/(beta-1))` with the offset
/// `i0 = n * (wbar*(beta-2) / (wmax*(beta-1)))^(beta-1)`, so that `w[0] = wmax`.
pub fn compute_weights(p: &ModelParams) -> Result<WeightSequence> {
    p.validate()?;
    let n = p.n as f64;
    let i0 = n * (p.wbar * (p.beta - 2.0) / (p.wmax * (p.beta - 1.0))).powf(p.beta - 1.0);
    let coeff = p.wbar * (p.beta - 2.0) / (p.beta - 1.0);
    let inv = 1.0 / (p.beta - 1.0);
    let w = (0..p.n)
        .map(|i| coeff * (n / (i as f64 + i0)).powf(inv))
        .collect();
    Ok(WeightSequence { w, i0 })
}

/// A generated problem instance: the two observed graphs, the hidden
/// correspondence (defined on the vertices surviving in both graphs),
/// and the revealed seed pairs.
#[derive(Debug, Clone)]
pub struct CorrelatedInstance {
    pub g1: Graph,
    pub g2: Graph,
    /// Pairs `(u, v)` with `u` a G1 id and `v` the corresponding G2 id,
    /// sorted by `u`. Injective on both sides.
    pub truth: Vec<(u32, u32)>,
    pub seeds: Vec<(u32, u32)>,
}

// Above this size the quadratic pair scan gives way to sorted-weight skip
// sampling; both draw each pair independently with probability w_i*w_j/(n*wbar).
const PAIRWISE_LIMIT: usize = 20_000;

/// Samples a parent graph: every unordered pair `{i, j}` becomes an edge
/// independently with probability `w_i * w_j / (n * wbar)`.
pub fn sample_parent(weights: &WeightSequence, p: &ModelParams, key: StreamKey) -> Result<Graph> {
    let w = &weights.w;
    if w.len() >= 2 {
        let pmax = w[0] * w[1] / (p.n as f64 * p.wbar);
        if pmax > 1.0 + 1e-12 {
            return Err(Error::Parameter(format!(
                "edge probability {pmax} exceeds 1; lower wmax"
            )));
        }
    }
    let rows = if p.n > PAIRWISE_LIMIT {
        sample_parent_rows_skip(w, p, key)
    } else {
        sample_parent_rows_pairwise(w, p, key)
    };
    let edges: Vec<(u32, u32)> = rows.into_iter().flatten().collect();
    Graph::from_edges(p.n, &edges)
}

fn row_key(key: StreamKey, i: usize) -> StreamKey {
    key.child(tag::PARENT).child(i as u64)
}

fn sample_parent_rows_pairwise(w: &[f64], p: &ModelParams, key: StreamKey) -> Vec<Vec<(u32, u32)>> {
    let denom = p.n as f64 * p.wbar;
    (0..p.n)
        .into_par_iter()
        .map(|i| {
            let mut rng = row_key(key, i).rng();
            let mut row = Vec::new();
            for j in (i + 1)..p.n {
                let pij = w[i] * w[j] / denom;
                if rng.random::<f64>() < pij {
                    row.push((i as u32, j as u32));
                }
            }
            row
        })
        .collect()
}

/// Skip sampling over a nonincreasing weight sequence: within row `i`, the
/// probability bound at the current column dominates every later column, so
/// a geometric jump lands on the next candidate and a thinning test restores
/// the exact Bernoulli marginal.
fn sample_parent_rows_skip(w: &[f64], p: &ModelParams, key: StreamKey) -> Vec<Vec<(u32, u32)>> {
    let denom = p.n as f64 * p.wbar;
    (0..p.n)
        .into_par_iter()
        .map(|i| {
            let mut rng = row_key(key, i).rng();
            let mut row = Vec::new();
            let mut j = i + 1;
            while j < p.n {
                let q = (w[i] * w[j] / denom).min(1.0);
                if q <= 0.0 {
                    break;
                }
                if q < 1.0 {
                    let u: f64 = rng.random();
                    let skip = ((1.0 - u).ln() / (1.0 - q).ln()).floor();
                    if !skip.is_finite() || skip >= (p.n - j) as f64 {
                        break;
                    }
                    j += skip as usize;
                }
                let pij = w[i] * w[j] / denom;
                if rng.random::<f64>() < pij / q {
                    row.push((i as u32, j as u32));
                }
                j += 1;
            }
            row
        })
        .collect()
}

fn bernoulli_keep(n: usize, prob: f64, key: StreamKey) -> Vec<bool> {
    if prob >= 1.0 {
        return vec![true; n];
    }
    let mut rng = key.rng();
    (0..n).map(|_| rng.random::<f64>() < prob).collect()
}

/// Compaction map for the kept vertices: `map[old] = Some(new)` with new ids
/// assigned in ascending old-id order.
fn compact(keep: &[bool]) -> (Vec<Option<u32>>, usize) {
    let mut map = vec![None; keep.len()];
    let mut next = 0u32;
    for (old, &k) in keep.iter().enumerate() {
        if k {
            map[old] = Some(next);
            next += 1;
        }
    }
    (map, next as usize)
}

/// Derives the correlated pair from a parent graph: each graph keeps every
/// parent edge independently with probability `s` (restricted to its surviving
/// vertices when `vertex_keep < 1`), and the second graph is relabeled by a
/// uniform random permutation. The truth map covers the common vertices.
pub fn subsample_pair(g0: &Graph, p: &ModelParams, key: StreamKey) -> CorrelatedInstance {
    let n = g0.vertex_count();
    let keep1 = bernoulli_keep(n, p.vertex_keep, key.child(tag::VERTEX_KEEP_G1));
    let keep2 = bernoulli_keep(n, p.vertex_keep, key.child(tag::VERTEX_KEEP_G2));
    let (map1, n1) = compact(&keep1);
    let (map2, n2) = compact(&keep2);

    // Edge draws are unconditional so the realization per edge is independent
    // of vertex survival (and nested across values of s).
    let mut rng1 = key.child(tag::SAMPLE_G1).rng();
    let mut rng2 = key.child(tag::SAMPLE_G2).rng();
    let mut e1: Vec<(u32, u32)> = Vec::new();
    let mut e2raw: Vec<(u32, u32)> = Vec::new();
    for (u, v) in g0.edges() {
        let r1 = rng1.random::<f64>();
        let r2 = rng2.random::<f64>();
        if r1 < p.s {
            if let (Some(cu), Some(cv)) = (map1[u as usize], map1[v as usize]) {
                e1.push((cu, cv));
            }
        }
        if r2 < p.s {
            if let (Some(cu), Some(cv)) = (map2[u as usize], map2[v as usize]) {
                e2raw.push((cu, cv));
            }
        }
    }

    // Fisher-Yates permutation over the surviving G2 vertices.
    let mut perm: Vec<u32> = (0..n2 as u32).collect();
    let mut prng = key.child(tag::PERMUTATION).rng();
    for i in (1..n2).rev() {
        let j = prng.random_range(0..=i);
        perm.swap(i, j);
    }

    let e2: Vec<(u32, u32)> = e2raw
        .into_iter()
        .map(|(u, v)| (perm[u as usize], perm[v as usize]))
        .collect();

    let g1 = Graph::from_edges(n1, &e1).expect("compacted ids are in range");
    let g2 = Graph::from_edges(n2, &e2).expect("compacted ids are in range");

    let mut truth = Vec::new();
    for old in 0..n {
        if let (Some(c1), Some(c2)) = (map1[old], map2[old]) {
            truth.push((c1, perm[c2 as usize]));
        }
    }
    CorrelatedInstance { g1, g2, truth, seeds: Vec::new() }
}

/// Draws a seed set: each true pair is included independently with
/// probability `theta`.
pub fn sample_seed_set(
    inst: &CorrelatedInstance,
    theta: f64,
    rng: &mut impl Rng,
) -> Vec<(u32, u32)> {
    inst.truth
        .iter()
        .copied()
        .filter(|_| rng.random::<f64>() < theta)
        .collect()
}

/// Generates a full instance (parent, correlated pair, seeds) from the master
/// seed. Identical inputs give a bit-identical instance regardless of the
/// worker-thread count.
pub fn generate_instance(p: &ModelParams, master_seed: u64) -> Result<CorrelatedInstance> {
    let key = StreamKey::new(master_seed);
    let weights = compute_weights(p)?;
    let parent = sample_parent(&weights, p, key)?;
    let mut inst = subsample_pair(&parent, p, key);
    let mut seed_rng = key.child(tag::SEEDS).rng();
    inst.seeds = sample_seed_set(&inst, p.theta, &mut seed_rng);
    Ok(inst)
}

/// JSON sidecar written next to an exported instance.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct InstanceSidecar {
    pub params: ModelParams,
    pub master_seed: u64,
    /// Hidden correspondence, included only when exporting for benchmarking.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub truth: Option<Vec<(u32, u32)>>,
}

/// Writes `g1.el`, `g2.el`, `seeds.txt`, `instance.json`, and (when the truth
/// map is exported for scoring) `truth.txt`.
pub fn export_instance(
    inst: &CorrelatedInstance,
    params: &ModelParams,
    master_seed: u64,
    dir: impl AsRef<Path>,
    with_truth: bool,
) -> Result<()> {
    let dir = dir.as_ref();
    std::fs::create_dir_all(dir)?;
    inst.g1.save_edge_list(dir.join("g1.el"))?;
    inst.g2.save_edge_list(dir.join("g2.el"))?;
    std::fs::write(dir.join("seeds.txt"), pairs_to_string(&inst.seeds))?;
    if with_truth {
        std::fs::write(dir.join("truth.txt"), pairs_to_string(&inst.truth))?;
    }
    let sidecar = InstanceSidecar {
        params: params.clone(),
        master_seed,
        truth: with_truth.then(|| inst.truth.clone()),
    };
    std::fs::write(
        dir.join("instance.json"),
        serde_json::to_string_pretty(&sidecar)?,
    )?;
    Ok(())
}

pub fn pairs_to_string(pairs: &[(u32, u32)]) -> String {
    let mut out = String::new();
    for &(u, v) in pairs {
        out.push_str(&format!("{u} {v}\n"));
    }
    out
}

/// Reads "u v" pair lines ('#' comments allowed), e.g. seed or truth files.
pub fn load_pairs(path: impl AsRef<Path>) -> Result<Vec<(u32, u32)>> {
    let text = std::fs::read_to_string(path)?;
    parse_pairs(&text)
}

pub fn parse_pairs(text: &str) -> Result<Vec<(u32, u32)>> {
    let mut pairs = Vec::new();
    for (idx, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let mut it = line.split_whitespace();
        let mut next = || -> Result<u32> {
            it.next()
                .ok_or_else(|| Error::Parse {
                    line: idx + 1,
                    msg: "expected two ids".into(),
                })?
                .parse()
                .map_err(|_| Error::Parse {
                    line: idx + 1,
                    msg: format!("bad id on line {:?}", line),
                })
        };
        let u = next()?;
        let v = next()?;
        pairs.push((u, v));
    }
    Ok(pairs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;

    fn base_params() -> ModelParams {
        ModelParams::new(10_000, 2.5, 10.0).with_wmax(100.0)
    }

    #[test]
    fn weight_zero_equals_wmax_and_frozen_tail_value() {
        let p = base_params();
        let ws = compute_weights(&p).unwrap();
        assert!((ws.w[0] - p.wmax).abs() / p.wmax < 1e-9);
        // Frozen from a 50-digit evaluation of the closed form.
        assert!((ws.i0 - 60.858061945018457).abs() < 1e-9);
        assert!((ws.w[9999] - 3.3200975423000226).abs() < 1e-9);
    }

    #[test]
    fn weights_strictly_decrease() {
        let mut rng = rand::rngs::StdRng::seed_from_u64(3);
        for _ in 0..50 {
            let n = rng.random_range(100..5000);
            let beta = rng.random_range(2.05..2.95);
            let wbar = rng.random_range(1.0..20.0);
            let cap = (n as f64 * wbar).sqrt();
            let wmax = rng.random_range((wbar * 1.5).min(cap * 0.5)..cap);
            let p = ModelParams::new(n, beta, wbar).with_wmax(wmax);
            let ws = compute_weights(&p).unwrap();
            assert!(ws.w.windows(2).all(|w| w[0] > w[1]));
            assert!(ws.w.iter().all(|&x| x > 0.0));
        }
    }

    #[test]
    fn invalid_params_are_rejected() {
        assert!(compute_weights(&ModelParams::new(100, 3.2, 5.0)).is_err());
        assert!(compute_weights(&ModelParams::new(100, 2.5, 5.0).with_wmax(4.0)).is_err());
        assert!(compute_weights(&ModelParams::new(100, 2.5, 5.0).with_wmax(1e6)).is_err());
    }

    #[test]
    fn zero_weight_product_gives_empty_graph() {
        // All pair probabilities vanish when every weight is tiny.
        let p = ModelParams::new(50, 2.5, 10.0);
        let ws = WeightSequence { w: vec![0.0; 50], i0: 1.0 };
        let g = sample_parent(&ws, &p, StreamKey::new(1)).unwrap();
        assert_eq!(g.edge_count(), 0);
    }

    #[test]
    fn parent_mean_degree_matches_model_expectation() {
        // The paper's claim that degrees track the weights is asymptotic; at
        // n = 10^4 with wmax = sqrt(n*wbar) the exact expected mean degree is
        // ((sum w)^2 - sum w^2) / (n^2 wbar) ≈ 8.08, noticeably below wbar.
        let p = ModelParams::new(10_000, 2.5, 10.0);
        let ws = compute_weights(&p).unwrap();
        let sw: f64 = ws.w.iter().sum();
        let sw2: f64 = ws.w.iter().map(|x| x * x).sum();
        let expect = (sw * sw - sw2) / (p.n as f64 * p.n as f64 * p.wbar);
        let mut total = 0.0;
        for rep in 0..5 {
            let g = sample_parent(&ws, &p, StreamKey::new(900 + rep)).unwrap();
            total += 2.0 * g.edge_count() as f64 / p.n as f64;
        }
        let mean = total / 5.0;
        assert!(
            (mean - expect).abs() / expect < 0.10,
            "mean degree {mean} vs expectation {expect}"
        );
    }

    #[test]
    fn parent_edge_marginals_match_probabilities() {
        let p = ModelParams::new(2000, 2.5, 10.0);
        let ws = compute_weights(&p).unwrap();
        let denom = p.n as f64 * p.wbar;
        // 100 fixed pairs spread across the weight range.
        let pairs: Vec<(u32, u32)> = (0..100u32).map(|k| (k * 7 % 311, 400 + k * 13)).collect();
        let mut hits = vec![0u32; pairs.len()];
        let trials = 200;
        for t in 0..trials {
            let g = sample_parent(&ws, &p, StreamKey::new(5000 + t)).unwrap();
            for (idx, &(a, b)) in pairs.iter().enumerate() {
                if g.has_edge(a, b) {
                    hits[idx] += 1;
                }
            }
        }
        for (idx, &(a, b)) in pairs.iter().enumerate() {
            let pij = ws.w[a as usize] * ws.w[b as usize] / denom;
            let freq = hits[idx] as f64 / trials as f64;
            let sigma = (pij * (1.0 - pij) / trials as f64).sqrt();
            assert!(
                (freq - pij).abs() <= 3.0 * sigma + 1e-12,
                "pair ({a},{b}): freq {freq} vs p {pij} (sigma {sigma})"
            );
        }
    }

    #[test]
    fn skip_sampler_marginals_match_pairwise_sampler() {
        // Run both row samplers on the same small instance and compare
        // empirical edge frequencies pairwise; both must be Bernoulli(p_ij).
        let p = ModelParams::new(300, 2.5, 8.0);
        let ws = compute_weights(&p).unwrap();
        let probe: Vec<(usize, usize)> = vec![(0, 1), (0, 150), (2, 40), (10, 299), (120, 250)];
        let trials = 400;
        let mut hits_a = vec![0u32; probe.len()];
        let mut hits_b = vec![0u32; probe.len()];
        for t in 0..trials {
            let ra = sample_parent_rows_pairwise(&ws.w, &p, StreamKey::new(31_000 + t));
            let rb = sample_parent_rows_skip(&ws.w, &p, StreamKey::new(77_000 + t));
            let contains = |rows: &Vec<Vec<(u32, u32)>>, i: usize, j: usize| {
                rows[i].iter().any(|&(_, b)| b == j as u32)
            };
            for (k, &(i, j)) in probe.iter().enumerate() {
                if contains(&ra, i, j) {
                    hits_a[k] += 1;
                }
                if contains(&rb, i, j) {
                    hits_b[k] += 1;
                }
            }
        }
        let denom = p.n as f64 * p.wbar;
        for (k, &(i, j)) in probe.iter().enumerate() {
            let pij = ws.w[i] * ws.w[j] / denom;
            let sigma = (pij * (1.0 - pij) / trials as f64).sqrt();
            for hits in [&hits_a, &hits_b] {
                let freq = hits[k] as f64 / trials as f64;
                assert!(
                    (freq - pij).abs() <= 4.0 * sigma + 1e-12,
                    "pair ({i},{j}): freq {freq} vs p {pij}"
                );
            }
        }
    }

    #[test]
    fn subsample_degenerate_s() {
        let p = base_params().with_s(1.0);
        let ws = compute_weights(&p).unwrap();
        let key = StreamKey::new(7);
        let g0 = sample_parent(&ws, &p, key).unwrap();
        let inst = subsample_pair(&g0, &p, key);
        assert_eq!(inst.g1, g0);
        assert_eq!(inst.g2.edge_count(), g0.edge_count());
        // g2 is isomorphic to g0 via the truth map.
        let map: Vec<u32> = inst.truth.iter().map(|&(_, v)| v).collect();
        for (u, v) in g0.edges() {
            assert!(inst.g2.has_edge(map[u as usize], map[v as usize]));
        }

        let p0 = base_params().with_s(0.0);
        let inst = subsample_pair(&g0, &p0, key);
        assert_eq!(inst.g1.edge_count(), 0);
        assert_eq!(inst.g2.edge_count(), 0);
    }

    #[test]
    fn subsample_edge_counts_are_binomial() {
        let p = ModelParams::new(1000, 2.5, 8.0).with_s(0.8);
        let ws = compute_weights(&p).unwrap();
        let g0 = sample_parent(&ws, &p, StreamKey::new(400)).unwrap();
        let m = g0.edge_count() as f64;
        let mut total = 0.0;
        let trials = 200;
        for t in 0..trials {
            let inst = subsample_pair(&g0, &p, StreamKey::new(9_000 + t));
            total += inst.g1.edge_count() as f64;
        }
        let mean = total / trials as f64;
        let sigma_mean = (m * 0.8 * 0.2).sqrt() / (trials as f64).sqrt();
        assert!(
            (mean - 0.8 * m).abs() <= 3.0 * sigma_mean,
            "mean {mean} vs {} (sigma {sigma_mean})",
            0.8 * m
        );
    }

    #[test]
    fn every_observed_edge_comes_from_the_parent() {
        let p = ModelParams::new(800, 2.5, 8.0).with_s(0.7).with_vertex_keep(0.9);
        let ws = compute_weights(&p).unwrap();
        let key = StreamKey::new(21);
        let g0 = sample_parent(&ws, &p, key).unwrap();
        let inst = subsample_pair(&g0, &p, key);

        // Rebuild the inverse maps from the truth pairs plus kept sets.
        let keep1 = bernoulli_keep(p.n, p.vertex_keep, key.child(tag::VERTEX_KEEP_G1));
        let (map1, _) = compact(&keep1);
        let mut inv1 = std::collections::HashMap::new();
        for (old, c) in map1.iter().enumerate() {
            if let Some(c) = c {
                inv1.insert(*c, old as u32);
            }
        }
        for (u, v) in inst.g1.edges() {
            assert!(g0.has_edge(inv1[&u], inv1[&v]));
        }

        // Truth is injective on both sides.
        let mut left: Vec<u32> = inst.truth.iter().map(|p| p.0).collect();
        let mut right: Vec<u32> = inst.truth.iter().map(|p| p.1).collect();
        left.sort_unstable();
        right.sort_unstable();
        let l = left.len();
        left.dedup();
        right.dedup();
        assert_eq!(left.len(), l);
        assert_eq!(right.len(), l);
    }

    #[test]
    fn seed_sampling_theta_extremes_and_binomial() {
        let p = base_params().with_s(0.8);
        let inst = {
            let ws = compute_weights(&p).unwrap();
            let key = StreamKey::new(12);
            let g0 = sample_parent(&ws, &p, key).unwrap();
            subsample_pair(&g0, &p, key)
        };
        let key = StreamKey::new(12);
        assert!(sample_seed_set(&inst, 0.0, &mut key.child(1).rng()).is_empty());
        assert_eq!(
            sample_seed_set(&inst, 1.0, &mut key.child(2).rng()),
            inst.truth
        );

        let m = inst.truth.len() as f64;
        let theta = 0.01;
        let trials = 200;
        let mut total = 0.0;
        for t in 0..trials {
            total += sample_seed_set(&inst, theta, &mut key.child(100 + t).rng()).len() as f64;
        }
        let mean = total / trials as f64;
        let sigma_mean = (m * theta * (1.0 - theta)).sqrt() / (trials as f64).sqrt();
        assert!(
            (mean - m * theta).abs() <= 3.0 * sigma_mean,
            "mean seeds {mean} vs {}",
            m * theta
        );
        for s in sample_seed_set(&inst, 0.3, &mut key.child(999).rng()) {
            assert!(inst.truth.binary_search(&s).is_ok());
        }
    }

    #[test]
    fn generation_is_reproducible() {
        let p = base_params().with_s(0.8).with_theta(0.02);
        let a = generate_instance(&p, 123).unwrap();
        let b = generate_instance(&p, 123).unwrap();
        assert_eq!(a.g1, b.g1);
        assert_eq!(a.g2, b.g2);
        assert_eq!(a.truth, b.truth);
        assert_eq!(a.seeds, b.seeds);
        let c = generate_instance(&p, 124).unwrap();
        assert!(a.g1 != c.g1 || a.g2 != c.g2);
    }

    #[test]
    fn changing_theta_keeps_the_graphs() {
        let pa = base_params().with_s(0.8).with_theta(0.01);
        let pb = base_params().with_s(0.8).with_theta(0.5);
        let a = generate_instance(&pa, 55).unwrap();
        let b = generate_instance(&pb, 55).unwrap();
        assert_eq!(a.g1, b.g1);
        assert_eq!(a.g2, b.g2);
        assert_eq!(a.truth, b.truth);
        assert!(a.seeds.len() < b.seeds.len());
    }

    #[test]
    fn export_round_trips() {
        let dir = tempfile::tempdir().unwrap();
        let p = ModelParams::new(500, 2.5, 6.0).with_s(0.9).with_theta(0.1);
        let inst = generate_instance(&p, 9).unwrap();
        export_instance(&inst, &p, 9, dir.path(), true).unwrap();
        let g1 = Graph::load_edge_list(dir.path().join("g1.el")).unwrap();
        let g2 = Graph::load_edge_list(dir.path().join("g2.el")).unwrap();
        assert_eq!(g1, inst.g1);
        assert_eq!(g2, inst.g2);
        assert_eq!(load_pairs(dir.path().join("seeds.txt")).unwrap(), inst.seeds);
        assert_eq!(load_pairs(dir.path().join("truth.txt")).unwrap(), inst.truth);
        let sidecar: InstanceSidecar =
            serde_json::from_str(&std::fs::read_to_string(dir.path().join("instance.json")).unwrap())
                .unwrap();
        assert_eq!(sidecar.truth.unwrap(), inst.truth);
        assert_eq!(sidecar.master_seed, 9);
    }
}
