//! Model-parameter estimation from an observed graph pair and its seeds,
//! plus derivation of practical matcher parameters from the estimates.

use serde::{Deserialize, Serialize};

use crate::graph::Graph;
use crate::slicing::{optimal_gamma, KStarMode, PldParams, DELTA};
use crate::{Error, Result};

/// Estimates recovered from an observed pair.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct EstimatedParams {
    pub beta_hat: f64,
    pub dmin_hat: usize,
    pub s_hat: f64,
    pub wbar_hat: f64,
    pub theta_hat: f64,
}

/// Maximum-likelihood power-law exponent over the degrees at least `dmin`:
/// `1 + N / sum(ln(d_i / (dmin - 1/2)))`.
pub fn estimate_beta(degrees: &[usize], dmin: usize) -> Result<f64> {
    if dmin == 0 {
        return Err(Error::Estimation("dmin must be at least 1".into()));
    }
    let cutoff = dmin as f64 - 0.5;
    let mut n = 0usize;
    let mut log_sum = 0.0;
    for &d in degrees {
        if d >= dmin {
            n += 1;
            log_sum += (d as f64 / cutoff).ln();
        }
    }
    if n == 0 {
        return Err(Error::Estimation(format!("no degree reaches dmin = {dmin}")));
    }
    Ok(1.0 + n as f64 / log_sum)
}

/// Kolmogorov-Smirnov distance between the empirical tail CDF of the degrees
/// at least `dmin` and the fitted power-law CDF
/// `F(x) = 1 - ((x - 1/2) / (dmin - 1/2))^(1 - beta)`.
fn ks_statistic(tail: &[usize], dmin: usize, beta: f64) -> f64 {
    let cutoff = dmin as f64 - 0.5;
    let n = tail.len() as f64;
    let mut worst: f64 = 0.0;
    // With the half-integer shift, the model form is the probability of lying
    // strictly below d, so it pairs with the left limit of the empirical CDF.
    let mut i = 0;
    while i < tail.len() {
        let d = tail[i];
        let model = 1.0 - ((d as f64 - 0.5) / cutoff).powf(1.0 - beta);
        let empirical = i as f64 / n;
        worst = worst.max((empirical - model).abs());
        while i < tail.len() && tail[i] == d {
            i += 1;
        }
    }
    worst
}

/// Picks the degree cutoff minimizing the KS distance to the fitted
/// power law, scanning the observed distinct degrees in
/// `[2, 0.1 * max degree]` (ties go to the smaller cutoff). Benchmarks on
/// real data conventionally bypass this and fix the cutoff at 6.
pub fn estimate_dmin(degrees: &[usize]) -> usize {
    let mut distinct: Vec<usize> = degrees.iter().copied().filter(|&d| d >= 1).collect();
    distinct.sort_unstable();
    distinct.dedup();
    if distinct.len() <= 1 {
        return distinct.first().copied().unwrap_or(0);
    }
    let dmax = *distinct.last().unwrap();
    let hi = (0.1 * dmax as f64).max(2.0);
    let mut candidates: Vec<usize> =
        distinct.iter().copied().filter(|&d| d >= 2 && d as f64 <= hi).collect();
    if candidates.is_empty() {
        candidates = distinct.clone();
    }

    let mut sorted = degrees.to_vec();
    sorted.sort_unstable();
    let mut best = (f64::INFINITY, usize::MAX);
    for &cand in &candidates {
        let start = sorted.partition_point(|&d| d < cand);
        let tail = &sorted[start..];
        if tail.is_empty() {
            continue;
        }
        let Ok(beta) = estimate_beta(tail, cand) else { continue };
        let ks = ks_statistic(tail, cand, beta);
        if ks < best.0 {
            best = (ks, cand);
        }
    }
    best.1
}

/// Edge-overlap estimate of the sampling probability: align the seed-induced
/// subgraphs through the seed correspondence and compare shared edges to the
/// total, `2 |E1 and E2| / (|E1| + |E2|)`.
pub fn estimate_s(g1: &Graph, g2: &Graph, seed_pairs: &[(u32, u32)]) -> Result<f64> {
    if seed_pairs.len() < 2 {
        return Err(Error::Estimation("need at least 2 seeds to estimate s".into()));
    }
    let mut e1 = 0usize;
    let mut e2 = 0usize;
    let mut both = 0usize;
    for (i, &(u1, v1)) in seed_pairs.iter().enumerate() {
        for &(u2, v2) in &seed_pairs[i + 1..] {
            let in1 = g1.has_edge(u1, u2);
            let in2 = g2.has_edge(v1, v2);
            e1 += in1 as usize;
            e2 += in2 as usize;
            both += (in1 && in2) as usize;
        }
    }
    if e1 + e2 == 0 {
        return Err(Error::Estimation(
            "seed-induced subgraphs have no edges; cannot estimate s".into(),
        ));
    }
    Ok(2.0 * both as f64 / (e1 + e2) as f64)
}

/// Average-degree estimate of the mean weight: `(dbar(G1) + dbar(G2)) / (2 s)`.
pub fn estimate_wbar(g1: &Graph, g2: &Graph, s_hat: f64) -> Result<f64> {
    if !(s_hat > 0.0) {
        return Err(Error::Estimation("s estimate is zero; cannot scale degrees".into()));
    }
    let d1 = 2.0 * g1.edge_count() as f64 / g1.vertex_count().max(1) as f64;
    let d2 = 2.0 * g2.edge_count() as f64 / g2.vertex_count().max(1) as f64;
    Ok((d1 + d2) / (2.0 * s_hat))
}

/// Seed-fraction estimate `|S| / n`. For unequal sizes the caller passes the
/// smaller vertex count (the matchable population bound).
pub fn estimate_theta(seed_count: usize, n: usize) -> f64 {
    assert!(n > 0, "population must be positive");
    seed_count as f64 / n as f64
}

/// Runs every estimator on a graph pair. `dmin_for_beta` defaults to the
/// conventional 6 for the exponent fit; the KS-chosen cutoff is reported
/// separately in `dmin_hat`.
pub fn estimate_all(
    g1: &Graph,
    g2: &Graph,
    seeds: &[(u32, u32)],
    dmin_for_beta: Option<usize>,
) -> Result<EstimatedParams> {
    let mut degrees = g1.degrees();
    degrees.extend(g2.degrees());
    let dmin_hat = estimate_dmin(&degrees);
    let beta_hat = estimate_beta(&degrees, dmin_for_beta.unwrap_or(6))?;
    let s_hat = estimate_s(g1, g2, seeds)?;
    let wbar_hat = estimate_wbar(g1, g2, s_hat)?;
    let n = g1.vertex_count().min(g2.vertex_count());
    let theta_hat = estimate_theta(seeds.len(), n);
    Ok(EstimatedParams { beta_hat, dmin_hat, s_hat, wbar_hat, theta_hat })
}

/// Builds practical matcher parameters from estimates: `gamma` is the optimal
/// choice clamped into `(0, 0.49]`, the first-slice threshold uses the
/// simplified linear-in-n form, and `n` is the smaller vertex count. An
/// exponent estimate outside (2, 3) is clamped with a warning.
pub fn derive_practical_params(
    est: &EstimatedParams,
    d_hops: u32,
    n1: usize,
    n2: usize,
    theta: f64,
) -> (PldParams, Vec<String>) {
    let mut warnings = Vec::new();
    let beta = if est.beta_hat > 2.0 && est.beta_hat < 3.0 {
        est.beta_hat
    } else {
        let clamped = est.beta_hat.clamp(2.001, 2.999);
        warnings.push(format!(
            "estimated exponent {} lies outside (2, 3); clamped to {clamped}",
            est.beta_hat
        ));
        clamped
    };
    let gamma = optimal_gamma(d_hops, beta).min(0.49);
    let params = PldParams {
        d_hops,
        gamma,
        delta: DELTA,
        s: est.s_hat,
        wbar: est.wbar_hat,
        beta,
        n: n1.min(n2),
        theta,
        r_pgm: 3,
        threshold_scale: 1.0,
        slice_floor_degree: 8.0,
        mode: KStarMode::Practical,
        pgm_expand: true,
        simplified_tau1: true,
        q0_threshold: None,
    };
    (params, warnings)
}
