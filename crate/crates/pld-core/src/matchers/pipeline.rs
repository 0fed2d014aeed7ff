//! The slice pipeline: filter low-degree seeds, match the first slice by
//! depth-D witnesses, cascade 1-hop matching through the remaining slices,
//! percolate the low-degree remainder, then sweep the top slice.

use super::gmwm::{gmwm_dominant_into, gmwm_into};
use super::pgm::pgm_into;
use super::witness::{count_dhop_witnesses, count_one_hop_witnesses};
use super::{MatchEntry, Matching, Stage, UsedSets};
use crate::graph::Graph;
use crate::slicing::{derive_constants, DerivedConstants, PldParams};
use crate::{Error, Result};

/// Keeps the seeds whose endpoints both have degree at most `5 ln n` in their
/// full graphs. High-degree seeds confuse depth-D counting because they show
/// up in almost every large neighborhood.
pub fn filter_low_degree_seeds(
    seeds: &[(u32, u32)],
    g1: &Graph,
    g2: &Graph,
    n: usize,
) -> Vec<(u32, u32)> {
    let cap = 5.0 * (n as f64).ln();
    seeds
        .iter()
        .copied()
        .filter(|&(u, v)| {
            g1.degree(u) as f64 <= cap && g2.degree(v) as f64 <= cap
        })
        .collect()
}

fn slice_candidates(g: &Graph, d: &DerivedConstants, k: u32) -> Vec<u32> {
    (0..g.vertex_count() as u32)
        .filter(|&u| d.slice_membership(g.degree(u), k))
        .collect()
}

/// First-slice matching: candidates are the slice-1 members of each full
/// graph, witnesses are the filtered seeds counted at depth D inside the
/// degree-capped subgraphs, and the dominance-filtered greedy pass applies
/// threshold `tau1`.
pub fn match_first_slice(
    g1: &Graph,
    g2: &Graph,
    g1_capped: &Graph,
    g2_capped: &Graph,
    seeds_hat: &[(u32, u32)],
    d: &DerivedConstants,
    p: &PldParams,
) -> Matching {
    let cand1 = slice_candidates(g1, d, 1);
    let cand2 = slice_candidates(g2, d, 1);
    let counts = count_dhop_witnesses(g1_capped, g2_capped, seeds_hat, &cand1, &cand2, p.d_hops);
    let mut used = UsedSets::for_graphs(g1, g2);
    Matching::from_entries(gmwm_dominant_into(&counts, d.tau1, Stage::Slice1Dhop, &mut used))
}

/// Cascade: for k = 2..=k*, count 1-hop witnesses of slice-k pairs in the
/// previous slice's matches and accept greedily at `tau2(k)`. Counting runs
/// on the full graphs; a vertex matched in an earlier slice stays used.
pub fn cascade_slices(
    g1: &Graph,
    g2: &Graph,
    r1: &Matching,
    d: &DerivedConstants,
) -> Vec<Matching> {
    let mut used = UsedSets::for_graphs(g1, g2);
    used.mark_pairs(r1.iter().map(|e| (e.u, e.v)));
    let mut prev: Vec<(u32, u32)> = r1.pairs();
    let mut out = Vec::new();
    for k in 2..=d.k_star_effective() {
        let counts = count_one_hop_witnesses(
            g1,
            g2,
            &prev,
            |u| d.slice_membership(g1.degree(u), k),
            |v| d.slice_membership(g2.degree(v), k),
        );
        let entries = gmwm_into(&counts, d.tau2(k), Stage::Cascade(k), &mut used);
        prev = entries.iter().map(|e| (e.u, e.v)).collect();
        out.push(Matching::from_entries(entries));
    }
    out
}

/// Final pass over the top slice: 1-hop witnesses in everything matched so
/// far, greedy matching with threshold `max(1, q0_threshold)`.
pub fn match_slice0(
    g1: &Graph,
    g2: &Graph,
    r_hat: &Matching,
    d: &DerivedConstants,
    p: &PldParams,
) -> Matching {
    let pairs = r_hat.pairs();
    let counts = count_one_hop_witnesses(
        g1,
        g2,
        &pairs,
        |u| d.slice_membership(g1.degree(u), 0),
        |v| d.slice_membership(g2.degree(v), 0),
    );
    let tau = p.q0_threshold.map_or(1.0, |q| q.max(1.0));
    let mut used = UsedSets::for_graphs(g1, g2);
    used.mark_pairs(pairs);
    Matching::from_entries(gmwm_into(&counts, tau, Stage::Slice0, &mut used))
}

/// The full pipeline. Output is the union of the seeds and every stage's
/// matches, with conflicts resolved first-stage-wins (seeds outrank all
/// stages), so the result is injective on both sides.
pub fn pld(g1: &Graph, g2: &Graph, seeds: &[(u32, u32)], p: &PldParams) -> Result<Matching> {
    let d = derive_constants(p)?;
    for &(u, v) in seeds {
        if u as usize >= g1.vertex_count() || v as usize >= g2.vertex_count() {
            return Err(Error::Input(format!("seed ({u}, {v}) out of range")));
        }
    }

    let seeds_hat = filter_low_degree_seeds(seeds, g1, g2, p.n);
    let (g1_capped, _) = g1.induced_by_degree_cap(d.intermediate_cap());
    let (g2_capped, _) = g2.induced_by_degree_cap(d.intermediate_cap());
    let r1 = match_first_slice(g1, g2, &g1_capped, &g2_capped, &seeds_hat, &d, p);
    let cascades = cascade_slices(g1, g2, &r1, &d);

    // Matched slices so far, conflicts resolved in stage order.
    let mut hat_used = UsedSets::for_graphs(g1, g2);
    let mut r_hat = Matching::new();
    r_hat.absorb(r1.entries(), &mut hat_used);
    for stage in &cascades {
        r_hat.absorb(stage.entries(), &mut hat_used);
    }

    // Percolation spreads from everything matched so far plus the revealed
    // seeds. With the expansion floor it keeps growing greedily below r once
    // no pair reaches r, which is what carries the low-degree bulk.
    let (g1_low, _) = g1.induced_by_degree_cap(d.percolation_cap());
    let (g2_low, _) = g2.induced_by_degree_cap(d.percolation_cap());
    let mut spread_pairs = r_hat.pairs();
    let mut seen: std::collections::HashSet<(u32, u32)> =
        spread_pairs.iter().copied().collect();
    for &pair in seeds {
        if seen.insert(pair) {
            spread_pairs.push(pair);
        }
    }
    let mut pgm_used = UsedSets::for_graphs(g1, g2);
    pgm_used.mark_pairs(spread_pairs.iter().copied());
    let pgm_entries =
        pgm_into(&g1_low, &g2_low, &spread_pairs, p.r_pgm, p.pgm_expand, &mut pgm_used);
    r_hat.absorb(&pgm_entries, &mut hat_used);

    let r0 = match_slice0(g1, g2, &r_hat, &d, p);

    let mut used = UsedSets::for_graphs(g1, g2);
    let mut out = Matching::new();
    let seed_entries: Vec<MatchEntry> = seeds
        .iter()
        .map(|&(u, v)| MatchEntry { u, v, stage: Stage::Seed, witnesses: 0 })
        .collect();
    out.absorb(&seed_entries, &mut used);
    out.absorb(r_hat.entries(), &mut used);
    out.absorb(r0.entries(), &mut used);
    debug_assert!(out.check_injective().is_ok());
    Ok(out)
}

/// Post-hoc audit of a matching against the stage contracts: injectivity,
/// per-stage witness thresholds, and slice membership of slice-stage pairs.
/// Baseline stages only require a witness.
pub fn validate_matching(
    m: &Matching,
    g1: &Graph,
    g2: &Graph,
    p: &PldParams,
) -> Result<()> {
    m.check_injective()?;
    let d = derive_constants(p)?;
    let q0_tau = p.q0_threshold.map_or(1.0, |q| q.max(1.0));
    for e in m.iter() {
        let w = e.witnesses as f64;
        let (threshold, needs_slice) = match e.stage {
            Stage::Seed => (0.0, None),
            Stage::Slice1Dhop => (d.tau1, Some(1)),
            Stage::Cascade(k) => {
                if k < 2 || k > d.k_star_effective() {
                    return Err(Error::Input(format!("cascade stage {k} out of range")));
                }
                (d.tau2(k), Some(k))
            }
            Stage::Pgm => {
                let floor = if p.pgm_expand { 1.0 } else { p.r_pgm as f64 };
                (floor, None)
            }
            Stage::Slice0 => (q0_tau, Some(0)),
            Stage::OneHop | Stage::DhopOnly => (1.0, None),
        };
        if w < threshold {
            return Err(Error::Input(format!(
                "pair ({}, {}) from {} has {} witnesses, below threshold {}",
                e.u,
                e.v,
                e.stage.label(),
                e.witnesses,
                threshold
            )));
        }
        if let Some(k) = needs_slice {
            if !d.slice_membership(g1.degree(e.u), k)
                || !d.slice_membership(g2.degree(e.v), k)
            {
                return Err(Error::Input(format!(
                    "pair ({}, {}) fails slice-{k} membership",
                    e.u, e.v
                )));
            }
        }
    }
    Ok(())
}
