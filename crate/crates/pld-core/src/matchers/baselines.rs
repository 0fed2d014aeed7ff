//! Baseline matchers: global 1-hop witness matching, percolation on the full
//! graphs, and global depth-D witness matching with no slicing. Each output
//! includes the seeds, mirroring the pipeline's output convention.

use super::gmwm::gmwm_into;
use super::pgm::pgm;
use super::witness::{count_dhop_witnesses, count_one_hop_witnesses};
use super::{MatchEntry, Matching, Stage, UsedSets};
use crate::graph::Graph;

fn with_seeds(seeds: &[(u32, u32)], entries: Vec<MatchEntry>) -> Matching {
    let mut out = Matching::from_seed_pairs(seeds);
    let mut used = UsedSets::new(0, 0);
    used.mark_pairs(seeds.iter().copied());
    out.absorb(&entries, &mut used);
    out
}

/// 1-hop witness counts over all vertex pairs, then greedy matching at `tau`.
pub fn baseline_one_hop(g1: &Graph, g2: &Graph, seeds: &[(u32, u32)], tau: f64) -> Matching {
    let counts = count_one_hop_witnesses(g1, g2, seeds, |_| true, |_| true);
    let mut used = UsedSets::for_graphs(g1, g2);
    used.mark_pairs(seeds.iter().copied());
    let entries = gmwm_into(&counts, tau.max(1.0), Stage::OneHop, &mut used);
    with_seeds(seeds, entries)
}

/// Percolation on the full graphs.
pub fn baseline_pgm(g1: &Graph, g2: &Graph, seeds: &[(u32, u32)], r: u32) -> Matching {
    let matched = pgm(g1, g2, &Matching::from_seed_pairs(seeds), r);
    with_seeds(seeds, matched.entries().to_vec())
}

/// Depth-D witness counts over all vertex pairs (no slicing, no degree caps),
/// then greedy matching at `tau`. With `d = 2` this is the classic 2-hop
/// matcher.
pub fn baseline_dhop_only(
    g1: &Graph,
    g2: &Graph,
    seeds: &[(u32, u32)],
    d: u32,
    tau: f64,
) -> Matching {
    let cand1: Vec<u32> = (0..g1.vertex_count() as u32).collect();
    let cand2: Vec<u32> = (0..g2.vertex_count() as u32).collect();
    let counts = count_dhop_witnesses(g1, g2, seeds, &cand1, &cand2, d);
    let mut used = UsedSets::for_graphs(g1, g2);
    used.mark_pairs(seeds.iter().copied());
    let entries = gmwm_into(&counts, tau.max(1.0), Stage::DhopOnly, &mut used);
    with_seeds(seeds, entries)
}
