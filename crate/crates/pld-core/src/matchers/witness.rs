//! Witness counting. The depth-D stage is candidate-centric (one
//! depth-limited BFS per candidate, intersected with the seed endpoints); the
//! 1-hop stages are seed-centric (each matched pair spreads one witness to
//! every neighbor pair). Only pairs with at least one witness are ever
//! materialized.

use super::PairMap;
use std::collections::HashMap;
use crate::graph::{BfsScratch, Graph};

/// Sparse witness counts over candidate pairs; every stored count is >= 1.
#[derive(Debug, Clone, Default)]
pub struct WitnessCounts {
    // (u, v, count), sorted by (u, v), unique.
    entries: Vec<(u32, u32, u32)>,
}

impl WitnessCounts {
    pub(crate) fn from_map(map: PairMap<u32>) -> Self {
        let mut entries: Vec<(u32, u32, u32)> =
            map.into_iter().map(|((u, v), c)| (u, v, c)).collect();
        entries.sort_unstable_by_key(|&(u, v, _)| (u, v));
        WitnessCounts { entries }
    }

    /// Builds from a list of pairs known to be unique; used for hand-built
    /// count maps in tests and by the cross-count below.
    pub fn from_pairs(mut entries: Vec<(u32, u32, u32)>) -> Self {
        entries.sort_unstable_by_key(|&(u, v, _)| (u, v));
        debug_assert!(entries.windows(2).all(|w| (w[0].0, w[0].1) != (w[1].0, w[1].1)));
        entries.retain(|&(_, _, c)| c > 0);
        WitnessCounts { entries }
    }

    pub fn get(&self, u: u32, v: u32) -> u32 {
        self.entries
            .binary_search_by_key(&(u, v), |&(a, b, _)| (a, b))
            .map(|i| self.entries[i].2)
            .unwrap_or(0)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (u32, u32, u32)> + '_ {
        self.entries.iter().copied()
    }

    /// Pairs in greedy acceptance order: count descending, then `u`, then `v`.
    pub fn ranked(&self) -> Vec<(u32, u32, u32)> {
        let mut ranked = self.entries.clone();
        ranked.sort_unstable_by(|a, b| b.2.cmp(&a.2).then(a.0.cmp(&b.0)).then(a.1.cmp(&b.1)));
        ranked
    }
}

/// Seed-index bitset per candidate: which seeds lie at distance exactly `d`.
fn reach_bitsets(
    g: &Graph,
    candidates: &[u32],
    seed_vertex_to_index: &HashMap<u32, Vec<u32>>,
    d: u32,
    words: usize,
) -> Vec<(u32, Vec<u64>)> {
    let mut scratch = BfsScratch::new(g.vertex_count());
    let mut out = Vec::new();
    for &u in candidates {
        if u as usize >= g.vertex_count() {
            continue;
        }
        let layers = g.bfs_layers(u, d, &mut scratch);
        let layer = &layers[d as usize - 1];
        let mut bits = vec![0u64; words];
        let mut any = false;
        for w in layer {
            if let Some(indices) = seed_vertex_to_index.get(w) {
                for &i in indices {
                    bits[i as usize / 64] |= 1 << (i % 64);
                    any = true;
                }
            }
        }
        if any {
            out.push((u, bits));
        }
    }
    out
}

/// Counts, for every candidate pair, the seeds `(w, w')` with `w` at distance
/// exactly `d` from the left candidate and `w'` at distance exactly `d` from
/// the right candidate. Candidates or seeds absent from the graphs (isolated
/// or out of range) contribute nothing.
pub fn count_dhop_witnesses(
    g1: &Graph,
    g2: &Graph,
    seeds: &[(u32, u32)],
    cand1: &[u32],
    cand2: &[u32],
    d: u32,
) -> WitnessCounts {
    if seeds.is_empty() || cand1.is_empty() || cand2.is_empty() {
        return WitnessCounts::default();
    }
    let words = seeds.len().div_ceil(64);
    let mut left_index: HashMap<u32, Vec<u32>> = HashMap::new();
    let mut right_index: HashMap<u32, Vec<u32>> = HashMap::new();
    for (i, &(w, wp)) in seeds.iter().enumerate() {
        left_index.entry(w).or_default().push(i as u32);
        right_index.entry(wp).or_default().push(i as u32);
    }
    let reach1 = reach_bitsets(g1, cand1, &left_index, d, words);
    let reach2 = reach_bitsets(g2, cand2, &right_index, d, words);

    let mut entries = Vec::new();
    for (u, b1) in &reach1 {
        for (v, b2) in &reach2 {
            let mut count = 0u32;
            for k in 0..words {
                count += (b1[k] & b2[k]).count_ones();
            }
            if count > 0 {
                entries.push((*u, *v, count));
            }
        }
    }
    WitnessCounts::from_pairs(entries)
}

/// Counts 1-hop witnesses: every pair `(w, w')` in `witness_pairs` contributes
/// one witness to each neighbor pair `(u, v)` with `u` adjacent to `w` and `v`
/// adjacent to `w'`, restricted to candidates accepted by the two predicates.
pub fn count_one_hop_witnesses(
    g1: &Graph,
    g2: &Graph,
    witness_pairs: &[(u32, u32)],
    accept1: impl Fn(u32) -> bool,
    accept2: impl Fn(u32) -> bool,
) -> WitnessCounts {
    let mut map: PairMap<u32> = PairMap::default();
    for &(w, wp) in witness_pairs {
        if w as usize >= g1.vertex_count() || wp as usize >= g2.vertex_count() {
            continue;
        }
        for &u in g1.neighbors(w) {
            if !accept1(u) {
                continue;
            }
            for &v in g2.neighbors(wp) {
                if accept2(v) {
                    *map.entry((u, v)).or_insert(0) += 1;
                }
            }
        }
    }
    WitnessCounts::from_map(map)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::bfs_distances;
    use rand::rngs::StdRng;
    use rand::{Rng, SeedableRng};

    #[test]
    fn single_seed_one_hop_adjacency() {
        // seeds = {(2, 0)}; u = 1 adjacent to 2 in g1, v = 1 adjacent to 0 in g2.
        let g1 = Graph::from_edges(3, &[(1, 2)]).unwrap();
        let g2 = Graph::from_edges(2, &[(0, 1)]).unwrap();
        let counts = count_dhop_witnesses(&g1, &g2, &[(2, 0)], &[0, 1], &[1], 1);
        assert_eq!(counts.get(1, 1), 1);
        assert_eq!(counts.len(), 1);
    }

    #[test]
    fn no_seeds_no_counts() {
        let g = Graph::from_edges(4, &[(0, 1), (1, 2), (2, 3)]).unwrap();
        let counts = count_dhop_witnesses(&g, &g, &[], &[0, 1, 2, 3], &[0, 1, 2, 3], 2);
        assert!(counts.is_empty());
    }

    fn random_graph(rng: &mut StdRng, n: usize, p: f64) -> Graph {
        let mut edges = Vec::new();
        for u in 0..n as u32 {
            for v in (u + 1)..n as u32 {
                if rng.random::<f64>() < p {
                    edges.push((u, v));
                }
            }
        }
        Graph::from_edges(n, &edges).unwrap()
    }

    /// Per-pair membership test straight from the definition.
    fn brute_force_dhop(
        g1: &Graph,
        g2: &Graph,
        seeds: &[(u32, u32)],
        cand1: &[u32],
        cand2: &[u32],
        d: u32,
    ) -> Vec<(u32, u32, u32)> {
        let mut out = Vec::new();
        for &u in cand1 {
            let dist1 = bfs_distances(g1, u);
            for &v in cand2 {
                let dist2 = bfs_distances(g2, v);
                let mut c = 0;
                for &(w, wp) in seeds {
                    if dist1[w as usize] == Some(d) && dist2[wp as usize] == Some(d) {
                        c += 1;
                    }
                }
                if c > 0 {
                    out.push((u, v, c));
                }
            }
        }
        out.sort_unstable_by_key(|&(u, v, _)| (u, v));
        out
    }

    #[test]
    fn dhop_counts_match_brute_force() {
        let mut rng = StdRng::seed_from_u64(2024);
        for trial in 0..50 {
            let n1 = 5 + trial % 36;
            let n2 = 5 + (trial * 7) % 36;
            let g1 = random_graph(&mut rng, n1, 0.15);
            let g2 = random_graph(&mut rng, n2, 0.15);
            let n_seeds = rng.random_range(1..6);
            let seeds: Vec<(u32, u32)> = (0..n_seeds)
                .map(|_| {
                    (rng.random_range(0..n1 as u32), rng.random_range(0..n2 as u32))
                })
                .collect();
            let cand1: Vec<u32> = (0..n1 as u32).filter(|_| rng.random::<f64>() < 0.7).collect();
            let cand2: Vec<u32> = (0..n2 as u32).filter(|_| rng.random::<f64>() < 0.7).collect();
            for d in 1..=3 {
                let fast = count_dhop_witnesses(&g1, &g2, &seeds, &cand1, &cand2, d);
                let slow = brute_force_dhop(&g1, &g2, &seeds, &cand1, &cand2, d);
                let fast_entries: Vec<(u32, u32, u32)> = fast.iter().collect();
                assert_eq!(fast_entries, slow, "trial {trial} d {d}");
            }
        }
    }

    #[test]
    fn one_hop_counts_match_double_loop() {
        let mut rng = StdRng::seed_from_u64(99);
        for _ in 0..50 {
            let g1 = random_graph(&mut rng, 25, 0.2);
            let g2 = random_graph(&mut rng, 20, 0.2);
            let pairs: Vec<(u32, u32)> = (0..4)
                .map(|_| (rng.random_range(0..25u32), rng.random_range(0..20u32)))
                .collect();
            let counts =
                count_one_hop_witnesses(&g1, &g2, &pairs, |u| u % 2 == 0, |v| v % 3 != 0);
            for u in (0..25u32).step_by(1) {
                for v in 0..20u32 {
                    let expect: u32 = pairs
                        .iter()
                        .filter(|&&(w, wp)| {
                            u % 2 == 0
                                && v % 3 != 0
                                && g1.has_edge(w, u)
                                && g2.has_edge(wp, v)
                        })
                        .count() as u32;
                    assert_eq!(counts.get(u, v), expect);
                }
            }
        }
    }

    #[test]
    fn ranked_orders_by_count_then_ids() {
        let counts = WitnessCounts::from_pairs(vec![(2, 2, 3), (1, 1, 5), (1, 2, 5), (0, 9, 4)]);
        assert_eq!(
            counts.ranked(),
            vec![(1, 1, 5), (1, 2, 5), (0, 9, 4), (2, 2, 3)]
        );
    }
}
