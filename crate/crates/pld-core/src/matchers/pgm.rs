//! Percolation matching: matched pairs spread marks to neighbor pairs, and
//! free pairs accumulating enough marks are matched and spread in turn.
//!
//! Above the threshold `r` a pair is matched outright (highest marks first).
//! The expanding variant keeps going below `r` once no pair reaches it, but a
//! sub-threshold pair is only taken while it strictly beats every competing
//! free pair on both of its endpoints; ties are deferred until elimination
//! or fresh marks resolve them. That is what lets the matching reach the
//! low-degree bulk, where true pairs top out at one or two marks, without
//! turning ties into coin flips.

use std::cmp::Reverse;
use std::collections::{BinaryHeap, HashMap};

use super::{MatchEntry, Matching, PairMap, Stage, UsedSets};
use crate::graph::Graph;

struct PercolationState<'a> {
    g1: &'a Graph,
    g2: &'a Graph,
    marks: PairMap<u32>,
    // Candidate lists per endpoint; entries go stale when vertices are
    // claimed and are pruned lazily.
    row: HashMap<u32, Vec<u32>>,
    col: HashMap<u32, Vec<u32>>,
    // Lazy max-heap keyed (marks, smallest u, smallest v); stale entries are
    // skipped on pop by re-checking against `marks`.
    heap: BinaryHeap<(u32, Reverse<u32>, Reverse<u32>)>,
}

impl<'a> PercolationState<'a> {
    fn spread(&mut self, w: u32, wp: u32, used: &UsedSets) {
        if w as usize >= self.g1.vertex_count() || wp as usize >= self.g2.vertex_count() {
            return;
        }
        for &u in self.g1.neighbors(w) {
            if used.left_used(u) {
                continue;
            }
            for &v in self.g2.neighbors(wp) {
                if used.right_used(v) {
                    continue;
                }
                let m = self.marks.entry((u, v)).or_insert(0);
                *m += 1;
                if *m == 1 {
                    self.row.entry(u).or_default().push(v);
                    self.col.entry(v).or_default().push(u);
                }
                self.heap.push((*m, Reverse(u), Reverse(v)));
            }
        }
    }

    /// True iff `(u, v)` with `m` marks strictly beats every free competing
    /// pair sharing either endpoint. Prunes claimed entries as it goes.
    fn strictly_best(&mut self, u: u32, v: u32, m: u32, used: &UsedSets) -> bool {
        let marks = &self.marks;
        if let Some(vs) = self.row.get_mut(&u) {
            let mut stale = 0usize;
            for &cand in vs.iter() {
                if used.right_used(cand) {
                    stale += 1;
                    continue;
                }
                if cand != v && marks[&(u, cand)] >= m {
                    return false;
                }
            }
            if stale * 2 > vs.len() {
                vs.retain(|&cand| !used.right_used(cand));
            }
        }
        if let Some(us) = self.col.get_mut(&v) {
            let mut stale = 0usize;
            for &cand in us.iter() {
                if used.left_used(cand) {
                    stale += 1;
                    continue;
                }
                if cand != u && marks[&(cand, v)] >= m {
                    return false;
                }
            }
            if stale * 2 > us.len() {
                us.retain(|&cand| !used.left_used(cand));
            }
        }
        true
    }

    /// A match consumed `(x, y)`: pairs that were competing with it may have
    /// become locally best, so requeue the survivors on both lines.
    fn requeue_competitors(&mut self, x: u32, y: u32, used: &UsedSets) {
        let mut pending = Vec::new();
        if let Some(vs) = self.row.get(&x) {
            for &v in vs {
                if !used.right_used(v) {
                    for &u in self.col.get(&v).into_iter().flatten() {
                        if !used.left_used(u) {
                            pending.push((u, v));
                        }
                    }
                }
            }
        }
        if let Some(us) = self.col.get(&y) {
            for &u in us {
                if !used.left_used(u) {
                    for &v in self.row.get(&u).into_iter().flatten() {
                        if !used.right_used(v) {
                            pending.push((u, v));
                        }
                    }
                }
            }
        }
        pending.sort_unstable();
        pending.dedup();
        for (u, v) in pending {
            if let Some(&m) = self.marks.get(&(u, v)) {
                self.heap.push((m, Reverse(u), Reverse(v)));
            }
        }
    }
}

/// Percolation from `seed_pairs` with occupancy carried in `used`. Matching
/// follows (marks desc, u asc, v asc); pairs with at least `r` marks are
/// taken outright, and when `expand` is set the process continues below `r`
/// under the strict local-best rule. Seed pairs only spread marks; their
/// endpoints must already be claimed in `used`.
pub(crate) fn pgm_into(
    g1: &Graph,
    g2: &Graph,
    seed_pairs: &[(u32, u32)],
    r: u32,
    expand: bool,
    used: &mut UsedSets,
) -> Vec<MatchEntry> {
    assert!(r >= 1, "percolation threshold must be at least 1");
    let mut state = PercolationState {
        g1,
        g2,
        marks: PairMap::default(),
        row: HashMap::new(),
        col: HashMap::new(),
        heap: BinaryHeap::new(),
    };
    for &(w, wp) in seed_pairs {
        state.spread(w, wp, used);
    }
    let mut out = Vec::new();
    // While the heap still holds pairs at or above r, deferred pairs keep
    // their not-yet-consumed entries, so rival-requeueing only needs to start
    // once the sub-threshold regime begins. This keeps the hub-heavy opening
    // phase free of requeue storms.
    let mut sub_threshold = false;
    while let Some((m, Reverse(u), Reverse(v))) = state.heap.pop() {
        if state.marks.get(&(u, v)) != Some(&m) {
            continue; // superseded by a later increment
        }
        if !used.free(u, v) {
            continue;
        }
        if m < r {
            if !expand {
                continue;
            }
            sub_threshold = true;
            if !state.strictly_best(u, v, m, used) {
                continue; // deferred; requeued if marks grow or rivals die
            }
        }
        used.claim(u, v);
        out.push(MatchEntry { u, v, stage: Stage::Pgm, witnesses: m });
        state.spread(u, v, used);
        if expand && sub_threshold {
            state.requeue_competitors(u, v, used);
        }
    }
    out
}

/// Thresholded percolation: marks are first spread from every seed pair;
/// then, while some free pair has at least `r` marks, the pair with the most
/// marks (ties: smallest u, then v) is matched and spreads. Returns the newly
/// matched pairs; seeds are excluded from the result but their endpoints stay
/// occupied.
pub fn pgm(g1: &Graph, g2: &Graph, seeds: &Matching, r: u32) -> Matching {
    let mut used = UsedSets::for_graphs(g1, g2);
    used.mark_pairs(seeds.iter().map(|e| (e.u, e.v)));
    let pairs = seeds.pairs();
    Matching::from_entries(pgm_into(g1, g2, &pairs, r, false, &mut used))
}

/// Expanding percolation: as [`pgm`], but once no pair reaches `r` marks the
/// matching keeps growing through sub-threshold pairs that are strict local
/// maxima among their surviving rivals.
pub fn pgm_expanding(g1: &Graph, g2: &Graph, seeds: &Matching, r: u32) -> Matching {
    let mut used = UsedSets::for_graphs(g1, g2);
    used.mark_pairs(seeds.iter().map(|e| (e.u, e.v)));
    let pairs = seeds.pairs();
    Matching::from_entries(pgm_into(g1, g2, &pairs, r, true, &mut used))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::rngs::StdRng;
    use rand::{Rng, SeedableRng};

    #[test]
    fn one_seed_cannot_reach_three_marks() {
        let g = Graph::from_edges(5, &[(0, 1), (0, 2), (1, 2), (3, 0), (4, 1)]).unwrap();
        let seeds = Matching::from_seed_pairs(&[(0, 0)]);
        assert!(pgm(&g, &g, &seeds, 3).is_empty());
    }

    #[test]
    fn pendant_on_matched_triangle_percolates() {
        // Triangle 0-1-2 plus vertex 3 adjacent to all three, on both sides.
        let edges = [(0, 1), (1, 2), (0, 2), (3, 0), (3, 1), (3, 2)];
        let g = Graph::from_edges(4, &edges).unwrap();
        let seeds = Matching::from_seed_pairs(&[(0, 0), (1, 1), (2, 2)]);
        let m = pgm(&g, &g, &seeds, 3);
        assert_eq!(m.pairs(), vec![(3, 3)]);
        assert_eq!(m.entries()[0].witnesses, 3);
    }

    #[test]
    fn expansion_reaches_pendants_and_defers_ties() {
        // Path 1 - 0 - 2 with the center matched: both pendants hold one mark.
        // (1,1) competes with (1,2), (2,1), (2,2) at equal marks, so nothing
        // is matched until elimination resolves the tie; here nothing can.
        let g = Graph::from_edges(3, &[(0, 1), (0, 2)]).unwrap();
        let seeds = Matching::from_seed_pairs(&[(0, 0)]);
        assert!(pgm_expanding(&g, &g, &seeds, 3).is_empty());

        // A second matched anchor 3 adjacent to pendant 1 only breaks the
        // symmetry: (1,1) now has two marks and is matched, which leaves
        // (2,2) as the sole survivor on its line.
        let g = Graph::from_edges(4, &[(0, 1), (0, 2), (3, 1)]).unwrap();
        let seeds = Matching::from_seed_pairs(&[(0, 0), (3, 3)]);
        let m = pgm_expanding(&g, &g, &seeds, 3);
        assert_eq!(m.pairs(), vec![(1, 1), (2, 2)]);
        assert_eq!(m.entries()[0].witnesses, 2);
        assert_eq!(m.entries()[1].witnesses, 1);
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

    /// Fixed-point oracle: recompute every pair's marks from scratch after
    /// each match and apply the same acceptance rule.
    fn reference_pgm(
        g1: &Graph,
        g2: &Graph,
        seeds: &[(u32, u32)],
        r: u32,
        expand: bool,
    ) -> Vec<(u32, u32, u32)> {
        let mut matched: Vec<(u32, u32)> = seeds.to_vec();
        let mut used_l: std::collections::HashSet<u32> = seeds.iter().map(|p| p.0).collect();
        let mut used_r: std::collections::HashSet<u32> = seeds.iter().map(|p| p.1).collect();
        let mut out = Vec::new();
        loop {
            // Current marks of every free pair.
            let mut marks: HashMap<(u32, u32), u32> = HashMap::new();
            for &(w, wp) in &matched {
                for &u in g1.neighbors(w) {
                    for &v in g2.neighbors(wp) {
                        if !used_l.contains(&u) && !used_r.contains(&v) {
                            *marks.entry((u, v)).or_insert(0) += 1;
                        }
                    }
                }
            }
            let mut best: Option<(u32, u32, u32)> = None;
            for (&(u, v), &m) in &marks {
                if m < r {
                    if !expand {
                        continue;
                    }
                    // Strict local best among free rivals.
                    let beaten = marks.iter().any(|(&(u2, v2), &m2)| {
                        (u2, v2) != (u, v) && (u2 == u || v2 == v) && m2 >= m
                    });
                    if beaten {
                        continue;
                    }
                }
                let better = match best {
                    None => true,
                    Some((bu, bv, bm)) => {
                        (m, Reverse(u), Reverse(v)) > (bm, Reverse(bu), Reverse(bv))
                    }
                };
                if better {
                    best = Some((u, v, m));
                }
            }
            match best {
                Some((u, v, m)) => {
                    used_l.insert(u);
                    used_r.insert(v);
                    matched.push((u, v));
                    out.push((u, v, m));
                }
                None => return out,
            }
        }
    }

    #[test]
    fn matches_fixed_point_oracle() {
        let mut rng = StdRng::seed_from_u64(31337);
        for trial in 0..100 {
            let n1 = 6 + trial % 35;
            let n2 = 6 + (trial * 3) % 35;
            let g1 = random_graph(&mut rng, n1, 0.25);
            let g2 = random_graph(&mut rng, n2, 0.25);
            let n_seeds = rng.random_range(1..7);
            let mut seeds = Vec::new();
            let mut seen_l = std::collections::HashSet::new();
            let mut seen_r = std::collections::HashSet::new();
            for _ in 0..n_seeds {
                let u = rng.random_range(0..n1 as u32);
                let v = rng.random_range(0..n2 as u32);
                if seen_l.insert(u) && seen_r.insert(v) {
                    seeds.push((u, v));
                }
            }
            for r in 1..=3u32 {
                let fast: Vec<(u32, u32, u32)> =
                    pgm(&g1, &g2, &Matching::from_seed_pairs(&seeds), r)
                        .iter()
                        .map(|e| (e.u, e.v, e.witnesses))
                        .collect();
                let slow = reference_pgm(&g1, &g2, &seeds, r, false);
                assert_eq!(fast, slow, "trial {trial} r {r}");
            }
        }
    }

    #[test]
    fn expanding_matches_fixed_point_oracle() {
        let mut rng = StdRng::seed_from_u64(90210);
        for trial in 0..100 {
            let n1 = 6 + trial % 30;
            let n2 = 6 + (trial * 5) % 30;
            let g1 = random_graph(&mut rng, n1, 0.22);
            let g2 = random_graph(&mut rng, n2, 0.22);
            let n_seeds = rng.random_range(1..6);
            let mut seeds = Vec::new();
            let mut seen_l = std::collections::HashSet::new();
            let mut seen_r = std::collections::HashSet::new();
            for _ in 0..n_seeds {
                let u = rng.random_range(0..n1 as u32);
                let v = rng.random_range(0..n2 as u32);
                if seen_l.insert(u) && seen_r.insert(v) {
                    seeds.push((u, v));
                }
            }
            for r in 2..=3u32 {
                let fast: Vec<(u32, u32, u32)> =
                    pgm_expanding(&g1, &g2, &Matching::from_seed_pairs(&seeds), r)
                        .iter()
                        .map(|e| (e.u, e.v, e.witnesses))
                        .collect();
                let slow = reference_pgm(&g1, &g2, &seeds, r, true);
                assert_eq!(fast, slow, "trial {trial} r {r}");
            }
        }
    }
}
