//! Greedy maximum-weight matching over witness counts.

use super::witness::WitnessCounts;
use super::{MatchEntry, Matching, Stage, UsedSets};

/// Greedy acceptance pass: walk pairs in (count desc, u asc, v asc) order and
/// accept each whose count reaches `tau` and whose endpoints are both free.
/// `used` carries occupancy in and out, so earlier stages block later ones.
pub(crate) fn gmwm_into(
    counts: &WitnessCounts,
    tau: f64,
    stage: Stage,
    used: &mut UsedSets,
) -> Vec<MatchEntry> {
    let mut out = Vec::new();
    for (u, v, c) in counts.ranked() {
        if (c as f64) < tau {
            // Ranked by count, so nothing below can reach the threshold.
            break;
        }
        if used.claim(u, v) {
            out.push(MatchEntry { u, v, stage, witnesses: c });
        }
    }
    out
}

/// Dominance-filtered greedy pass for the noisy first slice: accept a pair
/// only while its count strictly exceeds every free rival sharing either
/// endpoint, and iterate to a fixed point so eliminations unlock deferred
/// pairs. True pairs outrank their rivals only narrowly here, so the plain
/// greedy order would turn near-ties into coin flips; requiring strict
/// dominance trades a little recall for near-zero fakes, which the
/// downstream stages depend on.
pub(crate) fn gmwm_dominant_into(
    counts: &WitnessCounts,
    tau: f64,
    stage: Stage,
    used: &mut UsedSets,
) -> Vec<MatchEntry> {
    let mut live: Vec<(u32, u32, u32)> =
        counts.iter().filter(|&(_, _, c)| (c as f64) >= tau).collect();
    let mut out = Vec::new();
    loop {
        live.retain(|&(u, v, _)| used.free(u, v));
        // Highest count per endpoint and whether it is held uniquely.
        let mut row: std::collections::HashMap<u32, (u32, bool)> = std::collections::HashMap::new();
        let mut col: std::collections::HashMap<u32, (u32, bool)> = std::collections::HashMap::new();
        for &(u, v, c) in &live {
            for (map, key) in [(&mut row, u), (&mut col, v)] {
                match map.entry(key) {
                    std::collections::hash_map::Entry::Vacant(e) => {
                        e.insert((c, true));
                    }
                    std::collections::hash_map::Entry::Occupied(mut e) => {
                        let (best, _) = *e.get();
                        if c > best {
                            e.insert((c, true));
                        } else if c == best {
                            e.insert((best, false));
                        }
                    }
                }
            }
        }
        // Strict dominators are pairwise vertex-disjoint, so accept them all.
        let mut accepted = Vec::new();
        for &(u, v, c) in &live {
            if row[&u] == (c, true) && col[&v] == (c, true) {
                accepted.push((u, v, c));
            }
        }
        if accepted.is_empty() {
            return out;
        }
        accepted.sort_unstable_by(|a, b| b.2.cmp(&a.2).then(a.0.cmp(&b.0)).then(a.1.cmp(&b.1)));
        for (u, v, c) in accepted {
            let claimed = used.claim(u, v);
            debug_assert!(claimed, "strict dominators cannot conflict");
            out.push(MatchEntry { u, v, stage, witnesses: c });
        }
    }
}

/// Standalone greedy matching with no prior occupancy.
pub fn gmwm(counts: &WitnessCounts, tau: f64, stage: Stage) -> Matching {
    let max_u = counts.iter().map(|(u, _, _)| u).max().map_or(0, |m| m as usize + 1);
    let max_v = counts.iter().map(|(_, v, _)| v).max().map_or(0, |m| m as usize + 1);
    let mut used = UsedSets::new(max_u, max_v);
    Matching::from_entries(gmwm_into(counts, tau, stage, &mut used))
}
