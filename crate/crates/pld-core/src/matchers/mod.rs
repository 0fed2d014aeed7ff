//! Matching machinery: witness counting, greedy matching, percolation, the
//! slice pipeline, and the baseline matchers.

mod baselines;
mod gmwm;
mod pgm;
mod pipeline;
mod witness;

pub use baselines::{baseline_dhop_only, baseline_one_hop, baseline_pgm};
pub use gmwm::gmwm;
pub use pgm::{pgm, pgm_expanding};
pub use pipeline::{
    cascade_slices, filter_low_degree_seeds, match_first_slice, match_slice0, pld,
    validate_matching,
};
pub use witness::{count_dhop_witnesses, count_one_hop_witnesses, WitnessCounts};

use std::collections::HashMap;

use crate::graph::Graph;
use crate::{Error, Result};

/// Which stage of the pipeline produced a matched pair.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Stage {
    /// Revealed a priori.
    Seed,
    /// First slice, matched by depth-D witness counts.
    Slice1Dhop,
    /// Slice `k`, matched by 1-hop witnesses from slice `k-1`.
    Cascade(u32),
    /// Low-degree remainder, matched by percolation.
    Pgm,
    /// Final high-degree pass.
    Slice0,
    /// Baseline: global 1-hop witness matching.
    OneHop,
    /// Baseline: global depth-D witness matching.
    DhopOnly,
}

impl Stage {
    pub fn label(&self) -> String {
        match self {
            Stage::Seed => "seed".into(),
            Stage::Slice1Dhop => "slice1_dhop".into(),
            Stage::Cascade(k) => format!("cascade_{k}"),
            Stage::Pgm => "pgm".into(),
            Stage::Slice0 => "slice0".into(),
            Stage::OneHop => "one_hop".into(),
            Stage::DhopOnly => "dhop_only".into(),
        }
    }
}

/// One matched pair plus its provenance: the stage that matched it and the
/// witness count (percolation marks for [`Stage::Pgm`]) at match time.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MatchEntry {
    pub u: u32,
    pub v: u32,
    pub stage: Stage,
    pub witnesses: u32,
}

/// An injective partial correspondence between the two vertex sets.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Matching {
    entries: Vec<MatchEntry>,
}

impl Matching {
    pub fn new() -> Self {
        Matching::default()
    }

    pub fn from_entries(entries: Vec<MatchEntry>) -> Self {
        let m = Matching { entries };
        debug_assert!(m.check_injective().is_ok());
        m
    }

    pub fn from_seed_pairs(seeds: &[(u32, u32)]) -> Self {
        Matching {
            entries: seeds
                .iter()
                .map(|&(u, v)| MatchEntry { u, v, stage: Stage::Seed, witnesses: 0 })
                .collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entries(&self) -> &[MatchEntry] {
        &self.entries
    }

    pub fn iter(&self) -> impl Iterator<Item = &MatchEntry> {
        self.entries.iter()
    }

    pub fn pairs(&self) -> Vec<(u32, u32)> {
        self.entries.iter().map(|e| (e.u, e.v)).collect()
    }

    pub fn to_map(&self) -> HashMap<u32, u32> {
        self.entries.iter().map(|e| (e.u, e.v)).collect()
    }

    /// Count of matched pairs per stage label.
    pub fn stage_counts(&self) -> std::collections::BTreeMap<String, usize> {
        let mut counts = std::collections::BTreeMap::new();
        for e in &self.entries {
            *counts.entry(e.stage.label()).or_insert(0) += 1;
        }
        counts
    }

    /// Errors if any vertex appears twice on either side.
    pub fn check_injective(&self) -> Result<()> {
        let mut left = std::collections::HashSet::with_capacity(self.entries.len());
        let mut right = std::collections::HashSet::with_capacity(self.entries.len());
        for e in &self.entries {
            if !left.insert(e.u) {
                return Err(Error::Input(format!("left vertex {} matched twice", e.u)));
            }
            if !right.insert(e.v) {
                return Err(Error::Input(format!("right vertex {} matched twice", e.v)));
            }
        }
        Ok(())
    }

    /// Appends the entries whose endpoints are still free, marking them used:
    /// the caller inserts stages in order, so earlier stages win conflicts.
    pub fn absorb(&mut self, entries: &[MatchEntry], used: &mut UsedSets) {
        for &e in entries {
            if used.claim(e.u, e.v) {
                self.entries.push(e);
            }
        }
    }

    /// Serializes as `u v stage` lines.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for e in &self.entries {
            out.push_str(&format!("{} {} {}\n", e.u, e.v, e.stage.label()));
        }
        out
    }
}

/// Occupancy of both vertex sides during matching.
#[derive(Debug, Clone)]
pub struct UsedSets {
    left: Vec<bool>,
    right: Vec<bool>,
}

impl UsedSets {
    pub fn new(n1: usize, n2: usize) -> Self {
        UsedSets { left: vec![false; n1], right: vec![false; n2] }
    }

    pub fn for_graphs(g1: &Graph, g2: &Graph) -> Self {
        UsedSets::new(g1.vertex_count(), g2.vertex_count())
    }

    pub fn mark_pairs(&mut self, pairs: impl IntoIterator<Item = (u32, u32)>) {
        for (u, v) in pairs {
            self.grow(u, v);
            self.left[u as usize] = true;
            self.right[v as usize] = true;
        }
    }

    fn grow(&mut self, u: u32, v: u32) {
        if u as usize >= self.left.len() {
            self.left.resize(u as usize + 1, false);
        }
        if v as usize >= self.right.len() {
            self.right.resize(v as usize + 1, false);
        }
    }

    #[inline]
    pub fn left_used(&self, u: u32) -> bool {
        self.left.get(u as usize).copied().unwrap_or(false)
    }

    #[inline]
    pub fn right_used(&self, v: u32) -> bool {
        self.right.get(v as usize).copied().unwrap_or(false)
    }

    #[inline]
    pub fn free(&self, u: u32, v: u32) -> bool {
        !self.left_used(u) && !self.right_used(v)
    }

    /// Marks both endpoints used; returns false if either was taken.
    #[inline]
    pub fn claim(&mut self, u: u32, v: u32) -> bool {
        if !self.free(u, v) {
            return false;
        }
        self.grow(u, v);
        self.left[u as usize] = true;
        self.right[v as usize] = true;
        true
    }
}

/// Multiply-mix hasher for the hot (u32, u32) pair maps; the default SipHash
/// dominates the percolation profile otherwise.
#[derive(Default)]
pub(crate) struct PairHasher(u64);

impl std::hash::Hasher for PairHasher {
    #[inline]
    fn finish(&self) -> u64 {
        self.0
    }

    fn write(&mut self, bytes: &[u8]) {
        for &b in bytes {
            self.write_u64(b as u64);
        }
    }

    #[inline]
    fn write_u32(&mut self, x: u32) {
        self.write_u64(x as u64);
    }

    #[inline]
    fn write_u64(&mut self, x: u64) {
        self.0 = (self.0.rotate_left(29) ^ x).wrapping_mul(0x9e37_79b9_7f4a_7c15);
    }
}

pub(crate) type PairMap<V> =
    std::collections::HashMap<(u32, u32), V, std::hash::BuildHasherDefault<PairHasher>>;
