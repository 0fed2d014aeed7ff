//! Compact immutable undirected graph with exact-distance neighborhood
//! queries and SNAP-style edge-list I/O.

use std::collections::VecDeque;
use std::fmt::Write as _;
use std::path::Path;

use crate::{Error, Result};

/// Undirected simple graph. Adjacency is stored as sorted contiguous arrays
/// (CSR): the neighbors of `u` live in `neighbors[offsets[u]..offsets[u+1]]`.
/// Immutable after construction; concurrent reads are safe.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    offsets: Vec<usize>,
    neighbors: Vec<u32>,
}

/// Sorted set of vertex ids belonging to some graph.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct VertexSet {
    ids: Vec<u32>,
}

impl VertexSet {
    pub fn from_sorted(ids: Vec<u32>) -> Self {
        debug_assert!(ids.windows(2).all(|w| w[0] < w[1]));
        VertexSet { ids }
    }

    pub fn from_unsorted(mut ids: Vec<u32>) -> Self {
        ids.sort_unstable();
        ids.dedup();
        VertexSet { ids }
    }

    pub fn contains(&self, v: u32) -> bool {
        self.ids.binary_search(&v).is_ok()
    }

    pub fn len(&self) -> usize {
        self.ids.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ids.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = u32> + '_ {
        self.ids.iter().copied()
    }

    pub fn as_slice(&self) -> &[u32] {
        &self.ids
    }
}

impl Graph {
    /// Builds a graph from an edge list. Edges are symmetrized and
    /// deduplicated; self-loops are dropped. Ids must be `< n`.
    pub fn from_edges(n: usize, edges: &[(u32, u32)]) -> Result<Graph> {
        for &(u, v) in edges {
            if u as usize >= n || v as usize >= n {
                return Err(Error::Input(format!(
                    "edge ({u}, {v}) out of range for {n} vertices"
                )));
            }
        }
        let mut degree = vec![0usize; n];
        for &(u, v) in edges {
            if u == v {
                continue;
            }
            degree[u as usize] += 1;
            degree[v as usize] += 1;
        }
        let mut offsets = Vec::with_capacity(n + 1);
        let mut acc = 0usize;
        offsets.push(0);
        for d in &degree {
            acc += d;
            offsets.push(acc);
        }
        let mut cursor: Vec<usize> = offsets[..n].to_vec();
        let mut neighbors = vec![0u32; acc];
        for &(u, v) in edges {
            if u == v {
                continue;
            }
            neighbors[cursor[u as usize]] = v;
            cursor[u as usize] += 1;
            neighbors[cursor[v as usize]] = u;
            cursor[v as usize] += 1;
        }
        // Sort each row and drop duplicate entries in place.
        let mut dedup_offsets = Vec::with_capacity(n + 1);
        dedup_offsets.push(0usize);
        let mut write = 0usize;
        for u in 0..n {
            let (start, end) = (offsets[u], offsets[u + 1]);
            let row = &mut neighbors[start..end];
            row.sort_unstable();
            let mut prev = u32::MAX;
            let row_start = write;
            for i in start..end {
                let v = neighbors[i];
                if v != prev {
                    neighbors[write] = v;
                    write += 1;
                    prev = v;
                }
            }
            let _ = row_start;
            dedup_offsets.push(write);
        }
        neighbors.truncate(write);
        Ok(Graph { offsets: dedup_offsets, neighbors })
    }

    pub fn vertex_count(&self) -> usize {
        self.offsets.len() - 1
    }

    pub fn edge_count(&self) -> usize {
        self.neighbors.len() / 2
    }

    pub fn degree(&self, u: u32) -> usize {
        self.offsets[u as usize + 1] - self.offsets[u as usize]
    }

    pub fn neighbors(&self, u: u32) -> &[u32] {
        &self.neighbors[self.offsets[u as usize]..self.offsets[u as usize + 1]]
    }

    pub fn has_edge(&self, u: u32, v: u32) -> bool {
        self.neighbors(u).binary_search(&v).is_ok()
    }

    /// Iterates every edge once as `(u, v)` with `u < v`, in sorted order.
    pub fn edges(&self) -> impl Iterator<Item = (u32, u32)> + '_ {
        (0..self.vertex_count() as u32).flat_map(move |u| {
            self.neighbors(u)
                .iter()
                .copied()
                .filter(move |&v| u < v)
                .map(move |v| (u, v))
        })
    }

    /// Vertices at shortest-path distance exactly `d` from `u` (`u` excluded).
    pub fn d_hop_neighbors(&self, u: u32, d: u32) -> VertexSet {
        let mut scratch = BfsScratch::new(self.vertex_count());
        let layers = self.bfs_layers(u, d, &mut scratch);
        VertexSet::from_unsorted(layers.last().cloned().unwrap_or_default())
    }

    /// Union of the layers at distance `1..=d` from `u` (`u` excluded).
    pub fn neighbors_within(&self, u: u32, d: u32) -> VertexSet {
        let mut scratch = BfsScratch::new(self.vertex_count());
        let layers = self.bfs_layers(u, d, &mut scratch);
        VertexSet::from_unsorted(layers.into_iter().flatten().collect())
    }

    /// Breadth-first layers `1..=d` around `u`. Layer `k` (index `k-1`) holds
    /// the vertices at distance exactly `k`; trailing layers may be empty.
    /// The scratch is reusable across calls without clearing.
    pub fn bfs_layers(&self, u: u32, d: u32, scratch: &mut BfsScratch) -> Vec<Vec<u32>> {
        assert!((u as usize) < self.vertex_count(), "vertex id out of range");
        assert!(d >= 1, "hop count must be at least 1");
        scratch.begin(self.vertex_count());
        scratch.visit(u);
        let mut layers: Vec<Vec<u32>> = Vec::with_capacity(d as usize);
        let mut frontier = vec![u];
        for _ in 0..d {
            let mut next = Vec::new();
            for &w in &frontier {
                for &v in self.neighbors(w) {
                    if scratch.visit(v) {
                        next.push(v);
                    }
                }
            }
            if next.is_empty() {
                layers.push(next);
                break;
            }
            layers.push(next.clone());
            frontier = next;
        }
        while layers.len() < d as usize {
            layers.push(Vec::new());
        }
        layers
    }

    /// Subgraph keeping exactly the edges whose endpoints both have degree (in
    /// `self`) at most `cap`. The vertex-id space is unchanged; dropped
    /// vertices simply become isolated. Also returns the retained set.
    pub fn induced_by_degree_cap(&self, cap: f64) -> (Graph, VertexSet) {
        let n = self.vertex_count();
        let keep: Vec<bool> = (0..n).map(|u| self.degree(u as u32) as f64 <= cap).collect();
        let mut offsets = Vec::with_capacity(n + 1);
        offsets.push(0usize);
        let mut neighbors = Vec::new();
        for u in 0..n {
            if keep[u] {
                for &v in self.neighbors(u as u32) {
                    if keep[v as usize] {
                        neighbors.push(v);
                    }
                }
            }
            offsets.push(neighbors.len());
        }
        let retained = VertexSet::from_sorted(
            (0..n as u32).filter(|&u| keep[u as usize]).collect(),
        );
        (Graph { offsets, neighbors }, retained)
    }

    /// Degree sequence indexed by vertex id.
    pub fn degrees(&self) -> Vec<usize> {
        (0..self.vertex_count() as u32).map(|u| self.degree(u)).collect()
    }

    /// Reads a whitespace-separated edge list. Lines starting with `#` are
    /// comments, except that a leading `# nodes N` (as written by
    /// [`Graph::save_edge_list`]) pins the vertex count so isolated vertices
    /// survive a round trip. Without that header, ids are compacted to
    /// `0..n-1` in first-appearance order.
    pub fn load_edge_list(path: impl AsRef<Path>) -> Result<Graph> {
        let text = std::fs::read_to_string(path)?;
        Self::parse_edge_list(&text)
    }

    pub fn parse_edge_list(text: &str) -> Result<Graph> {
        let mut declared_nodes: Option<usize> = None;
        let mut raw_edges: Vec<(u64, u64)> = Vec::new();
        for (idx, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            if let Some(rest) = line.strip_prefix('#') {
                let mut it = rest.split_whitespace();
                if it.next() == Some("nodes") {
                    if let Some(n) = it.next().and_then(|t| t.parse::<usize>().ok()) {
                        declared_nodes = Some(n);
                    }
                }
                continue;
            }
            let mut it = line.split_whitespace();
            let parse = |tok: Option<&str>| -> Result<u64> {
                tok.ok_or_else(|| Error::Parse {
                    line: idx + 1,
                    msg: "expected two vertex ids".into(),
                })?
                .parse::<u64>()
                .map_err(|_| Error::Parse {
                    line: idx + 1,
                    msg: format!("not a nonnegative integer: {line:?}"),
                })
            };
            let u = parse(it.next())?;
            let v = parse(it.next())?;
            if it.next().is_some() {
                return Err(Error::Parse {
                    line: idx + 1,
                    msg: format!("trailing tokens on line: {line:?}"),
                });
            }
            raw_edges.push((u, v));
        }

        if let Some(n) = declared_nodes {
            if raw_edges.iter().all(|&(u, v)| (u as usize) < n && (v as usize) < n) {
                let edges: Vec<(u32, u32)> =
                    raw_edges.iter().map(|&(u, v)| (u as u32, v as u32)).collect();
                return Graph::from_edges(n, &edges);
            }
        }

        // Compact ids by first appearance.
        let mut remap: std::collections::HashMap<u64, u32> = std::collections::HashMap::new();
        let mut edges: Vec<(u32, u32)> = Vec::with_capacity(raw_edges.len());
        for (u, v) in raw_edges {
            let next = remap.len() as u32;
            let cu = *remap.entry(u).or_insert(next);
            let next = remap.len() as u32;
            let cv = *remap.entry(v).or_insert(next);
            edges.push((cu, cv));
        }
        Graph::from_edges(remap.len(), &edges)
    }

    /// Canonical save form: a `# nodes N` header, then one edge per line as
    /// `u v` with `u < v`, sorted.
    pub fn save_edge_list(&self, path: impl AsRef<Path>) -> Result<()> {
        std::fs::write(path, self.to_edge_list_string())?;
        Ok(())
    }

    pub fn to_edge_list_string(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "# nodes {}", self.vertex_count());
        for (u, v) in self.edges() {
            let _ = writeln!(out, "{u} {v}");
        }
        out
    }
}

/// Reusable BFS visitation state. Visited vertices carry the current epoch,
/// so starting a new traversal is one counter bump instead of a clear.
#[derive(Debug, Clone)]
pub struct BfsScratch {
    mark: Vec<u32>,
    epoch: u32,
}

impl BfsScratch {
    pub fn new(n: usize) -> Self {
        BfsScratch { mark: vec![0; n], epoch: 0 }
    }

    fn begin(&mut self, n: usize) {
        if self.mark.len() < n {
            self.mark.resize(n, 0);
        }
        if self.epoch == u32::MAX {
            self.mark.fill(0);
            self.epoch = 0;
        }
        self.epoch += 1;
    }

    /// Marks `v`; returns true the first time `v` is seen this epoch.
    #[inline]
    fn visit(&mut self, v: u32) -> bool {
        if self.mark[v as usize] == self.epoch {
            false
        } else {
            self.mark[v as usize] = self.epoch;
            true
        }
    }
}

/// Single-source shortest-path distances by plain BFS; `None` = unreachable.
/// Test oracle helper, also used by the CLI for diagnostics.
pub fn bfs_distances(g: &Graph, u: u32) -> Vec<Option<u32>> {
    let mut dist = vec![None; g.vertex_count()];
    dist[u as usize] = Some(0);
    let mut queue = VecDeque::from([u]);
    while let Some(w) = queue.pop_front() {
        let dw = dist[w as usize].unwrap();
        for &v in g.neighbors(w) {
            if dist[v as usize].is_none() {
                dist[v as usize] = Some(dw + 1);
                queue.push_back(v);
            }
        }
    }
    dist
}
