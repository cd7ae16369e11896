//! Compressed-sparse-row storage for directed graphs over dense node ids.
//!
//! Both adjacency directions are materialized: rankings iterate in-edges
//! (score flows along citations), while edge weights are computed and stored
//! in out-edge order. `in_edge_to_out_edge` ties the two together so a weight
//! computed once per out-edge can be read during in-edge traversal without a
//! hash lookup.
//!
//! All adjacency lists are sorted, which makes construction deterministic:
//! the same edge set always yields the same arrays, regardless of input
//! order.

/// Directed graph in CSR form, with its transpose.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CsrGraph {
    out_offsets: Vec<u32>,
    out_targets: Vec<u32>,
    in_offsets: Vec<u32>,
    in_sources: Vec<u32>,
    in_edge_to_out_edge: Vec<u32>,
}

impl CsrGraph {
    /// Builds the graph from an edge list. Edges are sorted internally;
    /// duplicates and self-loops are the caller's responsibility (the
    /// citation builder removes them before calling this).
    ///
    /// Panics if an endpoint is >= `n` — endpoints come from the article
    /// table's dense index, so anything else is a programming error.
    pub fn from_edges(n: usize, mut edges: Vec<(u32, u32)>) -> CsrGraph {
        assert!(n <= u32::MAX as usize, "node count exceeds u32 range");
        edges.sort_unstable();
        for &(u, v) in &edges {
            assert!((u as usize) < n && (v as usize) < n, "edge endpoint out of range");
        }
        let m = edges.len();

        let mut out_offsets = vec![0u32; n + 1];
        for &(u, _) in &edges {
            out_offsets[u as usize + 1] += 1;
        }
        for i in 0..n {
            out_offsets[i + 1] += out_offsets[i];
        }
        let out_targets: Vec<u32> = edges.iter().map(|&(_, v)| v).collect();

        // Transpose. Scanning sources in ascending order keeps each in-list
        // sorted by source without a second sort.
        let mut in_offsets = vec![0u32; n + 1];
        for &(_, v) in &edges {
            in_offsets[v as usize + 1] += 1;
        }
        for i in 0..n {
            in_offsets[i + 1] += in_offsets[i];
        }
        let mut cursor: Vec<u32> = in_offsets[..n].to_vec();
        let mut in_sources = vec![0u32; m];
        let mut in_edge_to_out_edge = vec![0u32; m];
        for (e, &(u, v)) in edges.iter().enumerate() {
            let slot = cursor[v as usize] as usize;
            in_sources[slot] = u;
            in_edge_to_out_edge[slot] = e as u32;
            cursor[v as usize] += 1;
        }

        CsrGraph {
            out_offsets,
            out_targets,
            in_offsets,
            in_sources,
            in_edge_to_out_edge,
        }
    }

    pub fn node_count(&self) -> usize {
        self.out_offsets.len() - 1
    }

    pub fn edge_count(&self) -> usize {
        self.out_targets.len()
    }

    pub fn out_degree(&self, u: u32) -> usize {
        (self.out_offsets[u as usize + 1] - self.out_offsets[u as usize]) as usize
    }

    pub fn in_degree(&self, v: u32) -> usize {
        (self.in_offsets[v as usize + 1] - self.in_offsets[v as usize]) as usize
    }

    /// Targets of `u`'s out-edges, sorted ascending.
    pub fn out_neighbors(&self, u: u32) -> &[u32] {
        let lo = self.out_offsets[u as usize] as usize;
        let hi = self.out_offsets[u as usize + 1] as usize;
        &self.out_targets[lo..hi]
    }

    /// Range of `u`'s out-edges in out-edge index space. Per-edge data
    /// (weights) is stored parallel to this range.
    pub fn out_edge_range(&self, u: u32) -> std::ops::Range<usize> {
        self.out_offsets[u as usize] as usize..self.out_offsets[u as usize + 1] as usize
    }

    /// Sources of `v`'s in-edges, sorted ascending.
    pub fn in_neighbors(&self, v: u32) -> &[u32] {
        let lo = self.in_offsets[v as usize] as usize;
        let hi = self.in_offsets[v as usize + 1] as usize;
        &self.in_sources[lo..hi]
    }

    /// In-edges of `v` as `(source, out_edge_index)` pairs, sorted by source.
    /// The out-edge index addresses per-edge arrays built in out-edge order.
    pub fn in_edges(&self, v: u32) -> impl Iterator<Item = (u32, usize)> + '_ {
        let lo = self.in_offsets[v as usize] as usize;
        let hi = self.in_offsets[v as usize + 1] as usize;
        self.in_sources[lo..hi]
            .iter()
            .zip(&self.in_edge_to_out_edge[lo..hi])
            .map(|(&u, &e)| (u, e as usize))
    }

    /// All edges in out-edge order: `(source, target)` per out-edge index.
    pub fn edges(&self) -> impl Iterator<Item = (u32, u32)> + '_ {
        (0..self.node_count() as u32).flat_map(move |u| {
            self.out_neighbors(u).iter().map(move |&v| (u, v))
        })
    }
}
