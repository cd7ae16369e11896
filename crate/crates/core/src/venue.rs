//! Venue-level citation graph.
//!
//! The weight between two venues is the sum of the already-discounted
//! article-citation weights that cross them:
//!
//! ```text
//! w(s,t) = sum of w(u,v) over articles u in s citing articles v in t
//! ```
//!
//! An edge exists only when at least one article citation crosses the pair,
//! so every venue-edge weight is strictly positive. A venue citing itself is
//! a real edge here — intra-venue citation flow counts like any other. The
//! discount is applied once, at the article level; ranking over this graph
//! consumes these weights as-is.

use std::collections::BTreeMap;

use crate::citation::CitationGraph;
use crate::graph::CsrGraph;
use crate::ingest::ArticleTable;
use crate::rank::EdgeWeights;

#[derive(Debug, Clone)]
pub struct VenueGraph {
    /// Venue ids in sorted order; positions are the graph's node ids.
    pub venue_ids: Vec<String>,
    pub graph: CsrGraph,
    pub weights: EdgeWeights,
    /// Venue index of each article, aligned with the article table.
    pub article_venue: Vec<Option<u32>>,
}

impl VenueGraph {
    pub fn venue_index(&self, venue_id: &str) -> Option<u32> {
        self.venue_ids
            .binary_search_by(|v| v.as_str().cmp(venue_id))
            .ok()
            .map(|i| i as u32)
    }
}

/// Aggregates article-level citation weights into the venue graph.
/// `article_weights` must be the per-edge weights of `cg.graph`.
pub fn build_venue_graph(
    table: &ArticleTable,
    cg: &CitationGraph,
    article_weights: &EdgeWeights,
) -> VenueGraph {
    let venue_ids: Vec<String> = table.venue_ids().into_iter().collect();
    let index: BTreeMap<&str, u32> = venue_ids
        .iter()
        .enumerate()
        .map(|(i, v)| (v.as_str(), i as u32))
        .collect();
    let article_venue: Vec<Option<u32>> = table
        .iter()
        .map(|a| a.venue_id.as_deref().and_then(|v| index.get(v).copied()))
        .collect();

    // Edge iteration runs sources ascending with sorted targets, so each
    // pair's weight accumulates in a fixed order — summation is reproducible
    // down to the last bit.
    let mut pair_weights: BTreeMap<(u32, u32), f64> = BTreeMap::new();
    for (e, (u, v)) in cg.graph.edges().enumerate() {
        if let (Some(s), Some(t)) = (article_venue[u as usize], article_venue[v as usize]) {
            *pair_weights.entry((s, t)).or_insert(0.0) += article_weights.per_edge[e];
        }
    }

    // BTreeMap iteration order equals the sorted edge order CSR uses, so the
    // weight vector lines up with the out-edge arrays.
    let edges: Vec<(u32, u32)> = pair_weights.keys().copied().collect();
    let per_edge: Vec<f64> = pair_weights.values().copied().collect();
    let graph = CsrGraph::from_edges(venue_ids.len(), edges);
    let weights = EdgeWeights::from_per_edge(&graph, per_edge);

    VenueGraph {
        venue_ids,
        graph,
        weights,
        article_venue,
    }
}
