//! Time-weighted PageRank.
//!
//! Classical PageRank treats every citation alike, which lets long-obsolete
//! work keep accumulating rank forever. Here each citation is discounted by
//! how long after the cited node's peak year it arrives:
//!
//! ```text
//! w(u,v) = 1                                if year(u) <  peak(v)
//!          1 / ln(e + year(u) - peak(v))^t  otherwise
//! ```
//!
//! and the score update distributes each node's score over its out-edges in
//! proportion to those weights:
//!
//! ```text
//! PR(v) = (1 - d) + d * sum over citing u of  w(u,v) * PR(u) / W(u)
//! ```
//!
//! where `W(u)` is the sum of `u`'s outgoing weights. Note the convention:
//! `d` (default 0.15) scales the link term and `1 - d` is the additive base,
//! the mirror image of the textbook formulation. Scores start at 1.0 and are
//! not normalized to sum to 1; they are relative magnitudes, read against
//! each other or rescaled downstream.
//!
//! Iteration is synchronous (Jacobi): every update reads the previous
//! vector. Nodes are processed in parallel, but each node accumulates its
//! in-edge sum sequentially in a fixed order, so results are bit-identical
//! regardless of thread count.
//!
//! With `decay_exponent = 0` every weight is 1 and the recurrence collapses
//! to degree-normalized classical PageRank (same damping convention).

use rayon::prelude::*;

use crate::citation::CitationGraph;
use crate::graph::CsrGraph;

#[derive(Debug, Clone, PartialEq)]
pub struct RankingParams {
    /// Damping factor `d`; scales the link term.
    pub damping: f64,
    /// Decay exponent `t` in the citation-age discount.
    pub decay_exponent: f64,
    /// Fixed iteration count.
    pub iterations: u32,
    /// Optional early stop: finish once the max score change per iteration
    /// drops below this. `None` always runs the full iteration count.
    pub epsilon: Option<f64>,
}

impl Default for RankingParams {
    fn default() -> Self {
        RankingParams {
            damping: 0.15,
            decay_exponent: 2.5,
            iterations: 30,
            epsilon: None,
        }
    }
}

/// Citation-age discount for an edge from a node published in `citing_year`
/// to a node whose citations peaked in `peak_year`.
pub fn impact_weight(citing_year: i32, peak_year: i32, decay_exponent: f64) -> f64 {
    if citing_year <= peak_year {
        // Citations up to the peak carry full weight. At the peak itself the
        // decay term is ln(e)^t = 1, so folding it into this branch keeps the
        // value exact instead of round-tripping through ln.
        1.0
    } else {
        let age = (citing_year - peak_year) as f64;
        1.0 / (std::f64::consts::E + age).ln().powf(decay_exponent)
    }
}

/// Per-edge weights in out-edge order, plus each node's outgoing total.
#[derive(Debug, Clone, PartialEq)]
pub struct EdgeWeights {
    pub per_edge: Vec<f64>,
    pub node_total: Vec<f64>,
}

impl EdgeWeights {
    /// Packs explicit per-edge weights (venue graphs carry their own) and
    /// sums node totals in out-edge order.
    pub fn from_per_edge(graph: &CsrGraph, per_edge: Vec<f64>) -> EdgeWeights {
        assert_eq!(per_edge.len(), graph.edge_count());
        let node_total = (0..graph.node_count() as u32)
            .map(|u| graph.out_edge_range(u).map(|e| per_edge[e]).sum())
            .collect();
        EdgeWeights {
            per_edge,
            node_total,
        }
    }
}

/// Computes the citation-age weight of every edge in the citation graph.
pub fn citation_edge_weights(cg: &CitationGraph, decay_exponent: f64) -> EdgeWeights {
    let per_edge: Vec<f64> = cg
        .graph
        .edges()
        .map(|(u, v)| impact_weight(cg.year_of[u as usize], cg.peak_of[v as usize], decay_exponent))
        .collect();
    EdgeWeights::from_per_edge(&cg.graph, per_edge)
}

#[derive(Debug, Clone, PartialEq)]
pub struct PageRankResult {
    pub scores: Vec<f64>,
    /// Iterations actually performed (less than requested only when an
    /// epsilon early-stop is configured and reached).
    pub iterations: u32,
}

/// Runs the weighted recurrence over the graph. Nodes whose outgoing weight
/// total is zero (no out-edges, or fully decayed ones rounding to zero)
/// contribute nothing — their score stays at the base term unless others
/// cite them.
pub fn time_weighted_pagerank(
    graph: &CsrGraph,
    weights: &EdgeWeights,
    params: &RankingParams,
) -> PageRankResult {
    let n = graph.node_count();
    let d = params.damping;
    let mut scores = vec![1.0f64; n];
    let mut iterations = 0;

    for _ in 0..params.iterations {
        let prev = &scores;
        let next: Vec<f64> = (0..n as u32)
            .into_par_iter()
            .map(|v| {
                let mut link = 0.0;
                for (u, e) in graph.in_edges(v) {
                    let total = weights.node_total[u as usize];
                    if total > 0.0 {
                        link += weights.per_edge[e] * prev[u as usize] / total;
                    }
                }
                (1.0 - d) + d * link
            })
            .collect();
        iterations += 1;

        let done = params.epsilon.is_some_and(|eps| {
            scores
                .iter()
                .zip(&next)
                .map(|(a, b)| (a - b).abs())
                .fold(0.0f64, f64::max)
                < eps
        });
        scores = next;
        if done {
            break;
        }
    }

    PageRankResult { scores, iterations }
}

/// Degree-normalized classical PageRank under the same damping convention.
/// Baseline for comparisons; equals the weighted variant at decay 0.
pub fn classical_pagerank(graph: &CsrGraph, params: &RankingParams) -> PageRankResult {
    let per_edge = vec![1.0; graph.edge_count()];
    time_weighted_pagerank(graph, &EdgeWeights::from_per_edge(graph, per_edge), params)
}
