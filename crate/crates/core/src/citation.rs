//! Article-level citation graph with per-node citation timelines.
//!
//! A node's *peak time* is the year it drew the most citations — the moment
//! its influence crested. Later citations are discounted relative to that
//! crest by the decay in [`crate::rank`]. Nodes nobody cites peak at their
//! publication year, so a fresh citation is never treated as late.

use std::collections::BTreeMap;
use std::fmt;

use crate::graph::CsrGraph;
use crate::ingest::{ArticleTable, ReferenceList};

/// Citation graph over the dense article index, plus the per-node timing
/// data the ranking weights are derived from.
#[derive(Debug, Clone)]
pub struct CitationGraph {
    pub graph: CsrGraph,
    /// Publication year per node.
    pub year_of: Vec<i32>,
    /// Citations received per year, per node.
    pub citation_year_hist: Vec<BTreeMap<i32, u32>>,
    /// Year of maximum citations; ties break to the earliest year, and
    /// uncited nodes fall back to their publication year.
    pub peak_of: Vec<i32>,
}

/// What was dropped while turning raw reference pairs into graph edges.
#[derive(Debug, Default, Clone, Copy, PartialEq, Eq)]
pub struct CitationBuildReport {
    /// Pairs with an endpoint that is not in the article table.
    pub unresolved: u64,
    pub self_loops: u64,
    pub duplicates: u64,
}

impl fmt::Display for CitationBuildReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "references unresolved {} / self-loops {} / duplicates {}",
            self.unresolved, self.self_loops, self.duplicates
        )
    }
}

/// Resolves raw reference pairs against the table and assembles the graph.
/// Unresolvable pairs, self-loops, and duplicate edges are removed, counted,
/// and never fatal.
pub fn build_citation_graph(
    table: &ArticleTable,
    refs: &ReferenceList,
) -> (CitationGraph, CitationBuildReport) {
    let mut report = CitationBuildReport::default();
    let mut edges: Vec<(u32, u32)> = Vec::with_capacity(refs.len());
    for (citing, cited) in refs {
        match (table.index_of(citing), table.index_of(cited)) {
            (Some(u), Some(v)) if u == v => report.self_loops += 1,
            (Some(u), Some(v)) => edges.push((u, v)),
            _ => report.unresolved += 1,
        }
    }
    edges.sort_unstable();
    let before = edges.len();
    edges.dedup();
    report.duplicates = (before - edges.len()) as u64;

    let year_of: Vec<i32> = table.iter().map(|a| a.year).collect();
    let graph = CsrGraph::from_edges(table.len(), edges);

    let mut citation_year_hist: Vec<BTreeMap<i32, u32>> = vec![BTreeMap::new(); table.len()];
    for (u, v) in graph.edges() {
        *citation_year_hist[v as usize]
            .entry(year_of[u as usize])
            .or_insert(0) += 1;
    }

    let peak_of = citation_year_hist
        .iter()
        .zip(&year_of)
        .map(|(hist, &pub_year)| peak_year(hist).unwrap_or(pub_year))
        .collect();

    (
        CitationGraph {
            graph,
            year_of,
            citation_year_hist,
            peak_of,
        },
        report,
    )
}

/// Year with the highest citation count; the earliest such year on ties.
/// `None` for an empty histogram.
fn peak_year(hist: &BTreeMap<i32, u32>) -> Option<i32> {
    let mut best: Option<(i32, u32)> = None;
    for (&year, &count) in hist {
        // Keys ascend, so a strict comparison keeps the earliest of equals.
        match best {
            Some((_, c)) if count <= c => {}
            _ => best = Some((year, count)),
        }
    }
    best.map(|(year, _)| year)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ingest::ArticleRecord;

    fn article(id: &str, year: i32) -> ArticleRecord {
        ArticleRecord {
            article_id: id.to_string(),
            year,
            venue_id: None,
            title: None,
            author_ids: Vec::new(),
            affiliation_ids: Vec::new(),
            fos_ids: Vec::new(),
        }
    }

    fn table(years: &[(&str, i32)]) -> ArticleTable {
        ArticleTable::from_records(years.iter().map(|&(id, y)| article(id, y)).collect())
    }

    fn pairs(list: &[(&str, &str)]) -> ReferenceList {
        list.iter()
            .map(|&(a, b)| (a.to_string(), b.to_string()))
            .collect()
    }

    #[test]
    fn peak_is_year_of_most_citations() {
        // target cited twice from 2001, once from 2005
        let t = table(&[("t", 1998), ("a", 2001), ("b", 2001), ("c", 2005)]);
        let refs = pairs(&[("a", "t"), ("b", "t"), ("c", "t")]);
        let (cg, _) = build_citation_graph(&t, &refs);
        assert_eq!(cg.peak_of[0], 2001);
    }

    #[test]
    fn peak_tie_breaks_to_earliest_year() {
        let t = table(&[("t", 2000), ("a", 2003), ("b", 2004)]);
        let refs = pairs(&[("a", "t"), ("b", "t")]);
        let (cg, _) = build_citation_graph(&t, &refs);
        assert_eq!(cg.peak_of[0], 2003);
    }

    #[test]
    fn uncited_node_peaks_at_publication_year() {
        let t = table(&[("only", 1999)]);
        let (cg, _) = build_citation_graph(&t, &pairs(&[]));
        assert_eq!(cg.peak_of[0], 1999);
        assert!(cg.citation_year_hist[0].is_empty());
    }

    #[test]
    fn cleanup_counts_dropped_pairs() {
        let t = table(&[("a", 2000), ("b", 2001)]);
        let refs = pairs(&[
            ("a", "b"),
            ("a", "b"), // duplicate
            ("a", "a"), // self-loop
            ("a", "zz"), // unknown target
            ("zz", "b"), // unknown source
        ]);
        let (cg, report) = build_citation_graph(&t, &refs);
        assert_eq!(cg.graph.edge_count(), 1);
        assert_eq!(
            report,
            CitationBuildReport {
                unresolved: 2,
                self_loops: 1,
                duplicates: 1
            }
        );
    }

    #[test]
    fn histogram_mass_equals_edge_count() {
        let t = table(&[("a", 2000), ("b", 2001), ("c", 2002), ("d", 2003)]);
        let refs = pairs(&[("b", "a"), ("c", "a"), ("d", "a"), ("c", "b"), ("d", "c")]);
        let (cg, _) = build_citation_graph(&t, &refs);
        let mass: u32 = cg
            .citation_year_hist
            .iter()
            .flat_map(|h| h.values())
            .sum();
        assert_eq!(mass as usize, cg.graph.edge_count());
    }
}
