//! Entity ensembles and score fusion.
//!
//! Each ensemble maps every article to a score through one entity type:
//!
//! - citation: the article's own time-weighted rank;
//! - venue: the authority of the venue it appeared in, from a second ranking
//!   run over the venue graph;
//! - author / affiliation: two-level averaging — an entity scores the mean
//!   of its articles' citation ranks, an article the mean of its entities.
//!
//! Articles lacking an entity receive that ensemble's minimum score: a
//! missing venue is treated as publishing in the least reputable one. The
//! ensembles are scaled to a common mean and combined as a weighted average,
//! so the fused score always lies between the smallest and largest of an
//! article's ensemble scores.

use std::collections::HashMap;
use std::str::FromStr;

use crate::citation::CitationGraph;
use crate::error::{Error, Result};
use crate::ingest::{ArticleRecord, ArticleTable};
use crate::rank::{
    citation_edge_weights, classical_pagerank, time_weighted_pagerank, RankingParams,
};
use crate::scores::{Provenance, RankingVector};
use crate::venue::{build_venue_graph, VenueGraph};

/// Relative weight of each non-citation ensemble in the fused score. The
/// citation ensemble always has implicit weight 1.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnsembleWeights {
    /// Venue ensemble weight.
    pub alpha: f64,
    /// Author ensemble weight.
    pub beta: f64,
    /// Affiliation ensemble weight; only used when that ensemble is enabled.
    pub gamma: f64,
}

impl Default for EnsembleWeights {
    fn default() -> Self {
        EnsembleWeights {
            alpha: 1.2,
            beta: 0.3,
            gamma: 0.3,
        }
    }
}

impl EnsembleWeights {
    pub fn validate(&self) -> Result<()> {
        for (name, v) in [("alpha", self.alpha), ("beta", self.beta), ("gamma", self.gamma)] {
            if !v.is_finite() || v < 0.0 {
                return Err(Error::config(format!(
                    "ensemble weight {name} must be a non-negative number, got {v}"
                )));
            }
        }
        Ok(())
    }
}

/// Common mean every ensemble is rescaled to before fusion. The fused order
/// is invariant to this constant; 1 keeps the numbers readable.
pub const TARGET_MEAN: f64 = 1.0;

/// Value given to every article when an ensemble has no data at all (no
/// article carries the entity). The constant is arbitrary: mean-scaling maps
/// a constant vector to all-ones regardless.
const DEGENERATE_SCORE: f64 = 1.0;

/// The time-weighted rank of each article, as a tagged ranking.
pub fn citation_ensemble(
    table: &ArticleTable,
    cg: &CitationGraph,
    params: &RankingParams,
) -> RankingVector {
    let weights = citation_edge_weights(cg, params.decay_exponent);
    let result = time_weighted_pagerank(&cg.graph, &weights, params);
    RankingVector::new(Provenance::Citation, article_ids(table), result.scores)
}

/// Ranks venues over the venue graph (its weights already carry the article
/// -level decay; none is re-applied) and assigns each article its venue's
/// authority. Articles without a venue get the minimum venue authority.
pub fn venue_ensemble(
    vg: &VenueGraph,
    table: &ArticleTable,
    params: &RankingParams,
) -> RankingVector {
    let authority = time_weighted_pagerank(&vg.graph, &vg.weights, params).scores;
    let floor = authority
        .iter()
        .copied()
        .fold(f64::INFINITY, f64::min);
    let floor = if floor.is_finite() { floor } else { DEGENERATE_SCORE };
    let scores = vg
        .article_venue
        .iter()
        .map(|v| match v {
            Some(idx) => authority[*idx as usize],
            None => floor,
        })
        .collect();
    RankingVector::new(Provenance::Venue, article_ids(table), scores)
}

/// Two-level averaging over authors; see [`two_level_average`].
pub fn author_ensemble(citation: &RankingVector, table: &ArticleTable) -> RankingVector {
    two_level_average(citation, table, Provenance::Author, |a| &a.author_ids)
}

/// Two-level averaging over affiliations. Same construction as the author
/// ensemble; disabled by default at the pipeline level.
pub fn affiliation_ensemble(citation: &RankingVector, table: &ArticleTable) -> RankingVector {
    two_level_average(citation, table, Provenance::Affiliation, |a| {
        &a.affiliation_ids
    })
}

/// entity_score = mean citation score of the entity's articles;
/// article_score = mean over the article's entities. Articles without the
/// entity get the minimum article score of this ensemble.
fn two_level_average(
    citation: &RankingVector,
    table: &ArticleTable,
    provenance: Provenance,
    select: impl Fn(&ArticleRecord) -> &[String],
) -> RankingVector {
    assert_eq!(citation.len(), table.len());

    let mut totals: HashMap<&str, (f64, u32)> = HashMap::new();
    for (i, article) in table.iter().enumerate() {
        for id in select(article) {
            let slot = totals.entry(id.as_str()).or_insert((0.0, 0));
            slot.0 += citation.scores[i];
            slot.1 += 1;
        }
    }

    let mut scores = vec![f64::NAN; table.len()];
    let mut floor = f64::INFINITY;
    for (i, article) in table.iter().enumerate() {
        let entities = select(article);
        if entities.is_empty() {
            continue;
        }
        let mut sum = 0.0;
        for id in entities {
            let (total, count) = totals[id.as_str()];
            sum += total / count as f64;
        }
        let value = sum / entities.len() as f64;
        scores[i] = value;
        floor = floor.min(value);
    }

    let floor = if floor.is_finite() { floor } else { DEGENERATE_SCORE };
    for s in &mut scores {
        if s.is_nan() {
            *s = floor;
        }
    }
    RankingVector::new(provenance, article_ids(table), scores)
}

/// Rescales every ranking to the same mean. Relative order within each
/// ranking is untouched; only the cross-ranking magnitudes align.
pub fn scale_to_common_mean(
    rankings: &mut [&mut RankingVector],
    target_mean: f64,
) -> Result<()> {
    for r in rankings {
        r.scale_to_mean(target_mean)?;
    }
    Ok(())
}

/// Weighted average of one article's ensemble scores.
pub fn fuse_score(c: f64, v: f64, a: f64, w: &EnsembleWeights) -> f64 {
    (c + w.alpha * v + w.beta * a) / (1.0 + w.alpha + w.beta)
}

/// As [`fuse_score`], with the affiliation ensemble folded in.
pub fn fuse_score_all(c: f64, v: f64, a: f64, f: f64, w: &EnsembleWeights) -> f64 {
    (c + w.alpha * v + w.beta * a + w.gamma * f) / (1.0 + w.alpha + w.beta + w.gamma)
}

/// Fuses per-article ensemble rankings. All inputs must cover the same
/// articles in the same order.
pub fn fuse(
    citation: &RankingVector,
    venue: &RankingVector,
    author: &RankingVector,
    affiliation: Option<&RankingVector>,
    weights: &EnsembleWeights,
) -> Result<RankingVector> {
    let mut inputs = vec![venue, author];
    inputs.extend(affiliation);
    for other in inputs {
        if other.ids != citation.ids {
            return Err(Error::data(format!(
                "cannot fuse {} and {} rankings: they cover different article sets",
                citation.provenance, other.provenance
            )));
        }
    }
    let scores = (0..citation.len())
        .map(|i| {
            let (c, v, a) = (citation.scores[i], venue.scores[i], author.scores[i]);
            match affiliation {
                Some(f) => fuse_score_all(c, v, a, f.scores[i], weights),
                None => fuse_score(c, v, a, weights),
            }
        })
        .collect();
    Ok(RankingVector::new(
        Provenance::Fused,
        citation.ids.clone(),
        scores,
    ))
}

/// All fusion inputs (already scaled to the common mean) plus the fused
/// result.
#[derive(Debug, Clone)]
pub struct EnsembleBundle {
    pub citation: RankingVector,
    pub venue: RankingVector,
    pub author: RankingVector,
    pub affiliation: Option<RankingVector>,
    pub fused: RankingVector,
}

/// Builds, scales, and fuses the ensembles for one dataset. With
/// `include_affiliation` the fused ranking also averages the affiliation
/// ensemble in (the "-all" variant); otherwise three ensembles fuse.
pub fn compute_ensembles(
    table: &ArticleTable,
    cg: &CitationGraph,
    params: &RankingParams,
    weights: &EnsembleWeights,
    include_affiliation: bool,
) -> Result<EnsembleBundle> {
    if table.is_empty() {
        let empty = |p| RankingVector::new(p, Vec::new(), Vec::new());
        return Ok(EnsembleBundle {
            citation: empty(Provenance::Citation),
            venue: empty(Provenance::Venue),
            author: empty(Provenance::Author),
            affiliation: include_affiliation.then(|| empty(Provenance::Affiliation)),
            fused: empty(Provenance::Fused),
        });
    }

    let article_weights = citation_edge_weights(cg, params.decay_exponent);
    let citation_result = time_weighted_pagerank(&cg.graph, &article_weights, params);
    let mut citation =
        RankingVector::new(Provenance::Citation, article_ids(table), citation_result.scores);

    let vg = build_venue_graph(table, cg, &article_weights);
    let mut venue = venue_ensemble(&vg, table, params);
    let mut author = author_ensemble(&citation, table);
    let mut affiliation = include_affiliation.then(|| affiliation_ensemble(&citation, table));

    {
        let mut to_scale: Vec<&mut RankingVector> = vec![&mut citation, &mut venue, &mut author];
        if let Some(f) = affiliation.as_mut() {
            to_scale.push(f);
        }
        scale_to_common_mean(&mut to_scale, TARGET_MEAN)?;
    }

    let fused = fuse(&citation, &venue, &author, affiliation.as_ref(), weights)?;
    Ok(EnsembleBundle {
        citation,
        venue,
        author,
        affiliation,
        fused,
    })
}

/// The four ranking methods the comparison harness covers.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    /// Classical PageRank over the citation graph.
    Pr,
    /// Time-weighted PageRank over the citation graph.
    Wpr,
    /// Fused citation + venue + author ensembles.
    Ewpr,
    /// As Ewpr, plus the affiliation ensemble.
    EwprAll,
}

impl Method {
    pub const ALL: [Method; 4] = [Method::Pr, Method::Wpr, Method::Ewpr, Method::EwprAll];

    pub fn label(self) -> &'static str {
        match self {
            Method::Pr => "pr",
            Method::Wpr => "wpr",
            Method::Ewpr => "ewpr",
            Method::EwprAll => "ewpr-all",
        }
    }
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Method> {
        match s {
            "pr" => Ok(Method::Pr),
            "wpr" => Ok(Method::Wpr),
            "ewpr" => Ok(Method::Ewpr),
            "ewpr-all" => Ok(Method::EwprAll),
            other => Err(Error::config(format!(
                "unknown method {other:?}; expected pr, wpr, ewpr, or ewpr-all"
            ))),
        }
    }
}

/// Computes one method's article ranking.
pub fn compute_method_ranking(
    table: &ArticleTable,
    cg: &CitationGraph,
    method: Method,
    params: &RankingParams,
    weights: &EnsembleWeights,
) -> Result<RankingVector> {
    match method {
        Method::Pr => {
            let result = classical_pagerank(&cg.graph, params);
            Ok(RankingVector::new(
                Provenance::Pagerank,
                article_ids(table),
                result.scores,
            ))
        }
        Method::Wpr => Ok(citation_ensemble(table, cg, params)),
        Method::Ewpr => Ok(compute_ensembles(table, cg, params, weights, false)?.fused),
        Method::EwprAll => Ok(compute_ensembles(table, cg, params, weights, true)?.fused),
    }
}

fn article_ids(table: &ArticleTable) -> Vec<String> {
    table.iter().map(|a| a.article_id.clone()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::citation::build_citation_graph;
    use crate::ingest::ArticleRecord;
    use proptest::prelude::*;

    fn article(id: &str, year: i32, venue: Option<&str>, authors: &[&str]) -> ArticleRecord {
        ArticleRecord {
            article_id: id.to_string(),
            year,
            venue_id: venue.map(str::to_string),
            title: None,
            author_ids: authors.iter().map(|s| s.to_string()).collect(),
            affiliation_ids: Vec::new(),
            fos_ids: Vec::new(),
        }
    }

    fn ranking(table: &ArticleTable, scores: Vec<f64>) -> RankingVector {
        RankingVector::new(Provenance::Citation, article_ids(table), scores)
    }

    #[test]
    fn citation_ensemble_on_edge_free_graph_is_base_score() {
        let table = ArticleTable::from_records(vec![
            article("p1", 2000, None, &[]),
            article("p2", 2001, None, &[]),
        ]);
        let (cg, _) = build_citation_graph(&table, &Vec::new());
        let r = citation_ensemble(&table, &cg, &RankingParams::default());
        assert_eq!(r.scores, vec![0.85, 0.85]);
    }

    #[test]
    fn single_venue_gives_uniform_venue_scores() {
        let table = ArticleTable::from_records(vec![
            article("p1", 2000, Some("v"), &[]),
            article("p2", 2001, Some("v"), &[]),
        ]);
        let refs = vec![("p2".to_string(), "p1".to_string())];
        let (cg, _) = build_citation_graph(&table, &refs);
        let params = RankingParams::default();
        let w = citation_edge_weights(&cg, params.decay_exponent);
        let vg = build_venue_graph(&table, &cg, &w);
        let r = venue_ensemble(&vg, &table, &params);
        // One venue with a self-edge: (1-d) + d * its own score converges to 1.
        assert!((r.scores[0] - r.scores[1]).abs() < 1e-15);
    }

    #[test]
    fn cited_venue_outranks_citing_venue() {
        let table = ArticleTable::from_records(vec![
            article("s1", 2005, Some("S"), &[]),
            article("t1", 2000, Some("T"), &[]),
        ]);
        let refs = vec![("s1".to_string(), "t1".to_string())];
        let (cg, _) = build_citation_graph(&table, &refs);
        let params = RankingParams::default();
        let w = citation_edge_weights(&cg, params.decay_exponent);
        let vg = build_venue_graph(&table, &cg, &w);
        let r = venue_ensemble(&vg, &table, &params);
        assert!(r.scores[1] > r.scores[0]);
    }

    #[test]
    fn missing_venue_gets_minimum_authority() {
        let table = ArticleTable::from_records(vec![
            article("s1", 2005, Some("S"), &[]),
            article("t1", 2000, Some("T"), &[]),
            article("x1", 2010, None, &[]),
        ]);
        let refs = vec![("s1".to_string(), "t1".to_string())];
        let (cg, _) = build_citation_graph(&table, &refs);
        let params = RankingParams::default();
        let w = citation_edge_weights(&cg, params.decay_exponent);
        let vg = build_venue_graph(&table, &cg, &w);
        let r = venue_ensemble(&vg, &table, &params);
        let min = r.scores[0].min(r.scores[1]);
        assert_eq!(r.scores[2], min);
    }

    #[test]
    fn author_averaging_matches_hand_computation() {
        let table = ArticleTable::from_records(vec![
            article("p1", 2000, None, &["a1"]),
            article("p2", 2000, None, &["a2"]),
            article("p3", 2000, None, &["a1", "a2"]),
            article("p4", 2000, None, &[]),
        ]);
        let citation = ranking(&table, vec![3.0, 1.0, 2.0, 9.0]);
        let r = author_ensemble(&citation, &table);
        // a1 = mean(3,2) = 2.5; a2 = mean(1,2) = 1.5.
        assert_eq!(r.scores[0], 2.5);
        assert_eq!(r.scores[1], 1.5);
        assert_eq!(r.scores[2], 2.0);
        // p4 has no authors: floor of the ensemble, not its own citation score.
        assert_eq!(r.scores[3], 1.5);
    }

    #[test]
    fn one_article_per_author_reduces_to_citation_scores() {
        let table = ArticleTable::from_records(vec![
            article("p1", 2000, None, &["a1"]),
            article("p2", 2000, None, &["a2"]),
            article("p3", 2000, None, &["a3"]),
        ]);
        let citation = ranking(&table, vec![0.4, 2.0, 1.1]);
        let r = author_ensemble(&citation, &table);
        assert_eq!(r.scores, citation.scores);
    }

    #[test]
    fn fuse_known_values() {
        let w = EnsembleWeights::default();
        assert!((fuse_score(1.0, 2.0, 3.0, &w) - 1.72).abs() < 1e-12);
        assert!((fuse_score(0.7, 0.7, 0.7, &w) - 0.7).abs() < 1e-15);
        let collapsed = EnsembleWeights {
            alpha: 0.0,
            beta: 0.0,
            gamma: 0.0,
        };
        assert_eq!(fuse_score(1.3, 9.0, 9.0, &collapsed), 1.3);
    }

    #[test]
    fn fuse_rejects_mismatched_article_sets() {
        let table = ArticleTable::from_records(vec![article("p1", 2000, None, &[])]);
        let other = ArticleTable::from_records(vec![article("q1", 2000, None, &[])]);
        let c = ranking(&table, vec![1.0]);
        let v = ranking(&other, vec![1.0]);
        let a = ranking(&table, vec![1.0]);
        assert!(fuse(&c, &v, &a, None, &EnsembleWeights::default()).is_err());
    }

    #[test]
    fn empty_table_produces_empty_bundle() {
        let table = ArticleTable::default();
        let (cg, _) = build_citation_graph(&table, &Vec::new());
        let bundle = compute_ensembles(
            &table,
            &cg,
            &RankingParams::default(),
            &EnsembleWeights::default(),
            false,
        )
        .unwrap();
        assert!(bundle.fused.is_empty());
    }

    #[test]
    fn bundle_means_align_before_fusion() {
        let table = ArticleTable::from_records(vec![
            article("p1", 2000, Some("v1"), &["a1"]),
            article("p2", 2004, Some("v2"), &["a2"]),
            article("p3", 2006, Some("v1"), &["a1", "a2"]),
        ]);
        let refs = vec![
            ("p2".to_string(), "p1".to_string()),
            ("p3".to_string(), "p1".to_string()),
            ("p3".to_string(), "p2".to_string()),
        ];
        let (cg, _) = build_citation_graph(&table, &refs);
        let bundle = compute_ensembles(
            &table,
            &cg,
            &RankingParams::default(),
            &EnsembleWeights::default(),
            true,
        )
        .unwrap();
        for r in [
            &bundle.citation,
            &bundle.venue,
            &bundle.author,
            bundle.affiliation.as_ref().unwrap(),
        ] {
            assert!(
                ((r.mean() - TARGET_MEAN) / TARGET_MEAN).abs() < 1e-9,
                "{} mean {}",
                r.provenance,
                r.mean()
            );
        }
    }

    #[test]
    fn method_labels_round_trip() {
        for m in Method::ALL {
            assert_eq!(m.label().parse::<Method>().unwrap(), m);
        }
        assert!("mutualrank".parse::<Method>().is_err());
    }

    proptest! {
        #[test]
        fn fused_score_is_convex_combination(
            c in 0.0f64..10.0,
            v in 0.0f64..10.0,
            a in 0.0f64..10.0,
            alpha in 0.0f64..5.0,
            beta in 0.0f64..5.0,
        ) {
            let w = EnsembleWeights { alpha, beta, gamma: 0.0 };
            let fused = fuse_score(c, v, a, &w);
            let lo = c.min(v).min(a);
            let hi = c.max(v).max(a);
            prop_assert!(fused >= lo - 1e-12 && fused <= hi + 1e-12);
        }
    }
}
