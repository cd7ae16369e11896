//! Pairwise-accuracy evaluation and the method-comparison harness.
//!
//! Ground truth is a list of ordered article pairs ("this one matters
//! more"). A ranking's accuracy is the fraction of pairs it orders the same
//! way; equal scores earn half credit by default, which keeps
//! `accuracy(r) + accuracy(reversed r) = 1` exact. Only relative order
//! enters the measure — any strictly monotone rescoring leaves it unchanged.

use std::collections::HashMap;
use std::str::FromStr;

use crate::citation::build_citation_graph;
use crate::ensemble::{compute_method_ranking, EnsembleWeights, Method};
use crate::error::{Error, Result};
use crate::ingest::{ArticleTable, ReferenceList};
use crate::rank::RankingParams;
use crate::scores::RankingVector;
use crate::tsv;

/// Credit for a judged pair whose two articles score equally.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub enum TiePolicy {
    #[default]
    Half,
    Zero,
    Full,
}

impl TiePolicy {
    fn credit(self) -> f64 {
        match self {
            TiePolicy::Half => 0.5,
            TiePolicy::Zero => 0.0,
            TiePolicy::Full => 1.0,
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            TiePolicy::Half => "half",
            TiePolicy::Zero => "zero",
            TiePolicy::Full => "full",
        }
    }
}

impl FromStr for TiePolicy {
    type Err = Error;

    fn from_str(s: &str) -> Result<TiePolicy> {
        match s {
            "half" => Ok(TiePolicy::Half),
            "zero" => Ok(TiePolicy::Zero),
            "full" => Ok(TiePolicy::Full),
            other => Err(Error::config(format!(
                "unknown tie policy {other:?}; expected half, zero, or full"
            ))),
        }
    }
}

/// One expert judgment: `better` should outrank `worse`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct JudgedPair {
    pub better: String,
    pub worse: String,
}

/// Reads `better_id \t worse_id` pairs. Rows that are malformed or compare
/// an article with itself are skipped and counted.
pub fn read_pairs(path: &std::path::Path) -> Result<(Vec<JudgedPair>, u64)> {
    let mut pairs = Vec::new();
    let mut skipped = 0u64;
    for (_line_no, line) in tsv::read_lines(path)? {
        match tsv::split_fields(&line, 2) {
            Some(f) if !f[0].is_empty() && !f[1].is_empty() && f[0] != f[1] => {
                pairs.push(JudgedPair {
                    better: f[0].to_string(),
                    worse: f[1].to_string(),
                });
            }
            _ => skipped += 1,
        }
    }
    Ok((pairs, skipped))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AccuracyReport {
    pub accuracy: f64,
    /// Pairs actually scored.
    pub evaluated: u64,
    /// Pairs dropped because an id is absent from the ranking.
    pub excluded: u64,
}

/// Fraction of judged pairs the ranking orders correctly. Pairs mentioning
/// an article the ranking does not cover are excluded and counted; it is an
/// error if nothing remains.
pub fn pairwise_accuracy(
    ranking: &RankingVector,
    pairs: &[JudgedPair],
    policy: TiePolicy,
) -> Result<AccuracyReport> {
    let scores: HashMap<&str, f64> = ranking.score_map();
    let mut credit = 0.0f64;
    let mut evaluated = 0u64;
    let mut excluded = 0u64;
    for pair in pairs {
        let (b, w) = (
            scores.get(pair.better.as_str()),
            scores.get(pair.worse.as_str()),
        );
        let (Some(&b), Some(&w)) = (b, w) else {
            excluded += 1;
            continue;
        };
        evaluated += 1;
        if b > w {
            credit += 1.0;
        } else if b == w {
            credit += policy.credit();
        }
    }
    if evaluated == 0 {
        return Err(Error::data(
            "no evaluable pairs: every judged pair mentions an unranked article".to_string(),
        ));
    }
    Ok(AccuracyReport {
        accuracy: credit / evaluated as f64,
        evaluated,
        excluded,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct AblationRow {
    pub method: Method,
    pub accuracy: f64,
    pub evaluated: u64,
    pub excluded: u64,
}

/// Evaluates all four methods under identical parameters against one pair
/// set. The citation graph is built once and shared.
pub fn run_ablation(
    table: &ArticleTable,
    refs: &ReferenceList,
    pairs: &[JudgedPair],
    params: &RankingParams,
    weights: &EnsembleWeights,
    policy: TiePolicy,
) -> Result<Vec<AblationRow>> {
    let (cg, _) = build_citation_graph(table, refs);
    Method::ALL
        .iter()
        .map(|&method| {
            let ranking = compute_method_ranking(table, &cg, method, params, weights)?;
            let report = pairwise_accuracy(&ranking, pairs, policy)?;
            Ok(AblationRow {
                method,
                accuracy: report.accuracy,
                evaluated: report.evaluated,
                excluded: report.excluded,
            })
        })
        .collect()
}

/// `method \t accuracy \t pairs_evaluated \t pairs_excluded` per row.
pub fn ablation_tsv(rows: &[AblationRow]) -> String {
    let mut out = String::new();
    for row in rows {
        out.push_str(&format!(
            "{}\t{}\t{}\t{}\n",
            row.method.label(),
            tsv::format_score(row.accuracy),
            row.evaluated,
            row.excluded
        ));
    }
    out
}
