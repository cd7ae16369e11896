//! Scored entity lists and their TSV form.

use std::collections::HashMap;
use std::fmt;
use std::path::Path;

use crate::error::{Error, Result};
use crate::tsv;

/// Which computation produced a ranking.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Provenance {
    /// Classical degree-normalized baseline.
    Pagerank,
    /// Time-weighted citation ranking.
    Citation,
    Venue,
    Author,
    Affiliation,
    Fused,
}

impl Provenance {
    pub fn label(self) -> &'static str {
        match self {
            Provenance::Pagerank => "pagerank",
            Provenance::Citation => "citation",
            Provenance::Venue => "venue",
            Provenance::Author => "author",
            Provenance::Affiliation => "affiliation",
            Provenance::Fused => "fused",
        }
    }
}

impl fmt::Display for Provenance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

/// Entity ids with their scores, tagged by origin. `ids[i]` scores
/// `scores[i]`; order is whatever the producer used (article-table order for
/// article rankings) — the TSV writer sorts, the data itself does not.
#[derive(Debug, Clone, PartialEq)]
pub struct RankingVector {
    pub provenance: Provenance,
    pub ids: Vec<String>,
    pub scores: Vec<f64>,
}

impl RankingVector {
    pub fn new(provenance: Provenance, ids: Vec<String>, scores: Vec<f64>) -> RankingVector {
        assert_eq!(ids.len(), scores.len());
        RankingVector {
            provenance,
            ids,
            scores,
        }
    }

    pub fn len(&self) -> usize {
        self.ids.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ids.is_empty()
    }

    pub fn mean(&self) -> f64 {
        if self.scores.is_empty() {
            return 0.0;
        }
        self.scores.iter().sum::<f64>() / self.scores.len() as f64
    }

    /// Rescales so the mean becomes `target`. Errors on an empty vector or a
    /// non-positive mean — there is no meaningful scale factor then.
    pub fn scale_to_mean(&mut self, target: f64) -> Result<()> {
        let mean = self.mean();
        if !(mean > 0.0) {
            return Err(Error::data(format!(
                "cannot scale {} ranking to mean {target}: current mean is {mean}",
                self.provenance
            )));
        }
        let factor = target / mean;
        for s in &mut self.scores {
            *s *= factor;
        }
        Ok(())
    }

    pub fn score_map(&self) -> HashMap<&str, f64> {
        self.ids
            .iter()
            .map(String::as_str)
            .zip(self.scores.iter().copied())
            .collect()
    }

    /// Serializes as `entity_id \t score`, highest score first (ids break
    /// ties), scores at 12 significant digits.
    pub fn to_tsv(&self) -> String {
        let mut order: Vec<usize> = (0..self.len()).collect();
        order.sort_by(|&a, &b| {
            self.scores[b]
                .total_cmp(&self.scores[a])
                .then_with(|| self.ids[a].cmp(&self.ids[b]))
        });
        let mut out = String::new();
        for i in order {
            out.push_str(&self.ids[i]);
            out.push('\t');
            out.push_str(&tsv::format_score(self.scores[i]));
            out.push('\n');
        }
        out
    }

    pub fn write_tsv(&self, path: &Path) -> Result<()> {
        tsv::write_file(path, &self.to_tsv())
    }

    /// Reads a ranking back from its TSV form. Malformed rows are data
    /// errors — a ranking file is program output, not wild input.
    pub fn read_tsv(path: &Path, provenance: Provenance) -> Result<RankingVector> {
        let mut ids = Vec::new();
        let mut scores = Vec::new();
        for (line_no, line) in tsv::read_lines(path)? {
            let fields = tsv::split_fields(&line, 2).ok_or_else(|| {
                Error::data(format!(
                    "{}:{line_no}: expected `entity_id<TAB>score`",
                    path.display()
                ))
            })?;
            let score: f64 = fields[1].parse().map_err(|_| {
                Error::data(format!(
                    "{}:{line_no}: unparseable score {:?}",
                    path.display(),
                    fields[1]
                ))
            })?;
            ids.push(fields[0].to_string());
            scores.push(score);
        }
        Ok(RankingVector::new(provenance, ids, scores))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn vector(pairs: &[(&str, f64)]) -> RankingVector {
        RankingVector::new(
            Provenance::Citation,
            pairs.iter().map(|(id, _)| id.to_string()).collect(),
            pairs.iter().map(|&(_, s)| s).collect(),
        )
    }

    #[test]
    fn scaling_hits_the_target_mean() {
        let mut r = vector(&[("a", 1.0), ("b", 3.0)]);
        r.scale_to_mean(1.0).unwrap();
        assert!((r.mean() - 1.0).abs() < 1e-12);
        assert_eq!(r.scores, vec![0.5, 1.5]);
    }

    #[test]
    fn scaling_preserves_order() {
        let mut r = vector(&[("a", 0.2), ("b", 5.0), ("c", 1.1)]);
        r.scale_to_mean(1.0).unwrap();
        assert!(r.scores[1] > r.scores[2] && r.scores[2] > r.scores[0]);
    }

    #[test]
    fn scaling_rejects_degenerate_input() {
        let mut empty = vector(&[]);
        assert!(empty.scale_to_mean(1.0).is_err());
        let mut zeros = vector(&[("a", 0.0)]);
        assert!(zeros.scale_to_mean(1.0).is_err());
    }

    #[test]
    fn tsv_sorts_by_score_then_id() {
        let r = vector(&[("b", 1.0), ("a", 1.0), ("c", 2.0)]);
        let text = r.to_tsv();
        let ids: Vec<&str> = text
            .lines()
            .map(|l| l.split('\t').next().unwrap())
            .collect();
        assert_eq!(ids, vec!["c", "a", "b"]);
    }

    #[test]
    fn tsv_round_trips() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("r.tsv");
        let r = vector(&[("a", 0.913750000001), ("b", 0.85)]);
        r.write_tsv(&path).unwrap();
        let back = RankingVector::read_tsv(&path, Provenance::Citation).unwrap();
        assert_eq!(back.ids, vec!["a", "b"]);
        for (x, y) in back.scores.iter().zip(&r.scores) {
            assert!((x - y).abs() < 1e-11);
        }
    }

    #[test]
    fn read_rejects_malformed_rows() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("r.tsv");
        std::fs::write(&path, "a\tnot-a-number\n").unwrap();
        assert!(RankingVector::read_tsv(&path, Provenance::Fused).is_err());
    }
}
