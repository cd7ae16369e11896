//! Venue record linkage: attach external venue names to internal venues.
//!
//! External article records arrive with free-text venue names. Linking runs
//! in two tiers: a high-confidence name match (Jaro similarity against every
//! internal venue name, best must clear `lambda`), then a topic-gated retry
//! for the rest (only venues sharing enough fields of study are considered,
//! and a lower name bar `phi` applies). Both names are normalized with the
//! same rule set before comparison.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::ingest::ArticleTable;
use crate::tsv;

/// Token classes stripped from venue names before comparison. Both lists are
/// configurable; the defaults cover the usual proceedings boilerplate.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NormalizeRules {
    pub stop_words: Vec<String>,
    pub common_words: Vec<String>,
}

impl Default for NormalizeRules {
    fn default() -> Self {
        let words = |list: &[&str]| list.iter().map(|s| s.to_string()).collect();
        NormalizeRules {
            stop_words: words(&["on", "the", "of", "in", "for", "and"]),
            common_words: words(&[
                "conference",
                "international",
                "proceedings",
                "workshop",
                "annual",
                "symposium",
            ]),
        }
    }
}

/// Lowercases, strips punctuation, and drops stop words, boilerplate words,
/// 4-digit years, and ordinals ("9th"). Idempotent; may return "".
pub fn normalize_venue_name(raw: &str, rules: &NormalizeRules) -> String {
    let lowered = raw.to_lowercase();
    let spaced: String = lowered
        .chars()
        .map(|c| if c.is_alphanumeric() { c } else { ' ' })
        .collect();
    spaced
        .split_whitespace()
        .filter(|tok| !rules.stop_words.iter().any(|w| w == tok))
        .filter(|tok| !rules.common_words.iter().any(|w| w == tok))
        .filter(|tok| !is_year(tok))
        .filter(|tok| !is_ordinal(tok))
        .collect::<Vec<_>>()
        .join(" ")
}

fn is_year(tok: &str) -> bool {
    tok.len() == 4 && tok.chars().all(|c| c.is_ascii_digit())
}

fn is_ordinal(tok: &str) -> bool {
    ["st", "nd", "rd", "th"].iter().any(|suffix| {
        tok.strip_suffix(suffix)
            .is_some_and(|rest| !rest.is_empty() && rest.chars().all(|c| c.is_ascii_digit()))
    })
}

/// Standard Jaro similarity over characters: matches within a window of
/// ⌊max(|a|,|b|)/2⌋−1, transpositions from the order of matched characters.
pub fn jaro_similarity(a: &str, b: &str) -> f64 {
    if a == b {
        return 1.0;
    }
    let a: Vec<char> = a.chars().collect();
    let b: Vec<char> = b.chars().collect();
    if a.is_empty() || b.is_empty() {
        return 0.0;
    }
    let window = (a.len().max(b.len()) / 2).saturating_sub(1);

    let mut b_taken = vec![false; b.len()];
    let mut a_matched = vec![false; a.len()];
    let mut matches = 0usize;
    for (i, &ca) in a.iter().enumerate() {
        let lo = i.saturating_sub(window);
        let hi = (i + window + 1).min(b.len());
        for j in lo..hi {
            if !b_taken[j] && b[j] == ca {
                b_taken[j] = true;
                a_matched[i] = true;
                matches += 1;
                break;
            }
        }
    }
    if matches == 0 {
        return 0.0;
    }

    let matched_b: Vec<char> = b
        .iter()
        .zip(&b_taken)
        .filter(|(_, &taken)| taken)
        .map(|(&c, _)| c)
        .collect();
    let mut misplaced = 0usize;
    let mut k = 0usize;
    for (i, &ca) in a.iter().enumerate() {
        if a_matched[i] {
            if matched_b[k] != ca {
                misplaced += 1;
            }
            k += 1;
        }
    }
    let transpositions = misplaced as f64 / 2.0;
    let m = matches as f64;
    (m / a.len() as f64 + m / b.len() as f64 + (m - transpositions) / m) / 3.0
}

/// Topic affinity of two FOS sets: |intersection| / sqrt(|F_s|·|F_t|).
/// Zero when either set is empty — no topical evidence, no support.
pub fn topic_similarity(fs: &BTreeSet<String>, ft: &BTreeSet<String>) -> f64 {
    if fs.is_empty() || ft.is_empty() {
        return 0.0;
    }
    let shared = fs.intersection(ft).count() as f64;
    shared / ((fs.len() as f64) * (ft.len() as f64)).sqrt()
}

/// Each venue's FOS set is the union over its articles' FOS ids. Every venue
/// known to the table gets an entry, empty when no article contributes.
pub fn venue_fos_sets(table: &ArticleTable) -> BTreeMap<String, BTreeSet<String>> {
    let mut sets: BTreeMap<String, BTreeSet<String>> = BTreeMap::new();
    for id in table.venue_names().keys() {
        sets.entry(id.clone()).or_default();
    }
    for article in table.iter() {
        if let Some(venue) = &article.venue_id {
            let set = sets.entry(venue.clone()).or_default();
            set.extend(article.fos_ids.iter().cloned());
        }
    }
    sets
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinkingThresholds {
    /// Tier-1 name-similarity bar.
    pub lambda: f64,
    /// Tier-2 topic-similarity gate.
    pub theta: f64,
    /// Tier-2 name-similarity bar.
    pub phi: f64,
}

impl Default for LinkingThresholds {
    fn default() -> Self {
        LinkingThresholds {
            lambda: 0.95,
            theta: 0.5,
            phi: 0.7,
        }
    }
}

impl LinkingThresholds {
    pub fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("lambda", self.lambda),
            ("theta", self.theta),
            ("phi", self.phi),
        ] {
            if !v.is_finite() || !(0.0..=1.0).contains(&v) {
                // lambda deliberately escapes the range check upward: a value
                // above 1 is the documented way to switch Tier 1 off.
                if !(name == "lambda" && v.is_finite() && v > 1.0) {
                    return Err(Error::config(format!(
                        "linking threshold {name} must lie in [0,1], got {v}"
                    )));
                }
            }
        }
        if self.phi > self.lambda {
            return Err(Error::config(format!(
                "phi ({}) must not exceed lambda ({}); the second tier would outrank the first",
                self.phi, self.lambda
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LinkRule {
    NameOnly,
    TopicThenName,
    Unmatched,
}

impl fmt::Display for LinkRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            LinkRule::NameOnly => "name_only",
            LinkRule::TopicThenName => "topic_then_name",
            LinkRule::Unmatched => "unmatched",
        })
    }
}

/// Outcome of linking one external name. For matches, `name_sim` (and
/// `topic_sim` for tier 2) refer to the matched venue, so the rule's
/// threshold conjunction is directly checkable from the stored values.
#[derive(Debug, Clone, PartialEq)]
pub struct LinkDecision {
    pub external_name: String,
    pub matched_venue: Option<String>,
    pub rule: LinkRule,
    pub name_sim: f64,
    pub topic_sim: Option<f64>,
}

/// An internal venue prepared for linking: id, normalized display name, and
/// aggregated FOS set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InternalVenue {
    pub venue_id: String,
    pub normalized_name: String,
    pub fos: BTreeSet<String>,
}

/// Collects every venue the table knows about (from articles and from the
/// venue-name listing), sorted by id, names pre-normalized.
pub fn internal_venues(table: &ArticleTable, rules: &NormalizeRules) -> Vec<InternalVenue> {
    let mut fos_sets = venue_fos_sets(table);
    let mut ids: BTreeSet<String> = table.venue_ids();
    ids.extend(table.venue_names().keys().cloned());
    ids.into_iter()
        .map(|id| {
            let fos = fos_sets.remove(&id).unwrap_or_default();
            let normalized_name = normalize_venue_name(table.venue_name(&id), rules);
            InternalVenue {
                venue_id: id,
                normalized_name,
                fos,
            }
        })
        .collect()
}

/// Links one normalized external name against the internal venues.
///
/// Tier 1 takes the best Jaro over all venues when it reaches `lambda`.
/// Tier 2 re-runs the search over venues with topic similarity at least
/// `theta` and accepts the best at `phi`. Equal similarities resolve to the
/// smallest venue id, which iteration order provides for free: `venues` is
/// sorted by id and only a strictly better score displaces the incumbent.
pub fn link_venue(
    external_name: &str,
    external_fos: &BTreeSet<String>,
    venues: &[InternalVenue],
    thresholds: &LinkingThresholds,
) -> LinkDecision {
    debug_assert!(venues.windows(2).all(|w| w[0].venue_id < w[1].venue_id));

    let mut best: Option<(f64, usize)> = None;
    for (i, venue) in venues.iter().enumerate() {
        let sim = jaro_similarity(external_name, &venue.normalized_name);
        if best.is_none_or(|(s, _)| sim > s) {
            best = Some((sim, i));
        }
    }
    let (best_sim, best_idx) = match best {
        Some(b) => b,
        None => {
            return LinkDecision {
                external_name: external_name.to_string(),
                matched_venue: None,
                rule: LinkRule::Unmatched,
                name_sim: 0.0,
                topic_sim: None,
            }
        }
    };

    if best_sim >= thresholds.lambda {
        return LinkDecision {
            external_name: external_name.to_string(),
            matched_venue: Some(venues[best_idx].venue_id.clone()),
            rule: LinkRule::NameOnly,
            name_sim: best_sim,
            topic_sim: None,
        };
    }

    let mut candidate: Option<(f64, f64, usize)> = None;
    for (i, venue) in venues.iter().enumerate() {
        let ts = topic_similarity(external_fos, &venue.fos);
        if ts < thresholds.theta {
            continue;
        }
        let sim = jaro_similarity(external_name, &venue.normalized_name);
        if candidate.is_none_or(|(s, _, _)| sim > s) {
            candidate = Some((sim, ts, i));
        }
    }
    if let Some((sim, ts, i)) = candidate {
        if sim >= thresholds.phi {
            return LinkDecision {
                external_name: external_name.to_string(),
                matched_venue: Some(venues[i].venue_id.clone()),
                rule: LinkRule::TopicThenName,
                name_sim: sim,
                topic_sim: Some(ts),
            };
        }
    }

    LinkDecision {
        external_name: external_name.to_string(),
        matched_venue: None,
        rule: LinkRule::Unmatched,
        name_sim: best_sim,
        topic_sim: None,
    }
}

/// One row of the external data file.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExternalRecord {
    pub title: String,
    pub year: i32,
    pub raw_venue_name: String,
    pub fos_ids: BTreeSet<String>,
}

/// Reads the external TSV (`title, year, raw_venue_name, comma-separated fos
/// ids`). Malformed rows are skipped; the count comes back with the records.
pub fn read_external_records(path: &std::path::Path) -> Result<(Vec<ExternalRecord>, u64)> {
    let mut records = Vec::new();
    let mut skipped = 0u64;
    for (_line_no, line) in tsv::read_lines(path)? {
        let Some(fields) = tsv::split_fields(&line, 4) else {
            skipped += 1;
            continue;
        };
        let Ok(year) = fields[1].parse::<i32>() else {
            skipped += 1;
            continue;
        };
        let fos_ids = fields[3]
            .split(',')
            .filter(|s| !s.is_empty())
            .map(str::to_string)
            .collect();
        records.push(ExternalRecord {
            title: fields[0].to_string(),
            year,
            raw_venue_name: fields[2].to_string(),
            fos_ids,
        });
    }
    Ok((records, skipped))
}

/// Links every external record. Decisions come back in record order; the
/// per-record work is independent and runs in parallel.
pub fn link_all(
    records: &[ExternalRecord],
    venues: &[InternalVenue],
    thresholds: &LinkingThresholds,
    rules: &NormalizeRules,
) -> Vec<LinkDecision> {
    records
        .par_iter()
        .map(|rec| {
            let name = normalize_venue_name(&rec.raw_venue_name, rules);
            link_venue(&name, &rec.fos_ids, venues, thresholds)
        })
        .collect()
}

/// Per-rule tallies plus enrichment outcomes.
#[derive(Debug, Default, Clone, PartialEq, Eq)]
pub struct LinkingReport {
    pub name_only: u64,
    pub topic_then_name: u64,
    pub unmatched: u64,
    pub empty_external_names: u64,
    pub enriched: u64,
    pub article_not_found: u64,
    pub venue_already_set: u64,
}

impl fmt::Display for LinkingReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "linked by name            {}", self.name_only)?;
        writeln!(f, "linked by topic + name    {}", self.topic_then_name)?;
        writeln!(f, "unmatched                 {}", self.unmatched)?;
        writeln!(f, "empty external names      {}", self.empty_external_names)?;
        writeln!(f, "articles enriched         {}", self.enriched)?;
        writeln!(f, "articles not found        {}", self.article_not_found)?;
        write!(f, "venue already present     {}", self.venue_already_set)
    }
}

/// Key used to attach an external record to an internal article: cleaned
/// title plus year. Title cleaning only folds case and punctuation — no word
/// dropping, titles are not venue names.
pub fn title_key(title: &str, year: i32) -> (String, i32) {
    let spaced: String = title
        .to_lowercase()
        .chars()
        .map(|c| if c.is_alphanumeric() { c } else { ' ' })
        .collect();
    (spaced.split_whitespace().collect::<Vec<_>>().join(" "), year)
}

/// Fills in missing article venues from matched link decisions. Articles
/// that already have a venue are never overwritten.
pub fn enrich_articles(
    table: &mut ArticleTable,
    records: &[ExternalRecord],
    decisions: &[LinkDecision],
    report: &mut LinkingReport,
) {
    assert_eq!(records.len(), decisions.len());
    let mut by_key: HashMap<(String, i32), usize> = HashMap::new();
    for (idx, article) in table.iter().enumerate() {
        let Some(title) = &article.title else { continue };
        by_key
            .entry(title_key(title, article.year))
            .or_insert(idx);
    }

    for (rec, decision) in records.iter().zip(decisions) {
        let Some(venue) = &decision.matched_venue else {
            continue;
        };
        let Some(&idx) = by_key.get(&title_key(&rec.title, rec.year)) else {
            report.article_not_found += 1;
            continue;
        };
        if table.set_venue_if_missing(idx, venue.clone()) {
            report.enriched += 1;
        } else {
            report.venue_already_set += 1;
        }
    }
}

/// Folds the per-decision rules into the report counters.
pub fn tally_decisions(decisions: &[LinkDecision], report: &mut LinkingReport) {
    for d in decisions {
        match d.rule {
            LinkRule::NameOnly => report.name_only += 1,
            LinkRule::TopicThenName => report.topic_then_name += 1,
            LinkRule::Unmatched => report.unmatched += 1,
        }
        if d.external_name.is_empty() {
            report.empty_external_names += 1;
        }
    }
}
