//! Ingestion of the tab-separated academic-graph tables.
//!
//! Input files (UTF-8 TSV, fixed column order, empty string = missing):
//!
//! - `papers.tsv`              article_id, year, venue_id, title
//! - `references.tsv`          citing_id, cited_id
//! - `paper_authors.tsv`       article_id, author_id
//! - `paper_affiliations.tsv`  article_id, affiliation_id
//! - `paper_fos.tsv`           article_id, fos_id
//! - `venues.tsv` (optional)   venue_id, display_name
//!
//! Malformed rows are skipped and counted, never fatal; unreadable files and
//! invalid UTF-8 are fatal. Duplicate article ids keep the first record.

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet};
use std::fmt;
use std::path::{Path, PathBuf};

use crate::error::Result;
use crate::tsv;

/// One scholarly article with its entity attachments.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ArticleRecord {
    pub article_id: String,
    pub year: i32,
    pub venue_id: Option<String>,
    pub title: Option<String>,
    pub author_ids: Vec<String>,
    pub affiliation_ids: Vec<String>,
    pub fos_ids: Vec<String>,
}

/// Validated, deduplicated article table with a dense index over article ids.
#[derive(Debug, Default, Clone)]
pub struct ArticleTable {
    articles: Vec<ArticleRecord>,
    index: HashMap<String, u32>,
    venue_names: BTreeMap<String, String>,
}

impl ArticleTable {
    pub fn len(&self) -> usize {
        self.articles.len()
    }

    pub fn is_empty(&self) -> bool {
        self.articles.is_empty()
    }

    pub fn get(&self, idx: usize) -> &ArticleRecord {
        &self.articles[idx]
    }

    pub fn iter(&self) -> impl Iterator<Item = &ArticleRecord> {
        self.articles.iter()
    }

    /// Dense index of an article id, if known.
    pub fn index_of(&self, article_id: &str) -> Option<u32> {
        self.index.get(article_id).copied()
    }

    /// All venue ids appearing in the table, in sorted order.
    pub fn venue_ids(&self) -> BTreeSet<String> {
        self.articles
            .iter()
            .filter_map(|a| a.venue_id.clone())
            .collect()
    }

    /// Display name of a venue; falls back to the id when no venues.tsv was
    /// given or the venue is not listed there.
    pub fn venue_name<'a>(&'a self, venue_id: &'a str) -> &'a str {
        self.venue_names
            .get(venue_id)
            .map(String::as_str)
            .unwrap_or(venue_id)
    }

    pub fn venue_names(&self) -> &BTreeMap<String, String> {
        &self.venue_names
    }

    /// Fills in a missing venue. Returns false (and changes nothing) when the
    /// article already has one.
    pub fn set_venue_if_missing(&mut self, idx: usize, venue_id: String) -> bool {
        let rec = &mut self.articles[idx];
        if rec.venue_id.is_some() {
            return false;
        }
        rec.venue_id = Some(venue_id);
        true
    }

    /// Builds a table directly from records, deduplicating ids (first wins).
    /// Used by tests and the synthetic generator; file ingestion goes through
    /// [`ingest_dataset`].
    pub fn from_records(records: Vec<ArticleRecord>) -> ArticleTable {
        let mut table = ArticleTable::default();
        for rec in records {
            table.push_unique(rec);
        }
        table
    }

    pub fn set_venue_names(&mut self, names: BTreeMap<String, String>) {
        self.venue_names = names;
    }

    fn push_unique(&mut self, rec: ArticleRecord) -> bool {
        if self.index.contains_key(&rec.article_id) {
            return false;
        }
        self.index
            .insert(rec.article_id.clone(), self.articles.len() as u32);
        self.articles.push(rec);
        true
    }
}

/// Tally of everything read, dropped, or cleaned during ingestion.
#[derive(Debug, Default, Clone, PartialEq, Eq)]
pub struct IngestReport {
    pub papers_read: u64,
    pub papers_kept: u64,
    pub papers_rejected: u64,
    pub papers_deduplicated: u64,
    pub aux_rows_read: u64,
    pub aux_rows_dropped: u64,
    pub aux_rows_deduplicated: u64,
    pub refs_read: u64,
    pub refs_malformed: u64,
    pub articles_missing_venue: u64,
    pub articles_missing_references: u64,
}

impl IngestReport {
    /// Every paper row must be accounted for exactly once.
    pub fn is_consistent(&self) -> bool {
        self.papers_read == self.papers_kept + self.papers_rejected + self.papers_deduplicated
    }
}

impl fmt::Display for IngestReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "papers read                {}", self.papers_read)?;
        writeln!(f, "papers kept                {}", self.papers_kept)?;
        writeln!(f, "papers rejected            {}", self.papers_rejected)?;
        writeln!(f, "papers deduplicated        {}", self.papers_deduplicated)?;
        writeln!(f, "entity rows read           {}", self.aux_rows_read)?;
        writeln!(f, "entity rows dropped        {}", self.aux_rows_dropped)?;
        writeln!(f, "entity rows deduplicated   {}", self.aux_rows_deduplicated)?;
        writeln!(f, "references read            {}", self.refs_read)?;
        writeln!(f, "references malformed       {}", self.refs_malformed)?;
        writeln!(f, "articles missing venue     {}", self.articles_missing_venue)?;
        write!(
            f,
            "articles missing references {}",
            self.articles_missing_references
        )
    }
}

/// Input file set. Only `papers` is required for a non-empty table; absent
/// optional files simply contribute nothing.
#[derive(Debug, Default, Clone)]
pub struct IngestPaths {
    pub papers: Option<PathBuf>,
    pub references: Option<PathBuf>,
    pub authors: Option<PathBuf>,
    pub affiliations: Option<PathBuf>,
    pub fos: Option<PathBuf>,
    pub venues: Option<PathBuf>,
}

impl IngestPaths {
    /// Conventional file names under one input directory. Files that do not
    /// exist are left unset.
    pub fn from_dir(dir: &Path) -> IngestPaths {
        let opt = |name: &str| {
            let p = dir.join(name);
            p.is_file().then_some(p)
        };
        IngestPaths {
            papers: opt("papers.tsv"),
            references: opt("references.tsv"),
            authors: opt("paper_authors.tsv"),
            affiliations: opt("paper_affiliations.tsv"),
            fos: opt("paper_fos.tsv"),
            venues: opt("venues.tsv"),
        }
    }
}

#[derive(Debug, Clone)]
pub struct IngestOptions {
    /// Plausible publication-year range; records outside it are rejected.
    pub year_min: i32,
    pub year_max: i32,
}

impl Default for IngestOptions {
    fn default() -> Self {
        IngestOptions {
            year_min: 1800,
            year_max: current_year(),
        }
    }
}

fn current_year() -> i32 {
    let secs = std::time::SystemTime::now()
        .duration_since(std::time::UNIX_EPOCH)
        .map(|d| d.as_secs())
        .unwrap_or(0);
    // Days-to-civil conversion (proleptic Gregorian), year part only.
    let days = (secs / 86_400) as i64 + 719_468;
    let era = days.div_euclid(146_097);
    let doe = days.rem_euclid(146_097);
    let yoe = (doe - doe / 1460 + doe / 36_524 - doe / 146_096) / 365;
    let doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
    let y = yoe + era * 400;
    (if doy >= 306 { y + 1 } else { y }) as i32
}

/// Raw citation pairs as read from `references.tsv`, before graph-level
/// cleanup (resolution, dedup, self-loop removal happen at graph build).
pub type ReferenceList = Vec<(String, String)>;

/// Reads and validates the dataset. Returns the article table, the raw
/// reference list, and a report tallying every dropped or cleaned record.
pub fn ingest_dataset(
    paths: &IngestPaths,
    opts: &IngestOptions,
) -> Result<(ArticleTable, ReferenceList, IngestReport)> {
    let mut table = ArticleTable::default();
    let mut report = IngestReport::default();

    if let Some(papers) = &paths.papers {
        for (_line_no, line) in tsv::read_lines(papers)? {
            report.papers_read += 1;
            let Some(fields) = tsv::split_fields(&line, 4) else {
                report.papers_rejected += 1;
                continue;
            };
            let article_id = fields[0];
            let year: i32 = match fields[1].parse() {
                Ok(y) => y,
                Err(_) => {
                    report.papers_rejected += 1;
                    continue;
                }
            };
            if article_id.is_empty() || year < opts.year_min || year > opts.year_max {
                report.papers_rejected += 1;
                continue;
            }
            let rec = ArticleRecord {
                article_id: article_id.to_string(),
                year,
                venue_id: non_empty(fields[2]),
                title: non_empty(fields[3]),
                author_ids: Vec::new(),
                affiliation_ids: Vec::new(),
                fos_ids: Vec::new(),
            };
            if table.push_unique(rec) {
                report.papers_kept += 1;
            } else {
                report.papers_deduplicated += 1;
            }
        }
    }

    attach_entities(&mut table, paths.authors.as_deref(), Field::Author, &mut report)?;
    attach_entities(
        &mut table,
        paths.affiliations.as_deref(),
        Field::Affiliation,
        &mut report,
    )?;
    attach_entities(&mut table, paths.fos.as_deref(), Field::Fos, &mut report)?;

    if let Some(venues) = &paths.venues {
        let mut names = BTreeMap::new();
        for (_line_no, line) in tsv::read_lines(venues)? {
            if let Some(fields) = tsv::split_fields(&line, 2) {
                if !fields[0].is_empty() && !fields[1].is_empty() {
                    names
                        .entry(fields[0].to_string())
                        .or_insert_with(|| fields[1].to_string());
                }
            }
        }
        table.set_venue_names(names);
    }

    let mut refs: ReferenceList = Vec::new();
    if let Some(path) = &paths.references {
        for (_line_no, line) in tsv::read_lines(path)? {
            report.refs_read += 1;
            match tsv::split_fields(&line, 2) {
                Some(f) if !f[0].is_empty() && !f[1].is_empty() => {
                    refs.push((f[0].to_string(), f[1].to_string()));
                }
                _ => report.refs_malformed += 1,
            }
        }
    }

    let citing: HashSet<&str> = refs
        .iter()
        .filter(|(u, _)| table.index_of(u).is_some())
        .map(|(u, _)| u.as_str())
        .collect();
    for rec in table.iter() {
        if rec.venue_id.is_none() {
            report.articles_missing_venue += 1;
        }
        if !citing.contains(rec.article_id.as_str()) {
            report.articles_missing_references += 1;
        }
    }

    debug_assert!(report.is_consistent());
    Ok((table, refs, report))
}

#[derive(Clone, Copy)]
enum Field {
    Author,
    Affiliation,
    Fos,
}

fn attach_entities(
    table: &mut ArticleTable,
    path: Option<&Path>,
    field: Field,
    report: &mut IngestReport,
) -> Result<()> {
    let Some(path) = path else { return Ok(()) };
    for (_line_no, line) in tsv::read_lines(path)? {
        report.aux_rows_read += 1;
        let Some(fields) = tsv::split_fields(&line, 2) else {
            report.aux_rows_dropped += 1;
            continue;
        };
        let (article_id, entity_id) = (fields[0], fields[1]);
        if entity_id.is_empty() {
            report.aux_rows_dropped += 1;
            continue;
        }
        let Some(idx) = table.index_of(article_id) else {
            report.aux_rows_dropped += 1;
            continue;
        };
        let rec = &mut table.articles[idx as usize];
        let list = match field {
            Field::Author => &mut rec.author_ids,
            Field::Affiliation => &mut rec.affiliation_ids,
            Field::Fos => &mut rec.fos_ids,
        };
        if list.iter().any(|e| e == entity_id) {
            report.aux_rows_deduplicated += 1;
        } else {
            list.push(entity_id.to_string());
        }
    }
    Ok(())
}

fn non_empty(s: &str) -> Option<String> {
    (!s.is_empty()).then(|| s.to_string())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn write(dir: &Path, name: &str, contents: &str) -> PathBuf {
        let p = dir.join(name);
        std::fs::write(&p, contents).unwrap();
        p
    }

    #[test]
    fn rejects_malformed_year_rows() {
        let dir = tempfile::tempdir().unwrap();
        let papers = write(
            dir.path(),
            "papers.tsv",
            "p1\t2000\tv1\tAlpha\np2\t20XX\tv1\tBeta\np3\t2001\t\t\np4\t1999\tv2\tDelta\n",
        );
        let paths = IngestPaths {
            papers: Some(papers),
            ..Default::default()
        };
        let (table, _refs, report) = ingest_dataset(&paths, &IngestOptions::default()).unwrap();
        assert_eq!(table.len(), 3);
        assert_eq!(report.papers_rejected, 1);
        assert_eq!(report.papers_kept, 3);
        assert!(report.is_consistent());
    }

    #[test]
    fn duplicate_article_id_keeps_first() {
        let dir = tempfile::tempdir().unwrap();
        let papers = write(
            dir.path(),
            "papers.tsv",
            "p1\t2000\tv1\tAlpha\np1\t2005\tv2\tAlpha again\n",
        );
        let paths = IngestPaths {
            papers: Some(papers),
            ..Default::default()
        };
        let (table, _refs, report) = ingest_dataset(&paths, &IngestOptions::default()).unwrap();
        assert_eq!(table.len(), 1);
        assert_eq!(table.get(0).year, 2000);
        assert_eq!(report.papers_deduplicated, 1);
        assert!(report.is_consistent());
    }

    #[test]
    fn empty_file_set_is_empty_table() {
        let (table, refs, report) =
            ingest_dataset(&IngestPaths::default(), &IngestOptions::default()).unwrap();
        assert!(table.is_empty());
        assert!(refs.is_empty());
        assert_eq!(report, IngestReport::default());
    }

    #[test]
    fn out_of_range_year_rejected() {
        let dir = tempfile::tempdir().unwrap();
        let papers = write(
            dir.path(),
            "papers.tsv",
            "p1\t1750\tv1\tOld\np2\t2001\tv1\tOk\n",
        );
        let paths = IngestPaths {
            papers: Some(papers),
            ..Default::default()
        };
        let (table, _refs, report) = ingest_dataset(&paths, &IngestOptions::default()).unwrap();
        assert_eq!(table.len(), 1);
        assert_eq!(report.papers_rejected, 1);
    }

    #[test]
    fn entity_rows_dedup_and_resolve() {
        let dir = tempfile::tempdir().unwrap();
        let papers = write(dir.path(), "papers.tsv", "p1\t2000\tv1\tA\np2\t2001\t\tB\n");
        let authors = write(
            dir.path(),
            "paper_authors.tsv",
            "p1\ta1\np1\ta2\np1\ta1\npX\ta3\n",
        );
        let fos = write(dir.path(), "paper_fos.tsv", "p1\tf1\np2\tf1\np2\tf2\n");
        let paths = IngestPaths {
            papers: Some(papers),
            authors: Some(authors),
            fos: Some(fos),
            ..Default::default()
        };
        let (table, _refs, report) = ingest_dataset(&paths, &IngestOptions::default()).unwrap();
        assert_eq!(table.get(0).author_ids, vec!["a1", "a2"]);
        assert_eq!(table.get(1).fos_ids, vec!["f1", "f2"]);
        assert_eq!(report.aux_rows_deduplicated, 1);
        assert_eq!(report.aux_rows_dropped, 1);
    }

    #[test]
    fn missing_counts_follow_table() {
        let dir = tempfile::tempdir().unwrap();
        let papers = write(
            dir.path(),
            "papers.tsv",
            "p1\t2000\tv1\tA\np2\t2001\t\tB\np3\t2002\t\tC\n",
        );
        let refs = write(dir.path(), "references.tsv", "p2\tp1\nbroken\n");
        let paths = IngestPaths {
            papers: Some(papers),
            references: Some(refs),
            ..Default::default()
        };
        let (_table, raw_refs, report) =
            ingest_dataset(&paths, &IngestOptions::default()).unwrap();
        assert_eq!(raw_refs.len(), 1);
        assert_eq!(report.refs_malformed, 1);
        assert_eq!(report.articles_missing_venue, 2);
        // p1 and p3 cite nothing.
        assert_eq!(report.articles_missing_references, 2);
    }
}
