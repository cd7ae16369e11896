//! Staging-directory layout and the pipeline commands.
//!
//! `ingest` validates raw inputs once and persists the cleaned tables into a
//! staging directory; every later stage reads only staged data. `link`
//! stores its venue enrichment as a separate overlay file
//! (`venue_fill.tsv`) instead of rewriting the staged papers table, so the
//! unenriched baseline stays available: ranking applies the overlay only
//! when enrichment is enabled in the config. A lock file guards the staging
//! directory against concurrent mutation.

use std::fs::OpenOptions;
use std::io::ErrorKind;
use std::path::{Path, PathBuf};

use crate::citation::build_citation_graph;
use crate::config::PipelineConfig;
use crate::ensemble::{compute_ensembles, compute_method_ranking, Method};
use crate::error::{Error, Result};
use crate::eval::{
    ablation_tsv, pairwise_accuracy, read_pairs, run_ablation, AblationRow, AccuracyReport,
};
use crate::ingest::{ingest_dataset, ArticleTable, IngestPaths, IngestReport, ReferenceList};
use crate::linking::{
    enrich_articles, internal_venues, link_all, read_external_records, tally_decisions,
    LinkDecision, LinkingReport,
};
use crate::scores::{Provenance, RankingVector};
use crate::tsv;

const PAPERS: &str = "papers.tsv";
const REFERENCES: &str = "references.tsv";
const AUTHORS: &str = "paper_authors.tsv";
const AFFILIATIONS: &str = "paper_affiliations.tsv";
const FOS: &str = "paper_fos.tsv";
const VENUES: &str = "venues.tsv";
const INGEST_REPORT: &str = "ingest_report.txt";
const VENUE_FILL: &str = "venue_fill.tsv";
const LOCK: &str = ".lock";

/// Exclusive hold on a staging directory, backed by a lock file that exists
/// only while some process mutates the staged data. Dropped on completion.
pub struct StageLock {
    path: PathBuf,
}

impl StageLock {
    pub fn acquire(dir: &Path) -> Result<StageLock> {
        std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
        let path = dir.join(LOCK);
        match OpenOptions::new().write(true).create_new(true).open(&path) {
            Ok(_) => Ok(StageLock { path }),
            Err(e) if e.kind() == ErrorKind::AlreadyExists => Err(Error::io(
                &path,
                std::io::Error::new(
                    ErrorKind::AlreadyExists,
                    "staging directory is locked by another run (delete the lock file if stale)",
                ),
            )),
            Err(e) => Err(Error::io(&path, e)),
        }
    }
}

impl Drop for StageLock {
    fn drop(&mut self) {
        let _ = std::fs::remove_file(&self.path);
    }
}

/// Writes the cleaned tables in the input-file schema. Shared by staging and
/// the synthetic-corpus writer.
pub fn write_table_files(table: &ArticleTable, refs: &ReferenceList, dir: &Path) -> Result<()> {
    let mut papers = String::new();
    let mut authors = String::new();
    let mut affiliations = String::new();
    let mut fos = String::new();
    for rec in table.iter() {
        papers.push_str(&format!(
            "{}\t{}\t{}\t{}\n",
            rec.article_id,
            rec.year,
            rec.venue_id.as_deref().unwrap_or(""),
            rec.title.as_deref().unwrap_or("")
        ));
        for a in &rec.author_ids {
            authors.push_str(&format!("{}\t{}\n", rec.article_id, a));
        }
        for g in &rec.affiliation_ids {
            affiliations.push_str(&format!("{}\t{}\n", rec.article_id, g));
        }
        for f in &rec.fos_ids {
            fos.push_str(&format!("{}\t{}\n", rec.article_id, f));
        }
    }
    tsv::write_file(&dir.join(PAPERS), &papers)?;
    tsv::write_file(&dir.join(AUTHORS), &authors)?;
    tsv::write_file(&dir.join(AFFILIATIONS), &affiliations)?;
    tsv::write_file(&dir.join(FOS), &fos)?;

    let mut references = String::new();
    for (u, v) in refs {
        references.push_str(&format!("{u}\t{v}\n"));
    }
    tsv::write_file(&dir.join(REFERENCES), &references)?;

    if !table.venue_names().is_empty() {
        let mut venues = String::new();
        for (id, name) in table.venue_names() {
            venues.push_str(&format!("{id}\t{name}\n"));
        }
        tsv::write_file(&dir.join(VENUES), &venues)?;
    }
    Ok(())
}

fn stage_dataset(
    table: &ArticleTable,
    refs: &ReferenceList,
    report: &IngestReport,
    dir: &Path,
) -> Result<()> {
    write_table_files(table, refs, dir)?;
    tsv::write_file(&dir.join(INGEST_REPORT), &format!("{report}\n"))
}

fn has_staged_dataset(dir: &Path) -> bool {
    dir.join(PAPERS).is_file()
}

/// Loads the staged tables. With `apply_fill`, the venue-enrichment overlay
/// written by the link command (when present) fills missing venues.
fn load_staged(config: &PipelineConfig, apply_fill: bool) -> Result<(ArticleTable, ReferenceList)> {
    let dir = &config.staging_dir;
    if !has_staged_dataset(dir) {
        return Err(Error::io(
            dir.join(PAPERS),
            std::io::Error::new(
                ErrorKind::NotFound,
                "no staged dataset here; run the ingest command first",
            ),
        ));
    }
    let paths = IngestPaths::from_dir(dir);
    let (mut table, refs, _report) = ingest_dataset(&paths, &config.ingest_options())?;

    let fill_path = dir.join(VENUE_FILL);
    if apply_fill && fill_path.is_file() {
        for (_line_no, line) in tsv::read_lines(&fill_path)? {
            if let Some(fields) = tsv::split_fields(&line, 2) {
                if let Some(idx) = table.index_of(fields[0]) {
                    table.set_venue_if_missing(idx as usize, fields[1].to_string());
                }
            }
        }
    }
    Ok((table, refs))
}

/// Validates and stages a raw dataset. Refuses to replace an existing staged
/// dataset unless `force` is set.
pub fn cmd_ingest(
    config: &PipelineConfig,
    input_dir: &Path,
    force: bool,
) -> Result<IngestReport> {
    let paths = IngestPaths::from_dir(input_dir);
    if paths.papers.is_none() {
        return Err(Error::io(
            input_dir.join(PAPERS),
            std::io::Error::new(ErrorKind::NotFound, "required input file is missing"),
        ));
    }

    let _lock = StageLock::acquire(&config.staging_dir)?;
    if has_staged_dataset(&config.staging_dir) && !force {
        return Err(Error::io(
            config.staging_dir.join(PAPERS),
            std::io::Error::new(
                ErrorKind::AlreadyExists,
                "a staged dataset already exists; pass --force to replace it",
            ),
        ));
    }
    for name in [
        PAPERS,
        REFERENCES,
        AUTHORS,
        AFFILIATIONS,
        FOS,
        VENUES,
        INGEST_REPORT,
        VENUE_FILL,
    ] {
        let path = config.staging_dir.join(name);
        if path.exists() {
            std::fs::remove_file(&path).map_err(|e| Error::io(&path, e))?;
        }
    }

    let (table, refs, report) = ingest_dataset(&paths, &config.ingest_options())?;
    stage_dataset(&table, &refs, &report, &config.staging_dir)?;
    Ok(report)
}

/// Outcome of the link command: the report plus where the audit went.
#[derive(Debug, Clone)]
pub struct LinkOutcome {
    pub report: LinkingReport,
    pub external_rows_skipped: u64,
    pub audit_path: PathBuf,
}

/// Links an external venue file against the staged dataset, writes the
/// decision audit, and persists the enrichment overlay.
pub fn cmd_link(config: &PipelineConfig, external_path: &Path) -> Result<LinkOutcome> {
    let _lock = StageLock::acquire(&config.staging_dir)?;
    // Deliberately unenriched: decisions are always computed against the
    // original staged table, so re-running link is idempotent.
    let (table, _refs) = load_staged(config, false)?;
    let (records, skipped) = read_external_records(external_path)?;

    let venues = internal_venues(&table, &config.normalize);
    let decisions = link_all(&records, &venues, &config.thresholds, &config.normalize);

    let mut report = LinkingReport::default();
    tally_decisions(&decisions, &mut report);

    let mut enriched = table.clone();
    enrich_articles(&mut enriched, &records, &decisions, &mut report);

    let mut fill = String::new();
    for (before, after) in table.iter().zip(enriched.iter()) {
        if before.venue_id.is_none() {
            if let Some(venue) = &after.venue_id {
                fill.push_str(&format!("{}\t{}\n", after.article_id, venue));
            }
        }
    }
    tsv::write_file(&config.staging_dir.join(VENUE_FILL), &fill)?;

    let audit_path = config.output_dir.join("link_audit.tsv");
    tsv::write_file(&audit_path, &audit_tsv(&decisions))?;
    tsv::write_file(
        &config.output_dir.join("link_report.txt"),
        &format!("{report}\nexternal rows skipped    {skipped}\n"),
    )?;

    Ok(LinkOutcome {
        report,
        external_rows_skipped: skipped,
        audit_path,
    })
}

/// One audit row per decision: name, venue, rule, and both similarities.
pub fn audit_tsv(decisions: &[LinkDecision]) -> String {
    let mut out = String::new();
    for d in decisions {
        out.push_str(&format!(
            "{}\t{}\t{}\t{}\t{}\n",
            d.external_name,
            d.matched_venue.as_deref().unwrap_or(""),
            d.rule,
            tsv::format_score(d.name_sim),
            d.topic_sim.map(tsv::format_score).unwrap_or_default()
        ));
    }
    out
}

/// Files produced by a rank invocation, primary ranking first.
#[derive(Debug, Clone)]
pub struct RankOutcome {
    pub files: Vec<PathBuf>,
}

/// Computes one method's ranking over the staged dataset and writes it (plus
/// the per-ensemble inputs when emission is on and the method fuses).
pub fn cmd_rank(config: &PipelineConfig, method: Method, emit_ensembles: bool) -> Result<RankOutcome> {
    let (table, refs) = load_staged(config, config.enable_enrichment)?;
    let (cg, _drops) = build_citation_graph(&table, &refs);
    let emit = emit_ensembles || config.emit_ensembles;

    let mut files = Vec::new();
    let primary_path = config
        .output_dir
        .join(format!("ranking_{}.tsv", method.label()));

    match method {
        Method::Pr | Method::Wpr => {
            let ranking =
                compute_method_ranking(&table, &cg, method, &config.ranking, &config.weights)?;
            ranking.write_tsv(&primary_path)?;
            files.push(primary_path);
        }
        Method::Ewpr | Method::EwprAll => {
            let bundle = compute_ensembles(
                &table,
                &cg,
                &config.ranking,
                &config.weights,
                method == Method::EwprAll,
            )?;
            bundle.fused.write_tsv(&primary_path)?;
            files.push(primary_path);
            if emit {
                let mut extra: Vec<&RankingVector> =
                    vec![&bundle.citation, &bundle.venue, &bundle.author];
                if let Some(f) = &bundle.affiliation {
                    extra.push(f);
                }
                for r in extra {
                    let path = config
                        .output_dir
                        .join(format!("ensemble_{}.tsv", r.provenance.label()));
                    r.write_tsv(&path)?;
                    files.push(path);
                }
            }
        }
    }
    Ok(RankOutcome { files })
}

/// Evaluates a ranking file against judged pairs; the result is also
/// appended to the output directory as a one-row table.
pub fn cmd_eval(
    config: &PipelineConfig,
    ranking_path: &Path,
    pairs_path: &Path,
) -> Result<AccuracyReport> {
    let ranking = RankingVector::read_tsv(ranking_path, Provenance::Fused)?;
    let (pairs, _skipped) = read_pairs(pairs_path)?;
    let report = pairwise_accuracy(&ranking, &pairs, config.tie_policy)?;
    let label = ranking_path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "ranking".to_string());
    tsv::write_file(
        &config.output_dir.join("accuracy.tsv"),
        &format!(
            "{label}\t{}\t{}\t{}\n",
            tsv::format_score(report.accuracy),
            report.evaluated,
            report.excluded
        ),
    )?;
    Ok(report)
}

/// Runs the full four-method comparison over the staged dataset and writes
/// the accuracy table.
pub fn cmd_eval_ablation(config: &PipelineConfig, pairs_path: &Path) -> Result<Vec<AblationRow>> {
    let (table, refs) = load_staged(config, config.enable_enrichment)?;
    let (pairs, _skipped) = read_pairs(pairs_path)?;
    let rows = run_ablation(
        &table,
        &refs,
        &pairs,
        &config.ranking,
        &config.weights,
        config.tie_policy,
    )?;
    tsv::write_file(&config.output_dir.join("ablation.tsv"), &ablation_tsv(&rows))?;
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::synthetic::{generate, write_dataset, SyntheticParams};

    fn test_config(root: &Path) -> PipelineConfig {
        PipelineConfig {
            staging_dir: root.join("stage"),
            output_dir: root.join("out"),
            ..Default::default()
        }
    }

    fn small_corpus(root: &Path) -> PathBuf {
        let params = SyntheticParams {
            seed: 11,
            articles: 120,
            venues: 8,
            authors: 40,
            affiliations: 10,
            pairs: 30,
            missing_venue_frac: 0.1,
            ..Default::default()
        };
        let dir = root.join("input");
        std::fs::create_dir_all(&dir).unwrap();
        write_dataset(&generate(&params), &dir).unwrap();
        dir
    }

    #[test]
    fn lock_is_exclusive_and_released() {
        let dir = tempfile::tempdir().unwrap();
        let lock = StageLock::acquire(dir.path()).unwrap();
        assert!(StageLock::acquire(dir.path()).is_err());
        drop(lock);
        assert!(StageLock::acquire(dir.path()).is_ok());
    }

    #[test]
    fn ingest_refuses_to_overwrite_without_force() {
        let root = tempfile::tempdir().unwrap();
        let config = test_config(root.path());
        let input = small_corpus(root.path());
        cmd_ingest(&config, &input, false).unwrap();
        let again = cmd_ingest(&config, &input, false);
        assert!(again.is_err());
        assert_eq!(again.unwrap_err().exit_code(), 3);
        cmd_ingest(&config, &input, true).unwrap();
    }

    #[test]
    fn staged_dataset_reloads_identically() {
        let root = tempfile::tempdir().unwrap();
        let config = test_config(root.path());
        let input = small_corpus(root.path());
        let report = cmd_ingest(&config, &input, false).unwrap();
        assert!(report.is_consistent());
        let (table, refs) = load_staged(&config, false).unwrap();
        assert_eq!(table.len() as u64, report.papers_kept);
        assert_eq!(refs.len() as u64, report.refs_read - report.refs_malformed);
    }

    #[test]
    fn link_writes_overlay_and_rank_applies_it_when_enabled() {
        let root = tempfile::tempdir().unwrap();
        let mut config = test_config(root.path());
        let input = small_corpus(root.path());
        cmd_ingest(&config, &input, false).unwrap();
        let outcome = cmd_link(&config, &input.join("external.tsv")).unwrap();
        assert!(outcome.report.enriched > 0);
        assert!(outcome.audit_path.is_file());

        let (plain, _) = load_staged(&config, false).unwrap();
        let missing_before = plain.iter().filter(|a| a.venue_id.is_none()).count();
        config.enable_enrichment = true;
        let (filled, _) = load_staged(&config, true).unwrap();
        let missing_after = filled.iter().filter(|a| a.venue_id.is_none()).count();
        assert!(missing_after < missing_before);
    }

    #[test]
    fn rank_writes_primary_and_optional_ensemble_files() {
        let root = tempfile::tempdir().unwrap();
        let config = test_config(root.path());
        let input = small_corpus(root.path());
        cmd_ingest(&config, &input, false).unwrap();

        let wpr = cmd_rank(&config, Method::Wpr, false).unwrap();
        assert_eq!(wpr.files.len(), 1);

        let ewpr = cmd_rank(&config, Method::Ewpr, true).unwrap();
        assert_eq!(ewpr.files.len(), 4);
        let all = cmd_rank(&config, Method::EwprAll, true).unwrap();
        assert_eq!(all.files.len(), 5);
        for f in ewpr.files.iter().chain(&all.files) {
            assert!(f.is_file(), "{} missing", f.display());
        }
    }

    #[test]
    fn eval_round_trip_on_perfect_pairs() {
        let root = tempfile::tempdir().unwrap();
        let config = test_config(root.path());
        let input = small_corpus(root.path());
        cmd_ingest(&config, &input, false).unwrap();
        let ranking_files = cmd_rank(&config, Method::Wpr, false).unwrap().files;

        // Pairs read off the ranking itself must evaluate perfectly.
        let ranking = RankingVector::read_tsv(&ranking_files[0], Provenance::Fused).unwrap();
        let mut order: Vec<usize> = (0..ranking.len()).collect();
        order.sort_by(|&a, &b| ranking.scores[b].total_cmp(&ranking.scores[a]));
        let mut pairs = String::new();
        for w in order.windows(2).take(20) {
            if ranking.scores[w[0]] > ranking.scores[w[1]] {
                pairs.push_str(&format!("{}\t{}\n", ranking.ids[w[0]], ranking.ids[w[1]]));
            }
        }
        let pairs_path = root.path().join("pairs_perfect.tsv");
        std::fs::write(&pairs_path, &pairs).unwrap();
        let report = cmd_eval(&config, &ranking_files[0], &pairs_path).unwrap();
        assert_eq!(report.accuracy, 1.0);
        assert!(config.output_dir.join("accuracy.tsv").is_file());
    }

    #[test]
    fn ablation_writes_four_rows() {
        let root = tempfile::tempdir().unwrap();
        let config = test_config(root.path());
        let input = small_corpus(root.path());
        cmd_ingest(&config, &input, false).unwrap();
        let rows = cmd_eval_ablation(&config, &input.join("pairs.tsv")).unwrap();
        assert_eq!(rows.len(), 4);
        let text = std::fs::read_to_string(config.output_dir.join("ablation.tsv")).unwrap();
        assert_eq!(text.lines().count(), 4);
        for row in &rows {
            assert!((0.0..=1.0).contains(&row.accuracy));
        }
    }
}
