//! Deterministic synthetic corpus with a planted importance order.
//!
//! Real citation data comes with no ground truth, so the benchmark corpus
//! plants one: every article gets a latent importance, venues and authors of
//! an article are drawn to have quality near it, and judged pairs are
//! sampled from the planted order with a margin. Three article archetypes
//! give the ranking methods something to disagree about:
//!
//! - *regular* (~70%): citations proportional to importance, arriving close
//!   to publication — all methods see roughly the same evidence;
//! - *stale magnet* (~15%): old, low-importance articles with a small early
//!   burst and a long tail of late citations — raw citation counting
//!   overrates them, time decay deflates the tail;
//! - *cold star* (~15%): recent, high-importance articles with too few
//!   citations to stand out — only their venue and author company can
//!   rescue them.
//!
//! Everything derives from one seeded stream in a fixed draw order, so a
//! seed fully determines the corpus, bit for bit.

use std::collections::BTreeMap;
use std::path::Path;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::Result;
use crate::eval::JudgedPair;
use crate::ingest::{ArticleRecord, ArticleTable, ReferenceList};
use crate::linking::ExternalRecord;
use crate::tsv;

#[derive(Debug, Clone, PartialEq)]
pub struct SyntheticParams {
    pub seed: u64,
    pub articles: usize,
    pub venues: usize,
    pub authors: usize,
    pub affiliations: usize,
    pub pairs: usize,
    /// Fraction of articles whose venue is withheld from the main table
    /// (recoverable through the external file).
    pub missing_venue_frac: f64,
    /// Minimum planted-importance gap for a judged pair.
    pub margin: f64,
}

impl Default for SyntheticParams {
    fn default() -> Self {
        SyntheticParams {
            seed: 0,
            articles: 5000,
            venues: 50,
            authors: 2400,
            affiliations: 150,
            pairs: 1000,
            missing_venue_frac: 0.02,
            margin: 0.15,
        }
    }
}

#[derive(Debug, Clone)]
pub struct SyntheticDataset {
    pub table: ArticleTable,
    pub refs: ReferenceList,
    pub pairs: Vec<JudgedPair>,
    pub external: Vec<ExternalRecord>,
    /// Planted importance per article (table order) — the ground-truth
    /// oracle the judged pairs are sampled from.
    pub importance: Vec<f64>,
}

#[derive(Clone, Copy, PartialEq)]
enum Archetype {
    Regular,
    StaleMagnet,
    ColdStar,
}

const FIRST_YEAR: i32 = 1965;
const LAST_YEAR: i32 = 2023;

const ADJECTIVES: [&str; 16] = [
    "advanced", "applied", "computational", "distributed", "empirical", "formal", "geometric",
    "intelligent", "neural", "parallel", "probabilistic", "quantum", "semantic", "statistical",
    "temporal", "visual",
];
const NOUNS: [&str; 16] = [
    "algorithms", "computation", "data mining", "databases", "information retrieval",
    "knowledge discovery", "learning systems", "logic", "networks", "optimization",
    "pattern recognition", "programming languages", "robotics", "security",
    "software engineering", "web search",
];

pub fn generate(params: &SyntheticParams) -> SyntheticDataset {
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    let p = params;

    let venue_quality: Vec<f64> = (0..p.venues).map(|_| 0.05 + 0.95 * rng.gen::<f64>()).collect();
    let author_quality: Vec<f64> = (0..p.authors).map(|_| 0.05 + 0.95 * rng.gen::<f64>()).collect();
    let affiliation_quality: Vec<f64> = (0..p.affiliations)
        .map(|_| 0.05 + 0.95 * rng.gen::<f64>())
        .collect();
    let author_affiliation: Vec<usize> = (0..p.authors)
        .map(|k| {
            let target = clamp01(author_quality[k] + jitter(&mut rng, 0.15));
            pick_nearest(&affiliation_quality, target, 20, &mut rng)
        })
        .collect();

    // Venue display names: distinct adjective/noun cores under shared
    // conference boilerplate.
    let mut combos: Vec<(usize, usize)> = (0..ADJECTIVES.len())
        .flat_map(|a| (0..NOUNS.len()).map(move |n| (a, n)))
        .collect();
    shuffle(&mut combos, &mut rng);
    let venue_core: Vec<String> = combos
        .iter()
        .take(p.venues)
        .map(|&(a, n)| format!("{} {}", ADJECTIVES[a], NOUNS[n]))
        .collect();

    let fos_pool: Vec<String> = (0..40).map(|k| format!("f{k:02}")).collect();
    let venue_fos: Vec<Vec<usize>> = (0..p.venues)
        .map(|_| {
            let mut picks = Vec::new();
            while picks.len() < 3 {
                let k = rng.gen_range(0..fos_pool.len());
                if !picks.contains(&k) {
                    picks.push(k);
                }
            }
            picks
        })
        .collect();

    // Articles.
    let n = p.articles;
    let mut records: Vec<ArticleRecord> = Vec::with_capacity(n);
    let mut importance = Vec::with_capacity(n);
    let mut archetypes = Vec::with_capacity(n);
    let mut true_venue = Vec::with_capacity(n);
    let mut years = Vec::with_capacity(n);

    for i in 0..n {
        let roll = rng.gen::<f64>();
        let archetype = if roll < 0.10 {
            Archetype::StaleMagnet
        } else if roll < 0.25 {
            Archetype::ColdStar
        } else {
            Archetype::Regular
        };
        let year = match archetype {
            Archetype::StaleMagnet => rng.gen_range(FIRST_YEAR..=1985),
            Archetype::ColdStar => rng.gen_range(2019..=LAST_YEAR),
            Archetype::Regular => rng.gen_range(FIRST_YEAR..=LAST_YEAR),
        };
        // `latent` is the citation-visible quality (skewed low, like real
        // citation counts); `station` is the article's standing on a uniform
        // scale and drives venue/author assignment. Keying assignment on the
        // uniform station keeps venue sizes balanced — otherwise low venues
        // collect most articles and raw volume swamps per-article quality.
        let (latent, station) = match archetype {
            Archetype::StaleMagnet => {
                let s = 0.05 + 0.30 * rng.gen::<f64>();
                (s, s)
            }
            Archetype::ColdStar => {
                let s = 0.70 + 0.28 * rng.gen::<f64>();
                (s, s)
            }
            Archetype::Regular => {
                let u = rng.gen::<f64>();
                (0.05 + 0.90 * u * u, u)
            }
        };

        let venue = pick_nearest(
            &venue_quality,
            clamp01(station + jitter(&mut rng, 0.10)),
            12,
            &mut rng,
        );
        let missing_venue = rng.gen::<f64>() < p.missing_venue_frac;

        let author_count = 1 + (rng.gen::<f64>().powi(2) * 3.4) as usize;
        let mut article_authors: Vec<usize> = Vec::with_capacity(author_count);
        for _ in 0..author_count {
            let a = pick_nearest(
                &author_quality,
                clamp01(station + jitter(&mut rng, 0.15)),
                40,
                &mut rng,
            );
            if !article_authors.contains(&a) {
                article_authors.push(a);
            }
        }

        let mut fos: Vec<usize> = Vec::new();
        for _ in 0..2 {
            let k = venue_fos[venue][rng.gen_range(0..venue_fos[venue].len())];
            if !fos.contains(&k) {
                fos.push(k);
            }
        }
        if rng.gen::<f64>() < 0.3 {
            let k = rng.gen_range(0..fos_pool.len());
            if !fos.contains(&k) {
                fos.push(k);
            }
        }

        let mean_author_q = article_authors
            .iter()
            .map(|&a| author_quality[a])
            .sum::<f64>()
            / article_authors.len() as f64;
        let planted = 0.5 * venue_quality[venue] + 0.3 * mean_author_q + 0.2 * latent;

        let adj = ADJECTIVES[rng.gen_range(0..ADJECTIVES.len())];
        let noun = NOUNS[rng.gen_range(0..NOUNS.len())];
        let mut affiliation_ids: Vec<String> = Vec::new();
        for &a in &article_authors {
            let aff = format!("g{:03}", author_affiliation[a]);
            if !affiliation_ids.contains(&aff) {
                affiliation_ids.push(aff);
            }
        }

        records.push(ArticleRecord {
            article_id: format!("p{i:05}"),
            year,
            venue_id: (!missing_venue).then(|| format!("v{venue:03}")),
            title: Some(format!("A {adj} approach to {noun} {i:05}")),
            author_ids: article_authors.iter().map(|&a| format!("a{a:04}")).collect(),
            affiliation_ids,
            fos_ids: fos.iter().map(|&k| fos_pool[k].clone()).collect(),
        });
        importance.push(planted);
        archetypes.push(archetype);
        true_venue.push(venue);
        years.push(year);
    }

    // Citations, drawn per cited article.
    let year_index = YearIndex::new(&years);
    let mut refs: ReferenceList = Vec::new();
    for v in 0..n {
        let year = years[v];
        let cite = |rng: &mut ChaCha8Rng, refs: &mut ReferenceList, lo: i32, hi: i32| {
            if let Some(u) = year_index.sample(rng, lo, hi, v as u32) {
                refs.push((
                    records[u as usize].article_id.clone(),
                    records[v].article_id.clone(),
                ));
            }
        };
        match archetypes[v] {
            Archetype::Regular => {
                let count =
                    (2.0 + 34.0 * importance[v] * importance[v] + 2.0 * rng.gen::<f64>()) as usize;
                for _ in 0..count {
                    let offset = (rng.gen::<f64>().powi(2) * 5.0) as i32;
                    let y = (year + offset).min(LAST_YEAR);
                    cite(&mut rng, &mut refs, y, y);
                }
            }
            Archetype::StaleMagnet => {
                // The burst lands in a single year so it always forms the
                // citation peak; the tail is thin enough per year that no
                // late year can overtake it, which keeps every tail citation
                // firmly in decay territory.
                let burst = 6 + (rng.gen::<f64>() * 2.0) as usize;
                let burst_year = (year + 1).min(LAST_YEAR);
                for _ in 0..burst {
                    cite(&mut rng, &mut refs, burst_year, burst_year);
                }
                let tail = 38 + (rng.gen::<f64>() * 12.0) as usize;
                for _ in 0..tail {
                    cite(&mut rng, &mut refs, (year + 14).min(LAST_YEAR), LAST_YEAR);
                }
            }
            Archetype::ColdStar => {
                let count = 2 + (rng.gen::<f64>() * 3.0) as usize;
                for _ in 0..count {
                    cite(&mut rng, &mut refs, year, (year + 2).min(LAST_YEAR));
                }
            }
        }
    }

    // Judged pairs from the planted order.
    let mut pairs = Vec::with_capacity(p.pairs);
    let mut attempts = 0usize;
    while pairs.len() < p.pairs && attempts < p.pairs * 500 && n >= 2 {
        attempts += 1;
        let i = rng.gen_range(0..n);
        let j = rng.gen_range(0..n);
        if i == j || (importance[i] - importance[j]).abs() < p.margin {
            continue;
        }
        let (better, worse) = if importance[i] > importance[j] { (i, j) } else { (j, i) };
        pairs.push(JudgedPair {
            better: records[better].article_id.clone(),
            worse: records[worse].article_id.clone(),
        });
    }

    // External records: every withheld venue is recoverable here, some rows
    // duplicate known venues (no-op on enrichment), a few name nothing.
    let mut external = Vec::new();
    for (i, rec) in records.iter().enumerate() {
        if rec.venue_id.is_some() {
            continue;
        }
        let core = &venue_core[true_venue[i]];
        let style = rng.gen_range(0..3u32);
        let raw_venue_name = match style {
            0 => format!(
                "{}th International Conference on {}, {}",
                rng.gen_range(2..40),
                title_case(core),
                rec.year
            ),
            1 => format!("Proceedings of the International Conference on {}", title_case(core)),
            _ => title_case(core),
        };
        external.push(ExternalRecord {
            title: rec.title.clone().unwrap_or_default(),
            year: rec.year,
            raw_venue_name,
            fos_ids: rec.fos_ids.iter().cloned().collect(),
        });
    }
    for (i, rec) in records.iter().enumerate() {
        if i % 97 != 0 || i >= 20 * 97 || rec.venue_id.is_none() {
            continue;
        }
        external.push(ExternalRecord {
            title: rec.title.clone().unwrap_or_default(),
            year: rec.year,
            raw_venue_name: title_case(&venue_core[true_venue[i]]),
            fos_ids: rec.fos_ids.iter().cloned().collect(),
        });
    }
    for k in 0..5 {
        external.push(ExternalRecord {
            title: format!("Unmatched bulletin piece {k}"),
            year: 2000 + k,
            raw_venue_name: format!("Obscure Bulletin of Hermetic Studies No {k}"),
            fos_ids: std::iter::once(format!("f{:02}", k % 40)).collect(),
        });
    }

    let mut table = ArticleTable::from_records(records);
    let venue_names: BTreeMap<String, String> = venue_core
        .iter()
        .enumerate()
        .map(|(j, core)| {
            (
                format!("v{j:03}"),
                format!("International Conference on {}", title_case(core)),
            )
        })
        .collect();
    table.set_venue_names(venue_names);

    SyntheticDataset {
        table,
        refs,
        pairs,
        external,
        importance,
    }
}

/// Writes the corpus as the regular input file set plus `pairs.tsv` and
/// `external.tsv`, ready for the command-line pipeline.
pub fn write_dataset(ds: &SyntheticDataset, dir: &Path) -> Result<()> {
    crate::pipeline::write_table_files(&ds.table, &ds.refs, dir)?;

    let mut pairs = String::new();
    for p in &ds.pairs {
        pairs.push_str(&format!("{}\t{}\n", p.better, p.worse));
    }
    tsv::write_file(&dir.join("pairs.tsv"), &pairs)?;

    let mut external = String::new();
    for rec in &ds.external {
        let fos_ids: Vec<&str> = rec.fos_ids.iter().map(String::as_str).collect();
        external.push_str(&format!(
            "{}\t{}\t{}\t{}\n",
            rec.title,
            rec.year,
            rec.raw_venue_name,
            fos_ids.join(",")
        ));
    }
    tsv::write_file(&dir.join("external.tsv"), &external)?;
    Ok(())
}

struct YearIndex {
    per_year: Vec<Vec<u32>>,
}

impl YearIndex {
    fn new(years: &[i32]) -> YearIndex {
        let span = (LAST_YEAR - FIRST_YEAR + 1) as usize;
        let mut per_year = vec![Vec::new(); span];
        for (i, &y) in years.iter().enumerate() {
            per_year[(y - FIRST_YEAR) as usize].push(i as u32);
        }
        YearIndex { per_year }
    }

    /// Uniform draw over articles published in `[lo, hi]`, excluding one
    /// index. `None` when the span is empty.
    fn sample(&self, rng: &mut ChaCha8Rng, lo: i32, hi: i32, exclude: u32) -> Option<u32> {
        let lo = lo.max(FIRST_YEAR);
        let hi = hi.min(LAST_YEAR);
        if lo > hi {
            return None;
        }
        let slots: usize = self.year_range(lo, hi).map(|ys| ys.len()).sum();
        if slots == 0 {
            return None;
        }
        for _ in 0..8 {
            let mut k = rng.gen_range(0..slots);
            for ys in self.year_range(lo, hi) {
                if k < ys.len() {
                    let candidate = ys[k];
                    if candidate != exclude {
                        return Some(candidate);
                    }
                    break;
                }
                k -= ys.len();
            }
        }
        None
    }

    fn year_range(&self, lo: i32, hi: i32) -> impl Iterator<Item = &Vec<u32>> {
        let a = (lo - FIRST_YEAR) as usize;
        let b = (hi - FIRST_YEAR) as usize;
        self.per_year[a..=b].iter()
    }
}

fn clamp01(x: f64) -> f64 {
    x.clamp(0.02, 0.99)
}

fn jitter(rng: &mut ChaCha8Rng, radius: f64) -> f64 {
    (rng.gen::<f64>() - 0.5) * 2.0 * radius
}

/// Closest-quality pick over a handful of random candidates: correlated
/// with the target but spread across the population.
fn pick_nearest(qualities: &[f64], target: f64, tries: usize, rng: &mut ChaCha8Rng) -> usize {
    let mut best = rng.gen_range(0..qualities.len());
    let mut best_d = (qualities[best] - target).abs();
    for _ in 1..tries {
        let c = rng.gen_range(0..qualities.len());
        let d = (qualities[c] - target).abs();
        if d < best_d {
            best = c;
            best_d = d;
        }
    }
    best
}

fn shuffle<T>(items: &mut [T], rng: &mut ChaCha8Rng) {
    for i in (1..items.len()).rev() {
        let j = rng.gen_range(0..=i);
        items.swap(i, j);
    }
}

fn title_case(core: &str) -> String {
    core.split(' ')
        .map(|w| {
            let mut chars = w.chars();
            match chars.next() {
                Some(c) => c.to_uppercase().collect::<String>() + chars.as_str(),
                None => String::new(),
            }
        })
        .collect::<Vec<_>>()
        .join(" ")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small() -> SyntheticParams {
        SyntheticParams {
            seed: 7,
            articles: 400,
            venues: 12,
            authors: 120,
            affiliations: 20,
            pairs: 80,
            ..Default::default()
        }
    }

    #[test]
    fn same_seed_same_corpus() {
        let a = generate(&small());
        let b = generate(&small());
        assert_eq!(a.refs, b.refs);
        assert_eq!(a.pairs, b.pairs);
        assert_eq!(a.importance, b.importance);
        for (x, y) in a.table.iter().zip(b.table.iter()) {
            assert_eq!(x, y);
        }
    }

    #[test]
    fn different_seeds_differ() {
        let a = generate(&small());
        let b = generate(&SyntheticParams {
            seed: 8,
            ..small()
        });
        assert_ne!(a.refs, b.refs);
    }

    #[test]
    fn pairs_respect_planted_margin() {
        let ds = generate(&small());
        assert_eq!(ds.pairs.len(), 80);
        for pair in &ds.pairs {
            let b = ds.table.index_of(&pair.better).unwrap() as usize;
            let w = ds.table.index_of(&pair.worse).unwrap() as usize;
            assert!(ds.importance[b] >= ds.importance[w] + small().margin - 1e-12);
        }
    }

    #[test]
    fn citations_never_point_forward_in_time() {
        let ds = generate(&small());
        for (citing, cited) in &ds.refs {
            let u = ds.table.index_of(citing).unwrap() as usize;
            let v = ds.table.index_of(cited).unwrap() as usize;
            assert!(ds.table.get(u).year >= ds.table.get(v).year);
        }
    }

    #[test]
    fn withheld_venues_are_recoverable_externally() {
        let ds = generate(&SyntheticParams {
            missing_venue_frac: 0.1,
            ..small()
        });
        let missing = ds.table.iter().filter(|a| a.venue_id.is_none()).count();
        assert!(missing > 0);
        // One external row per withheld article, plus decoys.
        assert!(ds.external.len() > missing);
    }

    #[test]
    fn written_corpus_reingests_cleanly() {
        use crate::ingest::{ingest_dataset, IngestOptions, IngestPaths};
        let ds = generate(&small());
        let dir = tempfile::tempdir().unwrap();
        write_dataset(&ds, dir.path()).unwrap();
        let paths = IngestPaths::from_dir(dir.path());
        assert!(paths.venues.is_some());
        let (table, refs, report) = ingest_dataset(&paths, &IngestOptions::default()).unwrap();
        assert_eq!(table.len(), ds.table.len());
        assert_eq!(refs.len(), ds.refs.len());
        assert_eq!(report.papers_rejected, 0);
        for (a, b) in table.iter().zip(ds.table.iter()) {
            assert_eq!(a, b);
        }
    }
}
