//! C ABI for the litrank ranking engine.
//!
//! The surface is a small, conventional handle API. Every fallible function
//! returns a [`LitrankStatus`]; `LitrankStatus_Ok` is zero, and out-pointers
//! are written only on success. After a failure, the calling thread can
//! fetch a human-readable message with [`litrank_last_error_message`].
//!
//! Handles (`LitrankDataset`, `LitrankRanking`) are opaque; release each
//! with its matching `_free` function, exactly once. Passing NULL to a
//! `_free` function is a no-op; passing NULL anywhere else yields
//! `LitrankStatus_NullArgument`. Handles are immutable after creation, so
//! sharing a `const` handle across threads is safe; creation and freeing
//! are not synchronized.
//!
//! The generated header lives at `include/litrank.h` and is refreshed by
//! the build script whenever this file changes.

use std::cell::RefCell;
use std::collections::HashMap;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::{Path, PathBuf};

use litrank::citation::build_citation_graph;
use litrank::ensemble::{compute_method_ranking, EnsembleWeights, Method};
use litrank::error::Error;
use litrank::eval::{pairwise_accuracy, read_pairs, TiePolicy};
use litrank::ingest::{ingest_dataset, ArticleTable, IngestOptions, IngestPaths, ReferenceList};
use litrank::rank::RankingParams;
use litrank::scores::RankingVector;

/// Result of every fallible call. The numeric values of `Config`, `Io`, and
/// `Data` match the process exit codes of the `litrank` binary.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LitrankStatus {
    /// Success; out-parameters are valid.
    Ok = 0,
    /// Invalid parameters (bad method name, out-of-range knob).
    Config = 2,
    /// The file system got in the way (missing file, unwritable path).
    Io = 3,
    /// The inputs were readable but malformed or unusable.
    Data = 4,
    /// A required pointer argument was NULL.
    NullArgument = 5,
    /// A string argument was not valid UTF-8.
    InvalidUtf8 = 6,
    /// An internal invariant failed; the library caught a panic.
    Panic = 7,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn fail(status: LitrankStatus, message: String) -> LitrankStatus {
    let message = CString::new(message)
        .unwrap_or_else(|_| CString::new("error message contained a NUL byte").unwrap());
    LAST_ERROR.with(|slot| *slot.borrow_mut() = message);
    status
}

fn fail_with(err: Error) -> LitrankStatus {
    let status = match err.exit_code() {
        2 => LitrankStatus::Config,
        3 => LitrankStatus::Io,
        _ => LitrankStatus::Data,
    };
    fail(status, err.to_string())
}

/// Runs a closure with a panic guard; a caught panic becomes a status
/// instead of unwinding across the C boundary (which would abort).
fn guarded(f: impl FnOnce() -> LitrankStatus) -> LitrankStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(status) => status,
        Err(_) => fail(
            LitrankStatus::Panic,
            "internal panic; this is a bug in litrank".to_string(),
        ),
    }
}

/// Borrows a C string argument, mapping NULL and bad encodings to statuses.
///
/// # Safety
/// `ptr` must be NULL or a NUL-terminated string valid for the call.
unsafe fn utf8_arg<'a>(ptr: *const c_char, what: &str) -> Result<&'a str, LitrankStatus> {
    if ptr.is_null() {
        return Err(fail(
            LitrankStatus::NullArgument,
            format!("{what} must not be NULL"),
        ));
    }
    CStr::from_ptr(ptr)
        .to_str()
        .map_err(|_| fail(LitrankStatus::InvalidUtf8, format!("{what} is not valid UTF-8")))
}

fn null_arg(what: &str) -> LitrankStatus {
    fail(
        LitrankStatus::NullArgument,
        format!("{what} must not be NULL"),
    )
}

/// Message describing the most recent failure on the calling thread, or an
/// empty string when nothing failed yet. The pointer stays valid until the
/// next failing litrank call on the same thread; copy it if you keep it.
#[no_mangle]
pub extern "C" fn litrank_last_error_message() -> *const c_char {
    LAST_ERROR.with(|slot| slot.borrow().as_ptr())
}

/// Library version as a static string; never NULL, never freed.
#[no_mangle]
pub extern "C" fn litrank_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr() as *const c_char
}

/// An ingested corpus: the cleaned article table plus its reference list.
pub struct LitrankDataset {
    table: ArticleTable,
    refs: ReferenceList,
}

/// A computed ranking, ordered best-first, with an id index for lookups.
pub struct LitrankRanking {
    vector: RankingVector,
    /// NUL-terminated copies of the ids, aligned with `vector` order.
    c_ids: Vec<CString>,
    by_id: HashMap<String, f64>,
}

/// Ingests the TSV corpus in `dir` (`papers.tsv`, `references.tsv`, and the
/// optional author/affiliation/field/venue files) into a new dataset
/// handle. A staged directory produced by `litrank ingest` works too — the
/// file layout is the same. Rows that fail validation are dropped, exactly
/// as the command-line ingest does.
///
/// # Safety
/// `dir` must be NULL or a NUL-terminated path; `out` must be NULL or
/// writable. The returned handle must be released with
/// [`litrank_dataset_free`].
#[no_mangle]
pub unsafe extern "C" fn litrank_dataset_open(
    dir: *const c_char,
    out: *mut *mut LitrankDataset,
) -> LitrankStatus {
    guarded(|| {
        let dir = match utf8_arg(dir, "dir") {
            Ok(s) => PathBuf::from(s),
            Err(status) => return status,
        };
        if out.is_null() {
            return null_arg("out");
        }
        let paths = IngestPaths::from_dir(&dir);
        if paths.papers.is_none() {
            return fail(
                LitrankStatus::Io,
                format!("no papers.tsv under {}", dir.display()),
            );
        }
        match ingest_dataset(&paths, &IngestOptions::default()) {
            Ok((table, refs, _report)) => {
                let handle = Box::new(LitrankDataset { table, refs });
                out.write(Box::into_raw(handle));
                LitrankStatus::Ok
            }
            Err(e) => fail_with(e),
        }
    })
}

/// Releases a dataset handle. NULL is a no-op.
///
/// # Safety
/// `ds` must be NULL or a handle from [`litrank_dataset_open`] that has not
/// been freed yet.
#[no_mangle]
pub unsafe extern "C" fn litrank_dataset_free(ds: *mut LitrankDataset) {
    if !ds.is_null() {
        drop(Box::from_raw(ds));
    }
}

/// Number of articles kept by ingestion; 0 for NULL.
///
/// # Safety
/// `ds` must be NULL or a live dataset handle.
#[no_mangle]
pub unsafe extern "C" fn litrank_dataset_article_count(ds: *const LitrankDataset) -> u64 {
    ds.as_ref().map_or(0, |d| d.table.len() as u64)
}

/// Number of raw reference rows read; 0 for NULL.
///
/// # Safety
/// `ds` must be NULL or a live dataset handle.
#[no_mangle]
pub unsafe extern "C" fn litrank_dataset_reference_count(ds: *const LitrankDataset) -> u64 {
    ds.as_ref().map_or(0, |d| d.refs.len() as u64)
}

/// Ranking knobs, passable by value. Zero or negative `epsilon` disables
/// the early stop (the iteration count alone decides).
#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct LitrankParams {
    /// Damping factor in [0, 1].
    pub damping: f64,
    /// Citation-age decay exponent, >= 0; 0 disables aging.
    pub decay_exponent: f64,
    /// Fixed iteration count, >= 1.
    pub iterations: u32,
    /// Early-stop threshold on the max per-iteration change; <= 0 disables.
    pub epsilon: f64,
    /// Venue ensemble weight, >= 0.
    pub alpha: f64,
    /// Author ensemble weight, >= 0.
    pub beta: f64,
    /// Affiliation ensemble weight, >= 0 (only the `ewpr-all` method uses it).
    pub gamma: f64,
}

/// The reference parameterization — the same defaults the binary uses.
#[no_mangle]
pub extern "C" fn litrank_params_default() -> LitrankParams {
    let r = RankingParams::default();
    let w = EnsembleWeights::default();
    LitrankParams {
        damping: r.damping,
        decay_exponent: r.decay_exponent,
        iterations: r.iterations,
        epsilon: r.epsilon.unwrap_or(0.0),
        alpha: w.alpha,
        beta: w.beta,
        gamma: w.gamma,
    }
}

fn split_params(p: &LitrankParams) -> Result<(RankingParams, EnsembleWeights), LitrankStatus> {
    if !p.damping.is_finite() || !(0.0..=1.0).contains(&p.damping) {
        return Err(fail(
            LitrankStatus::Config,
            format!("damping must lie in [0,1], got {}", p.damping),
        ));
    }
    if !p.decay_exponent.is_finite() || p.decay_exponent < 0.0 {
        return Err(fail(
            LitrankStatus::Config,
            format!("decay_exponent must be non-negative, got {}", p.decay_exponent),
        ));
    }
    if p.iterations == 0 {
        return Err(fail(
            LitrankStatus::Config,
            "iterations must be at least 1".to_string(),
        ));
    }
    let weights = EnsembleWeights {
        alpha: p.alpha,
        beta: p.beta,
        gamma: p.gamma,
    };
    if let Err(e) = weights.validate() {
        return Err(fail_with(e));
    }
    let params = RankingParams {
        damping: p.damping,
        decay_exponent: p.decay_exponent,
        iterations: p.iterations,
        epsilon: (p.epsilon > 0.0).then_some(p.epsilon),
    };
    Ok((params, weights))
}

/// Computes a ranking over `ds`. `method` is one of `"pr"`, `"wpr"`,
/// `"ewpr"`, or `"ewpr-all"`; NULL `params` means the defaults. Entries
/// come back ordered best-first.
///
/// # Safety
/// `ds` must be a live dataset handle; `method` NULL or NUL-terminated;
/// `params` NULL or pointing at a valid struct; `out` writable. The
/// returned handle must be released with [`litrank_ranking_free`].
#[no_mangle]
pub unsafe extern "C" fn litrank_rank(
    ds: *const LitrankDataset,
    method: *const c_char,
    params: *const LitrankParams,
    out: *mut *mut LitrankRanking,
) -> LitrankStatus {
    guarded(|| {
        let Some(ds) = ds.as_ref() else {
            return null_arg("ds");
        };
        let method = match utf8_arg(method, "method") {
            Ok(s) => s,
            Err(status) => return status,
        };
        if out.is_null() {
            return null_arg("out");
        }
        let method: Method = match method.parse() {
            Ok(m) => m,
            Err(e) => return fail_with(e),
        };
        let p = params
            .as_ref()
            .copied()
            .unwrap_or_else(|| litrank_params_default());
        let (params, weights) = match split_params(&p) {
            Ok(pair) => pair,
            Err(status) => return status,
        };

        let (cg, _) = build_citation_graph(&ds.table, &ds.refs);
        let vector = match compute_method_ranking(&ds.table, &cg, method, &params, &weights) {
            Ok(v) => v,
            Err(e) => return fail_with(e),
        };

        // Reorder into ranking order once so per-entry access is O(1).
        let mut order: Vec<usize> = (0..vector.ids.len()).collect();
        order.sort_by(|&a, &b| {
            vector.scores[b]
                .total_cmp(&vector.scores[a])
                .then_with(|| vector.ids[a].cmp(&vector.ids[b]))
        });
        let ids: Vec<String> = order.iter().map(|&i| vector.ids[i].clone()).collect();
        let scores: Vec<f64> = order.iter().map(|&i| vector.scores[i]).collect();
        let mut c_ids = Vec::with_capacity(ids.len());
        for id in &ids {
            match CString::new(id.as_str()) {
                Ok(c) => c_ids.push(c),
                Err(_) => {
                    return fail(
                        LitrankStatus::Data,
                        format!("article id {id:?} contains a NUL byte"),
                    )
                }
            }
        }
        let by_id = ids.iter().cloned().zip(scores.iter().copied()).collect();
        let handle = Box::new(LitrankRanking {
            vector: RankingVector::new(vector.provenance, ids, scores),
            c_ids,
            by_id,
        });
        out.write(Box::into_raw(handle));
        LitrankStatus::Ok
    })
}

/// Releases a ranking handle. NULL is a no-op.
///
/// # Safety
/// `r` must be NULL or a handle from [`litrank_rank`] not yet freed.
#[no_mangle]
pub unsafe extern "C" fn litrank_ranking_free(r: *mut LitrankRanking) {
    if !r.is_null() {
        drop(Box::from_raw(r));
    }
}

/// Number of entries in the ranking; 0 for NULL.
///
/// # Safety
/// `r` must be NULL or a live ranking handle.
#[no_mangle]
pub unsafe extern "C" fn litrank_ranking_len(r: *const LitrankRanking) -> u64 {
    r.as_ref().map_or(0, |r| r.vector.ids.len() as u64)
}

/// Fetches the entry at `index` (0 is the best-ranked article). The id
/// pointer borrows from the handle and stays valid until the handle is
/// freed. Either out-pointer may be NULL to skip that field.
///
/// # Safety
/// `r` must be a live ranking handle; non-NULL out-pointers writable.
#[no_mangle]
pub unsafe extern "C" fn litrank_ranking_entry(
    r: *const LitrankRanking,
    index: u64,
    out_id: *mut *const c_char,
    out_score: *mut f64,
) -> LitrankStatus {
    guarded(|| {
        let Some(r) = r.as_ref() else {
            return null_arg("r");
        };
        let Ok(i) = usize::try_from(index) else {
            return fail(LitrankStatus::Data, format!("index {index} out of range"));
        };
        if i >= r.c_ids.len() {
            return fail(
                LitrankStatus::Data,
                format!("index {index} out of range (len {})", r.c_ids.len()),
            );
        }
        if !out_id.is_null() {
            out_id.write(r.c_ids[i].as_ptr());
        }
        if !out_score.is_null() {
            out_score.write(r.vector.scores[i]);
        }
        LitrankStatus::Ok
    })
}

/// Looks up one article's score by id; unknown ids are a `Data` error.
///
/// # Safety
/// `r` must be a live ranking handle; `article_id` NULL or NUL-terminated;
/// `out_score` writable or NULL.
#[no_mangle]
pub unsafe extern "C" fn litrank_ranking_score(
    r: *const LitrankRanking,
    article_id: *const c_char,
    out_score: *mut f64,
) -> LitrankStatus {
    guarded(|| {
        let Some(r) = r.as_ref() else {
            return null_arg("r");
        };
        let id = match utf8_arg(article_id, "article_id") {
            Ok(s) => s,
            Err(status) => return status,
        };
        match r.by_id.get(id) {
            Some(&score) => {
                if !out_score.is_null() {
                    out_score.write(score);
                }
                LitrankStatus::Ok
            }
            None => fail(
                LitrankStatus::Data,
                format!("article {id:?} is not in this ranking"),
            ),
        }
    })
}

/// Writes the ranking as `article_id<TAB>score` lines, best first — the
/// same format the `litrank rank` command emits.
///
/// # Safety
/// `r` must be a live ranking handle; `path` NULL or NUL-terminated.
#[no_mangle]
pub unsafe extern "C" fn litrank_ranking_write_tsv(
    r: *const LitrankRanking,
    path: *const c_char,
) -> LitrankStatus {
    guarded(|| {
        let Some(r) = r.as_ref() else {
            return null_arg("r");
        };
        let path = match utf8_arg(path, "path") {
            Ok(s) => PathBuf::from(s),
            Err(status) => return status,
        };
        match r.vector.write_tsv(&path) {
            Ok(()) => LitrankStatus::Ok,
            Err(e) => fail_with(e),
        }
    })
}

/// Pairwise agreement between a ranking and a judged-pairs file.
#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct LitrankAccuracy {
    /// Fraction of evaluable pairs the ranking ordered correctly, in [0, 1];
    /// ties earn half credit.
    pub accuracy: f64,
    /// Pairs where both articles had scores.
    pub evaluated: u64,
    /// Pairs skipped because at least one side was missing.
    pub excluded: u64,
}

/// Scores the ranking against `better<TAB>worse` pairs read from
/// `pairs_path`. A file with no evaluable pairs is a `Data` error.
///
/// # Safety
/// `r` must be a live ranking handle; `pairs_path` NULL or NUL-terminated;
/// `out` writable or NULL.
#[no_mangle]
pub unsafe extern "C" fn litrank_evaluate(
    r: *const LitrankRanking,
    pairs_path: *const c_char,
    out: *mut LitrankAccuracy,
) -> LitrankStatus {
    guarded(|| {
        let Some(r) = r.as_ref() else {
            return null_arg("r");
        };
        let path = match utf8_arg(pairs_path, "pairs_path") {
            Ok(s) => PathBuf::from(s),
            Err(status) => return status,
        };
        let (pairs, _skipped) = match read_pairs(Path::new(&path)) {
            Ok(pair) => pair,
            Err(e) => return fail_with(e),
        };
        match pairwise_accuracy(&r.vector, &pairs, TiePolicy::Half) {
            Ok(report) => {
                if !out.is_null() {
                    out.write(LitrankAccuracy {
                        accuracy: report.accuracy,
                        evaluated: report.evaluated,
                        excluded: report.excluded,
                    });
                }
                LitrankStatus::Ok
            }
            Err(e) => fail_with(e),
        }
    })
}

/// The citation-age discount on one edge: 1 when the citing year does not
/// exceed the cited article's peak year, otherwise
/// `1 / ln(e + age)^decay_exponent`. Pure; useful for spot checks.
#[no_mangle]
pub extern "C" fn litrank_impact_weight(
    citing_year: i32,
    peak_year: i32,
    decay_exponent: f64,
) -> f64 {
    litrank::rank::impact_weight(citing_year, peak_year, decay_exponent)
}

/// Jaro similarity between two strings, in [0, 1]. Returns -1.0 when
/// either pointer is NULL or not valid UTF-8.
///
/// # Safety
/// `a` and `b` must each be NULL or NUL-terminated.
#[no_mangle]
pub unsafe extern "C" fn litrank_jaro_similarity(a: *const c_char, b: *const c_char) -> f64 {
    if a.is_null() || b.is_null() {
        return -1.0;
    }
    let (Ok(a), Ok(b)) = (CStr::from_ptr(a).to_str(), CStr::from_ptr(b).to_str()) else {
        return -1.0;
    };
    litrank::linking::jaro_similarity(a, b)
}
