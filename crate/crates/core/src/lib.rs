//! Authority ranking for citation networks.
//!
//! The crate ranks scholarly articles with a time-weighted variant of
//! PageRank: a citation's contribution decays with the gap between the
//! citing year and the cited article's peak-citation year, which keeps
//! once-popular but stale work from coasting on old momentum. On top of the
//! per-article scores it builds venue, author, and affiliation ensembles and
//! fuses them into a single ranking, links free-text venue names from
//! external records onto the venue table, and evaluates any ranking against
//! human-judged article pairs.
//!
//! Data flows through a staging directory: [`pipeline`] validates raw TSV
//! inputs once, persists the cleaned tables, and runs every later stage
//! (linking, ranking, evaluation) off the staged copy. The `litrank` binary
//! is a thin command-line wrapper over those entry points.

pub mod citation;
pub mod config;
pub mod ensemble;
pub mod error;
pub mod eval;
pub mod graph;
pub mod ingest;
pub mod linking;
pub mod pipeline;
pub mod rank;
pub mod scores;
pub mod synthetic;
pub mod tsv;
pub mod venue;
