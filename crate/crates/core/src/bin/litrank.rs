//! Command-line front end for the ranking pipeline.
//!
//! The subcommands mirror the pipeline stages: `ingest` stages a raw
//! dataset, `link` attaches external venue names, `rank` computes a
//! ranking, and `eval` scores rankings against judged pairs. All knobs live
//! in an optional TOML config file; a handful of flags override it per run.
//! Exit codes: 0 success, 2 configuration problems, 3 I/O problems, 4 data
//! problems.

use std::path::PathBuf;
use std::process::ExitCode;
use std::str::FromStr;

use clap::{Parser, Subcommand};

use litrank::config::PipelineConfig;
use litrank::ensemble::Method;
use litrank::error::{Error, Result};
use litrank::pipeline;

#[derive(Parser)]
#[command(name = "litrank", version, about = "Time-weighted authority ranking for citation networks")]
struct Cli {
    /// TOML config file; defaults apply when omitted.
    #[arg(long, global = true, value_name = "FILE")]
    config: Option<PathBuf>,

    /// Worker threads (0 = one per core).
    #[arg(long, global = true, default_value_t = 0, value_name = "N")]
    threads: usize,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Validate a raw dataset directory and stage the cleaned tables.
    Ingest {
        /// Directory holding papers.tsv, references.tsv, and friends.
        input_dir: PathBuf,
        /// Replace an already-staged dataset.
        #[arg(long)]
        force: bool,
    },
    /// Link external venue names against the staged venue table.
    Link {
        /// External records: title, year, venue name, comma-joined topics.
        external: PathBuf,
    },
    /// Compute a ranking over the staged dataset.
    Rank {
        /// One of: pr, wpr, ewpr, ewpr-all.
        #[arg(long, value_name = "METHOD")]
        method: Option<String>,
        /// Also write the per-ensemble score tables the fusion consumed.
        #[arg(long)]
        emit_ensembles: bool,
    },
    /// Score a ranking file (or all four methods) against judged pairs.
    Eval {
        /// Ranking TSV; omit when running --ablation.
        #[arg(value_name = "RANKING")]
        first: Option<PathBuf>,
        /// Judged pairs TSV: better-article, worse-article.
        #[arg(value_name = "PAIRS")]
        second: Option<PathBuf>,
        /// Rank-and-score every method over the staged dataset.
        #[arg(long)]
        ablation: bool,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

fn run(cli: Cli) -> Result<()> {
    let config = PipelineConfig::load(cli.config.as_deref())?;
    config.validate()?;

    if cli.threads > 0 {
        rayon::ThreadPoolBuilder::new()
            .num_threads(cli.threads)
            .build_global()
            .map_err(|e| Error::config(format!("thread pool: {e}")))?;
    }

    match cli.command {
        Command::Ingest { input_dir, force } => {
            let report = pipeline::cmd_ingest(&config, &input_dir, force)?;
            println!("{report}");
            println!("staged into {}", config.staging_dir.display());
        }
        Command::Link { external } => {
            let outcome = pipeline::cmd_link(&config, &external)?;
            println!("{}", outcome.report);
            println!("external rows skipped    {}", outcome.external_rows_skipped);
            println!("audit written to {}", outcome.audit_path.display());
        }
        Command::Rank {
            method,
            emit_ensembles,
        } => {
            let method = match method {
                Some(s) => Method::from_str(&s)?,
                None if config.enable_affiliation_ensemble => Method::EwprAll,
                None => Method::Ewpr,
            };
            let outcome = pipeline::cmd_rank(&config, method, emit_ensembles)?;
            for f in &outcome.files {
                println!("wrote {}", f.display());
            }
        }
        Command::Eval {
            first,
            second,
            ablation,
        } => {
            if ablation {
                let pairs = match (first, second) {
                    (Some(p), None) | (None, Some(p)) => p,
                    _ => {
                        return Err(Error::config(
                            "eval --ablation takes exactly one file: the judged pairs TSV",
                        ))
                    }
                };
                let rows = pipeline::cmd_eval_ablation(&config, &pairs)?;
                print!("{}", litrank::eval::ablation_tsv(&rows));
            } else {
                let (Some(ranking), Some(pairs)) = (first, second) else {
                    return Err(Error::config(
                        "eval takes a ranking TSV and a judged pairs TSV (or --ablation with just pairs)",
                    ));
                };
                let report = pipeline::cmd_eval(&config, &ranking, &pairs)?;
                println!(
                    "accuracy {:.6} over {} pairs ({} excluded)",
                    report.accuracy, report.evaluated, report.excluded
                );
            }
        }
    }
    Ok(())
}
